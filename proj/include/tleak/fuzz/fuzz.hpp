#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tleak/common/rng.hpp"
#include "tleak/coverage/coverage.hpp"
#include "tleak/diag/diagnose.hpp"
#include "tleak/hdl/ast.hpp"
#include "tleak/leakage/leakage.hpp"
#include "tleak/meg/meg.hpp"
#include "tleak/sim/simulator.hpp"
#include "tleak/sim/stimulus.hpp"

namespace tleak::fuzz {

enum class StructOp { Append, Delete, ReplaceTag, Swap };
enum class CoverageMetric { MegEdges, Branches, Both };

std::string_view to_string(StructOp op);
std::string_view to_string(CoverageMetric m);
StructOp struct_op_from_string(const std::string& s);
CoverageMetric metric_from_string(const std::string& s);

struct FuzzConfig {
    std::size_t mutants_per_seed = 200;
    std::uint64_t rng_seed = 1;
    // Wall-clock cap in seconds. Campaigns normally stop on exhaustion or
    // full coverage first; a run cut short by the cap is flagged.
    double time_budget = 60.0;
    std::set<StructOp> ops = {StructOp::Append, StructOp::Delete, StructOp::ReplaceTag, StructOp::Swap};
    CoverageMetric metric = CoverageMetric::Both;
    // Consecutive non-increasing stimuli that end an exploration phase.
    std::size_t stall_limit = 25;
    std::size_t initial_seeds = 4;
    std::size_t max_steps = 16;
    std::size_t max_rounds = 64;
    std::string corpus_dir;
    unsigned jobs = 1;
    bool all_levels = false;
    std::size_t min_delta = 1;
    std::size_t max_paths = meg::kDefaultMaxPaths;
    std::size_t max_len = meg::kDefaultMaxLen;
    sim::SimOptions sim;
};

nlohmann::json config_to_json(const FuzzConfig& c);
// Missing keys keep their current values in `base`.
FuzzConfig config_from_json(const nlohmann::json& j, FuzzConfig base = {});

struct Seed {
    std::string id;
    sim::Stimulus stimulus;
    std::vector<std::string> new_coverage; // sorted
};

struct MutantBatch {
    std::string seed_id;
    std::vector<sim::Stimulus> mutants;
    std::size_t count = 0;
    bool no_data_fields = false;
};

sim::Stimulus random_stimulus(const sim::Alphabet& a, Rng& rng, std::size_t max_steps);

// Applies one structural operator chosen uniformly from `ops`; falls back to
// Append when the operator does not apply. Returns the operator applied.
StructOp structural_mutate(sim::Stimulus& s, const sim::Alphabet& a, Rng& rng,
                           const std::set<StructOp>& ops, std::size_t max_steps);

// Every mutant redraws every data field of every step uniformly within its
// width; tags, step count and holds are copied from the seed.
MutantBatch operand_mutate(const Seed& seed, const sim::Alphabet& a, const FuzzConfig& cfg, Rng& rng);

// Code-coverage items reached by a run: MEG edges whose inducing assignment
// fired and/or branch arms taken, as "module:e:from>to" / "module:b:id:arm".
class CodeCoverage {
public:
    CodeCoverage(const hdl::DesignHierarchy& h, const std::map<std::string, meg::Meg>& megs, CoverageMetric metric);
    std::set<std::string> items(const sim::ActivityLog& log) const;

private:
    CoverageMetric metric_;
    std::map<std::string, std::map<int, std::vector<std::string>>> edges_by_assign_;
};

struct DiagnosisRecord {
    diag::Diagnosis diagnosis;
    leakage::RunRef run_a;
    leakage::RunRef run_b;
    std::size_t occurrences = 1;
};

struct FailedRun {
    std::string run;
    std::string error;
};

struct CampaignResult {
    std::string design;
    // Source files with content hashes, for line quoting at render time.
    std::vector<hdl::SourceFile> sources;
    FuzzConfig config;
    std::vector<Seed> seeds;
    std::size_t stimuli_explored = 0;
    std::size_t mutants_simulated = 0;
    std::size_t simulated_cycles = 0;
    std::size_t code_items = 0;
    std::size_t rounds = 0;
    std::string stop_reason;
    std::vector<leakage::LeakageFinding> findings;
    std::vector<DiagnosisRecord> diagnoses;
    coverage::CoverageReport coverage;
    std::vector<FailedRun> failed_runs;
};

using Logger = std::function<void(const std::string&)>;

CampaignResult fuzz_loop(const hdl::DesignHierarchy& h, const std::map<std::string, meg::Meg>& megs,
                         const FuzzConfig& cfg, const Logger& log = {});

nlohmann::json seed_to_json(const Seed& s);
Seed seed_from_json(const nlohmann::json& j);
nlohmann::json diagnosis_record_to_json(const DiagnosisRecord& d);
DiagnosisRecord diagnosis_record_from_json(const nlohmann::json& j);
nlohmann::json campaign_to_json(const CampaignResult& r);
CampaignResult campaign_from_json(const nlohmann::json& j);

} // namespace tleak::fuzz
