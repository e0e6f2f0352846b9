#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tleak/hdl/ast.hpp"
#include "tleak/sim/trace.hpp"

namespace tleak::leakage {

struct ExecutionTime {
    std::string instance;
    std::size_t cycles = 0;
    std::size_t last_toggle = 0;
    std::size_t start_cycle = 0;
};

// Execution time of one instance: from the first stimulus step to the last
// cycle at which any of its signals toggles.
ExecutionTime measure(const sim::TraceBundle& bundle, const std::string& instance);

// Identifies a run inside a campaign: the seed it derives from plus the
// mutant index ("" for the seed run itself).
struct RunRef {
    std::string seed;
    std::string mutant;

    std::string str() const { return mutant.empty() ? seed : seed + "/" + mutant; }
    friend auto operator<=>(const RunRef&, const RunRef&) = default;
};

struct LeakageFinding {
    std::string instance;
    std::string module;
    int level = 1;
    RunRef run_a;
    RunRef run_b;
    std::size_t time_a = 0;
    std::size_t time_b = 0;
    std::size_t delta = 0;
    bool first_leaky_level = true;

    friend bool operator==(const LeakageFinding&, const LeakageFinding&) = default;
};

struct RunPair {
    const sim::TraceBundle* a = nullptr;
    const sim::TraceBundle* b = nullptr;
    RunRef ref_a;
    RunRef ref_b;
};

struct AnalyzeOptions {
    std::size_t min_delta = 1;
};

// Deepest instances first. Throws Error{StructuralMismatch} when a pair's
// stimuli differ in tags or step count.
std::vector<LeakageFinding> analyze(const std::vector<RunPair>& pairs, const hdl::DesignHierarchy& h,
                                    const AnalyzeOptions& options = {});

struct TimingDistribution {
    std::string instance;
    std::string group;
    std::vector<std::size_t> samples;
    double median = 0;
    double max_deviation = 0;
};

using GroupFn = std::function<std::string(const sim::Stimulus&)>;

// One distribution per group key, sorted by key. Every name in `groups` must
// receive at least one sample, otherwise Error{EmptyGroup}.
std::vector<TimingDistribution> distributions(const std::vector<const sim::TraceBundle*>& bundles,
                                              const std::string& instance, const GroupFn& group_of,
                                              const std::vector<std::string>& groups = {});

double exact_median(std::vector<std::size_t> samples);

// Named boolean expressions over the data fields of the first stimulus step,
// written as "name:expr". The first classifier that holds names the group;
// stimuli matching none fall into "other".
struct Classifier {
    std::string name;
    hdl::ExprPtr expr;
};

Classifier parse_classifier(const std::string& spec);
GroupFn classify_by(const std::vector<Classifier>& classifiers);

nlohmann::json finding_to_json(const LeakageFinding& f);
LeakageFinding finding_from_json(const nlohmann::json& j);
nlohmann::json distribution_to_json(const TimingDistribution& d);
std::string distributions_csv(const std::vector<TimingDistribution>& ds);

} // namespace tleak::leakage
