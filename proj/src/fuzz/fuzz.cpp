#include "tleak/fuzz/fuzz.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "tleak/common/error.hpp"
#include "tleak/common/hash.hpp"
#include "tleak/common/parallel.hpp"

namespace tleak::fuzz {

using nlohmann::json;

std::string_view to_string(StructOp op) {
    switch (op) {
    case StructOp::Append: return "append";
    case StructOp::Delete: return "delete";
    case StructOp::ReplaceTag: return "replace-tag";
    case StructOp::Swap: return "swap";
    }
    return "?";
}

std::string_view to_string(CoverageMetric m) {
    switch (m) {
    case CoverageMetric::MegEdges: return "meg-edges";
    case CoverageMetric::Branches: return "branches";
    case CoverageMetric::Both: return "both";
    }
    return "?";
}

StructOp struct_op_from_string(const std::string& s) {
    for (auto op : {StructOp::Append, StructOp::Delete, StructOp::ReplaceTag, StructOp::Swap})
        if (to_string(op) == s) return op;
    throw Error(ErrorKind::ConfigError, "unknown mutation op '" + s + "'");
}

CoverageMetric metric_from_string(const std::string& s) {
    for (auto m : {CoverageMetric::MegEdges, CoverageMetric::Branches, CoverageMetric::Both})
        if (to_string(m) == s) return m;
    throw Error(ErrorKind::ConfigError, "unknown coverage metric '" + s + "'");
}

json config_to_json(const FuzzConfig& c) {
    json ops = json::array();
    for (auto op : c.ops) ops.push_back(std::string(to_string(op)));
    json sim = {
        {"resetCycles", c.sim.reset_cycles},
        {"quiescence", c.sim.quiescence},
        {"maxCycles", c.sim.max_cycles},
        {"init", c.sim.init.kind == sim::InitPolicy::Kind::Zero ? "zero" : "random"},
        {"initSeed", c.sim.init.seed},
    };
    return {
        {"mutantsPerSeed", c.mutants_per_seed},
        {"rngSeed", c.rng_seed},
        {"timeBudget", c.time_budget},
        {"ops", ops},
        {"metric", std::string(to_string(c.metric))},
        {"stallLimit", c.stall_limit},
        {"initialSeeds", c.initial_seeds},
        {"maxSteps", c.max_steps},
        {"maxRounds", c.max_rounds},
        {"corpusDir", c.corpus_dir},
        {"allLevels", c.all_levels},
        {"minDelta", c.min_delta},
        {"maxPaths", c.max_paths},
        {"maxLen", c.max_len},
        {"sim", sim},
    };
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

FuzzConfig config_from_json(const json& j, FuzzConfig c) {
    try {
        if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
        static const std::set<std::string> known = {
            "mutantsPerSeed", "rngSeed", "timeBudget", "ops", "metric", "stallLimit", "initialSeeds", "maxSteps",
            "maxRounds", "corpusDir", "jobs", "allLevels", "minDelta", "maxPaths", "maxLen", "sim"};
        for (const auto& [k, v] : j.items())
            if (!known.count(k)) throw Error(ErrorKind::ConfigError, "unknown config key '" + k + "'");
        take(j, "mutantsPerSeed", c.mutants_per_seed);
        take(j, "rngSeed", c.rng_seed);
        take(j, "timeBudget", c.time_budget);
        if (j.contains("ops")) {
            c.ops.clear();
            for (const auto& op : j.at("ops")) c.ops.insert(struct_op_from_string(op.get<std::string>()));
        }
        if (j.contains("metric")) c.metric = metric_from_string(j.at("metric").get<std::string>());
        take(j, "stallLimit", c.stall_limit);
        take(j, "initialSeeds", c.initial_seeds);
        take(j, "maxSteps", c.max_steps);
        take(j, "maxRounds", c.max_rounds);
        take(j, "corpusDir", c.corpus_dir);
        take(j, "jobs", c.jobs);
        take(j, "allLevels", c.all_levels);
        take(j, "minDelta", c.min_delta);
        take(j, "maxPaths", c.max_paths);
        take(j, "maxLen", c.max_len);
        if (j.contains("sim")) {
            const json& s = j.at("sim");
            take(s, "resetCycles", c.sim.reset_cycles);
            take(s, "quiescence", c.sim.quiescence);
            take(s, "maxCycles", c.sim.max_cycles);
            if (s.contains("init")) {
                const auto kind = s.at("init").get<std::string>();
                if (kind == "zero") c.sim.init.kind = sim::InitPolicy::Kind::Zero;
                else if (kind == "random") c.sim.init.kind = sim::InitPolicy::Kind::Random;
                else throw Error(ErrorKind::ConfigError, "unknown init policy '" + kind + "'");
            }
            take(s, "initSeed", c.sim.init.seed);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, e.what());
    }
    if (c.mutants_per_seed < 1) throw Error(ErrorKind::ConfigError, "mutantsPerSeed must be >= 1");
    if (c.ops.empty()) throw Error(ErrorKind::ConfigError, "at least one mutation op is required");
    if (c.max_steps < 1) throw Error(ErrorKind::ConfigError, "maxSteps must be >= 1");
    if (c.time_budget < 0) throw Error(ErrorKind::ConfigError, "timeBudget must be >= 0");
    return c;
}

namespace {

sim::StimulusStep random_step(const sim::Alphabet& a, Rng& rng) {
    sim::StimulusStep st;
    st.tag = a.tags[rng.below(a.tags.size())];
    for (const auto& [name, width] : a.data) st.data[name] = rng.bits(width);
    return st;
}

} // namespace

sim::Stimulus random_stimulus(const sim::Alphabet& a, Rng& rng, std::size_t max_steps) {
    sim::Stimulus s;
    if (a.tags.empty()) return s;
    const std::size_t n = 1 + rng.below(std::max<std::size_t>(max_steps, 1));
    for (std::size_t i = 0; i < n; ++i) s.steps.push_back(random_step(a, rng));
    return s;
}

StructOp structural_mutate(sim::Stimulus& s, const sim::Alphabet& a, Rng& rng, const std::set<StructOp>& ops,
                           std::size_t max_steps) {
    if (a.tags.empty()) return StructOp::Append;
    const std::vector<StructOp> enabled(ops.begin(), ops.end());
    StructOp op = enabled.empty() ? StructOp::Append : enabled[rng.below(enabled.size())];
    const std::size_t n = s.steps.size();
    if ((op == StructOp::Delete && n < 2) || (op == StructOp::ReplaceTag && n < 1) || (op == StructOp::Swap && n < 2))
        op = StructOp::Append;
    if (op == StructOp::Append && n >= max_steps && n > 0) op = StructOp::ReplaceTag;
    switch (op) {
    case StructOp::Append: {
        const std::size_t at = rng.below(n + 1);
        s.steps.insert(s.steps.begin() + static_cast<std::ptrdiff_t>(at), random_step(a, rng));
        break;
    }
    case StructOp::Delete:
        s.steps.erase(s.steps.begin() + static_cast<std::ptrdiff_t>(rng.below(n)));
        break;
    case StructOp::ReplaceTag:
        s.steps[rng.below(n)].tag = a.tags[rng.below(a.tags.size())];
        break;
    case StructOp::Swap: {
        const std::size_t i = rng.below(n);
        std::size_t j = rng.below(n - 1);
        if (j >= i) ++j;
        std::swap(s.steps[i], s.steps[j]);
        break;
    }
    }
    return op;
}

MutantBatch operand_mutate(const Seed& seed, const sim::Alphabet& a, const FuzzConfig& cfg, Rng& rng) {
    MutantBatch batch;
    batch.seed_id = seed.id;
    batch.no_data_fields = a.data.empty();
    batch.mutants.reserve(cfg.mutants_per_seed);
    for (std::size_t m = 0; m < cfg.mutants_per_seed; ++m) {
        sim::Stimulus s = seed.stimulus;
        for (auto& st : s.steps)
            for (const auto& [name, width] : a.data) st.data[name] = rng.bits(width);
        batch.mutants.push_back(std::move(s));
    }
    batch.count = batch.mutants.size();
    return batch;
}

CodeCoverage::CodeCoverage(const hdl::DesignHierarchy& h, const std::map<std::string, meg::Meg>& megs,
                           CoverageMetric metric)
    : metric_(metric) {
    for (const auto& [name, mod] : h.modules) {
        auto it = megs.find(name);
        if (it == megs.end()) continue;
        auto& by_assign = edges_by_assign_[name];
        for (const auto& e : it->second.edges())
            for (int id : e.origins) by_assign[id].push_back(name + ":e:" + e.from + ">" + e.to);
    }
}

std::set<std::string> CodeCoverage::items(const sim::ActivityLog& log) const {
    std::set<std::string> out;
    if (metric_ != CoverageMetric::Branches) {
        for (const auto& [module, ids] : log.assignments) {
            auto it = edges_by_assign_.find(module);
            if (it == edges_by_assign_.end()) continue;
            for (int id : ids) {
                auto e = it->second.find(id);
                if (e != it->second.end()) out.insert(e->second.begin(), e->second.end());
            }
        }
    }
    if (metric_ != CoverageMetric::MegEdges) {
        for (const auto& [module, arms] : log.branches)
            for (const auto& [branch, arm] : arms)
                out.insert(module + ":b:" + std::to_string(branch) + ":" + std::to_string(arm));
    }
    return out;
}

namespace {

std::string seed_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%04zu", index);
    return buf;
}

std::string mutant_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "m%04zu", index);
    return buf;
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& label) {
    return fnv1a(label, fnv1a(std::to_string(base)));
}

std::string diagnosis_key(const diag::Diagnosis& d) {
    std::string k = d.instance + "|";
    for (const auto& s : d.instigators) k += s + ",";
    k += "|";
    for (const auto& s : d.culprit_signals()) k += s + ",";
    return k;
}

class Campaign {
public:
    Campaign(const hdl::DesignHierarchy& h, const std::map<std::string, meg::Meg>& megs, const FuzzConfig& cfg,
             const Logger& log)
        : h_(h), megs_(megs), cfg_(cfg), log_(log), alphabet_(sim::Alphabet::of(h.top_module())), sim_(h),
          code_(h, megs, cfg.metric), tracker_(h, megs, cfg.max_paths, cfg.max_len), rng_(cfg.rng_seed),
          start_(std::chrono::steady_clock::now()) {
        result_.design = h.top;
        result_.sources = h.sources;
        result_.config = cfg;
    }

    CampaignResult run() {
        if (cfg_.time_budget <= 0) {
            result_.stop_reason = "budget";
            return finish();
        }
        load_corpus();
        while (true) {
            if (result_.rounds >= cfg_.max_rounds) {
                result_.stop_reason = "max-rounds";
                break;
            }
            ++result_.rounds;
            std::vector<std::size_t> fresh;
            if (!explore(fresh)) break;
            if (fresh.empty()) {
                result_.stop_reason = "exhausted";
                break;
            }
            bool stop = false;
            for (std::size_t idx : fresh) {
                if (!exploit(idx)) {
                    stop = true;
                    break;
                }
                if (tracker_.complete()) {
                    result_.stop_reason = "full-coverage";
                    stop = true;
                    break;
                }
            }
            if (stop) break;
        }
        return finish();
    }

private:
    void say(const std::string& msg) const {
        if (log_) log_(msg);
    }

    bool over_budget() {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed < cfg_.time_budget) return false;
        result_.stop_reason = "budget";
        return true;
    }

    void load_corpus() {
        if (cfg_.corpus_dir.empty()) return;
        namespace fs = std::filesystem;
        if (!fs::is_directory(cfg_.corpus_dir))
            throw Error(ErrorKind::IoError, "corpus directory not found: " + cfg_.corpus_dir);
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(cfg_.corpus_dir))
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            sim::Stimulus s = sim::load_stimulus(f.string());
            sim::validate_stimulus(s, h_.top_module());
            pending_.push_back(std::move(s));
        }
        say("corpus: " + std::to_string(pending_.size()) + " stimuli");
    }

    std::optional<sim::SimulationResult> simulate(const sim::Stimulus& s, const std::string& run) {
        sim::SimOptions opts = cfg_.sim;
        opts.run_id = run;
        try {
            auto r = sim_.run(s, opts);
            result_.simulated_cycles += r.trace.cycles;
            return r;
        } catch (const Error& e) {
            result_.failed_runs.push_back({run, e.what()});
            say("run " + run + " failed: " + e.what());
            return std::nullopt;
        }
    }

    sim::Stimulus next_candidate() {
        if (!pending_.empty()) {
            sim::Stimulus s = std::move(pending_.front());
            pending_.erase(pending_.begin());
            return s;
        }
        if (result_.seeds.empty() || explored_random_ < cfg_.initial_seeds) {
            ++explored_random_;
            return random_stimulus(alphabet_, rng_, cfg_.max_steps);
        }
        sim::Stimulus s = result_.seeds[rng_.below(result_.seeds.size())].stimulus;
        structural_mutate(s, alphabet_, rng_, cfg_.ops, cfg_.max_steps);
        return s;
    }

    // Returns false when the budget ran out.
    bool explore(std::vector<std::size_t>& fresh) {
        std::size_t stall = 0;
        while (stall < cfg_.stall_limit) {
            if (over_budget()) return false;
            sim::Stimulus s = next_candidate();
            ++result_.stimuli_explored;
            auto r = simulate(s, "x" + std::to_string(result_.stimuli_explored));
            if (!r) {
                ++stall;
                continue;
            }
            std::vector<std::string> added;
            for (const auto& item : code_.items(r->activity))
                if (covered_.insert(item).second) added.push_back(item);
            if (added.empty()) {
                ++stall;
                continue;
            }
            stall = 0;
            Seed seed{seed_name(result_.seeds.size()), std::move(s), std::move(added)};
            say("seed " + seed.id + ": +" + std::to_string(seed.new_coverage.size()) + " items");
            r->trace.run_id = seed.id;
            seed_runs_[seed.id] = std::move(r->trace);
            fresh.push_back(result_.seeds.size());
            result_.seeds.push_back(std::move(seed));
        }
        result_.code_items = covered_.size();
        return true;
    }

    // Returns false when the budget ran out.
    bool exploit(std::size_t index) {
        if (over_budget()) return false;
        const Seed& seed = result_.seeds[index];
        const sim::TraceBundle seed_run = std::move(seed_runs_.at(seed.id));
        seed_runs_.erase(seed.id);
        tracker_.add(seed_run);

        Rng rng(derive_seed(cfg_.rng_seed, seed.id));
        MutantBatch batch = operand_mutate(seed, alphabet_, cfg_, rng);
        if (batch.no_data_fields) say("warning: design has no data fields; mutants equal their seed");

        std::vector<std::optional<sim::TraceBundle>> runs(batch.count);
        std::vector<std::optional<std::string>> errors(batch.count);
        parallel_for(batch.count, cfg_.jobs, [&](std::size_t i) {
            sim::SimOptions opts = cfg_.sim;
            opts.run_id = seed.id + "/" + mutant_name(i);
            try {
                runs[i] = sim_.run(batch.mutants[i], opts).trace;
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        });
        result_.mutants_simulated += batch.count;

        leakage::AnalyzeOptions aopts;
        aopts.min_delta = cfg_.min_delta;
        for (std::size_t i = 0; i < batch.count; ++i) {
            if (errors[i]) {
                result_.failed_runs.push_back({seed.id + "/" + mutant_name(i), *errors[i]});
                continue;
            }
            const sim::TraceBundle& mutant = *runs[i];
            result_.simulated_cycles += mutant.cycles;
            tracker_.add(mutant);
            const leakage::RunRef ra{seed.id, ""};
            const leakage::RunRef rb{seed.id, mutant_name(i)};
            for (auto& f : leakage::analyze({{&seed_run, &mutant, ra, rb}}, h_, aopts)) {
                if (f.first_leaky_level) record_diagnosis(f, seed_run, mutant);
                if (f.first_leaky_level || cfg_.all_levels) result_.findings.push_back(std::move(f));
            }
        }
        say("exploit " + seed.id + ": " + std::to_string(result_.findings.size()) + " findings total, coverage " +
            std::to_string(tracker_.report().covered()) + "/" + std::to_string(tracker_.report().total()));
        return true;
    }

    void record_diagnosis(const leakage::LeakageFinding& f, const sim::TraceBundle& a, const sim::TraceBundle& b) {
        auto g = megs_.find(f.module);
        if (g == megs_.end()) return;
        try {
            const bool seed_first = f.run_a.mutant.empty();
            const auto& ta = (seed_first ? a : b).at(f.instance);
            const auto& tb = (seed_first ? b : a).at(f.instance);
            diag::Diagnosis d = diag::diagnose(ta, tb, g->second);
            const std::string key = diagnosis_key(d);
            auto it = diag_index_.find(key);
            if (it != diag_index_.end()) {
                ++result_.diagnoses[it->second].occurrences;
                return;
            }
            diag_index_[key] = result_.diagnoses.size();
            result_.diagnoses.push_back({std::move(d), f.run_a, f.run_b, 1});
        } catch (const Error& e) {
            say("diagnose " + f.run_a.str() + " vs " + f.run_b.str() + " failed: " + e.what());
        }
    }

    CampaignResult finish() {
        result_.coverage = tracker_.report();
        result_.code_items = covered_.size();
        if (result_.stop_reason.empty()) result_.stop_reason = "exhausted";
        std::sort(result_.findings.begin(), result_.findings.end(), [](const auto& x, const auto& y) {
            return std::tie(x.run_a, x.run_b, y.level, x.instance) < std::tie(y.run_a, y.run_b, x.level, y.instance);
        });
        return std::move(result_);
    }

    const hdl::DesignHierarchy& h_;
    const std::map<std::string, meg::Meg>& megs_;
    const FuzzConfig& cfg_;
    const Logger& log_;
    sim::Alphabet alphabet_;
    sim::Simulator sim_;
    CodeCoverage code_;
    coverage::CoverageTracker tracker_;
    Rng rng_;
    std::chrono::steady_clock::time_point start_;
    CampaignResult result_;
    std::set<std::string> covered_;
    std::vector<sim::Stimulus> pending_;
    std::size_t explored_random_ = 0;
    std::map<std::string, sim::TraceBundle> seed_runs_;
    std::map<std::string, std::size_t> diag_index_;
};

} // namespace

CampaignResult fuzz_loop(const hdl::DesignHierarchy& h, const std::map<std::string, meg::Meg>& megs,
                         const FuzzConfig& cfg, const Logger& log) {
    if (cfg.mutants_per_seed < 1) throw Error(ErrorKind::ConfigError, "mutants per seed must be >= 1");
    Campaign c(h, megs, cfg, log);
    return c.run();
}

json seed_to_json(const Seed& s) {
    return {{"id", s.id}, {"stimulus", sim::stimulus_to_json(s.stimulus)}, {"newCoverage", s.new_coverage}};
}

Seed seed_from_json(const json& j) {
    return {j.at("id").get<std::string>(), sim::stimulus_from_json(j.at("stimulus")),
            j.at("newCoverage").get<std::vector<std::string>>()};
}

json diagnosis_record_to_json(const DiagnosisRecord& d) {
    json j = diag::diagnosis_to_json(d.diagnosis);
    j["runA"] = d.run_a.str();
    j["seedA"] = d.run_a.seed;
    j["mutantA"] = d.run_a.mutant;
    j["runB"] = d.run_b.str();
    j["seedB"] = d.run_b.seed;
    j["mutantB"] = d.run_b.mutant;
    j["occurrences"] = d.occurrences;
    return j;
}

DiagnosisRecord diagnosis_record_from_json(const json& j) {
    DiagnosisRecord d;
    d.diagnosis = diag::diagnosis_from_json(j);
    d.run_a = {j.at("seedA").get<std::string>(), j.at("mutantA").get<std::string>()};
    d.run_b = {j.at("seedB").get<std::string>(), j.at("mutantB").get<std::string>()};
    d.occurrences = j.at("occurrences").get<std::size_t>();
    return d;
}

json campaign_to_json(const CampaignResult& r) {
    json seeds = json::array();
    for (const auto& s : r.seeds) seeds.push_back(seed_to_json(s));
    json findings = json::array();
    for (const auto& f : r.findings) findings.push_back(leakage::finding_to_json(f));
    json diags = json::array();
    for (const auto& d : r.diagnoses) diags.push_back(diagnosis_record_to_json(d));
    json sources = json::array();
    for (const auto& f : r.sources) sources.push_back({{"path", f.path}, {"hash", hex64(f.hash)}});
    json failed = json::array();
    for (const auto& f : r.failed_runs) failed.push_back({{"run", f.run}, {"error", f.error}});
    return {
        {"schemaVersion", 1},
        {"design", r.design},
        {"sources", sources},
        {"config", config_to_json(r.config)},
        {"stimuliExplored", r.stimuli_explored},
        {"mutantsSimulated", r.mutants_simulated},
        {"simulatedCycles", r.simulated_cycles},
        {"codeItems", r.code_items},
        {"rounds", r.rounds},
        {"stopReason", r.stop_reason},
        {"seeds", seeds},
        {"findings", findings},
        {"diagnoses", diags},
        {"coverage", coverage::coverage_to_json(r.coverage)},
        {"failedRuns", failed},
    };
}

CampaignResult campaign_from_json(const json& j) {
    CampaignResult r;
    r.design = j.at("design").get<std::string>();
    for (const auto& f : j.at("sources"))
        r.sources.push_back({f.at("path").get<std::string>(), std::stoull(f.at("hash").get<std::string>(), nullptr, 16)});
    r.config = config_from_json(j.at("config"));
    r.stimuli_explored = j.at("stimuliExplored").get<std::size_t>();
    r.mutants_simulated = j.at("mutantsSimulated").get<std::size_t>();
    r.simulated_cycles = j.at("simulatedCycles").get<std::size_t>();
    r.code_items = j.at("codeItems").get<std::size_t>();
    r.rounds = j.at("rounds").get<std::size_t>();
    r.stop_reason = j.at("stopReason").get<std::string>();
    for (const auto& s : j.at("seeds")) r.seeds.push_back(seed_from_json(s));
    for (const auto& f : j.at("findings")) r.findings.push_back(leakage::finding_from_json(f));
    for (const auto& d : j.at("diagnoses")) r.diagnoses.push_back(diagnosis_record_from_json(d));
    r.coverage = coverage::coverage_from_json(j.at("coverage"));
    for (const auto& f : j.at("failedRuns"))
        r.failed_runs.push_back({f.at("run").get<std::string>(), f.at("error").get<std::string>()});
    return r;
}

} // namespace tleak::fuzz
