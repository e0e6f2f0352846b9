// End-to-end acceptance checks over the bundled designs. Prints one
// PASS/FAIL line per criterion and exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tleak/common/error.hpp"
#include "tleak/common/rng.hpp"
#include "tleak/coverage/coverage.hpp"
#include "tleak/diag/diagnose.hpp"
#include "tleak/fuzz/fuzz.hpp"
#include "tleak/hdl/parser.hpp"
#include "tleak/leakage/leakage.hpp"
#include "tleak/meg/meg.hpp"
#include "tleak/sim/simulator.hpp"
#include "tleak/sim/vcd.hpp"

using namespace tleak;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    double limit_s; // 0: no runtime bound
    std::function<Outcome()> run;
};

sim::Stimulus redraw(const sim::Stimulus& s, const sim::Alphabet& a, Rng& rng) {
    sim::Stimulus out = s;
    for (auto& step : out.steps)
        for (auto& [k, v] : step.data) v = rng.bits(a.width_of(k));
    return out;
}

bool contains(const std::vector<std::string>& xs, const std::string& x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

Outcome latencies() {
    Outcome o;
    auto h = fixtures::load("cacheset");
    const std::pair<const char*, std::size_t> cases[] = {
        {"cacheset_hit", 3}, {"cacheset_miss_free", 19}, {"cacheset_miss_replace", 23}};
    for (const auto& [name, want] : cases) {
        const auto got = leakage::measure(sim::simulate(h, fixtures::stimulus(name)).trace, "cacheset").cycles;
        o.require(got == want, std::string(name) + ": " + std::to_string(got) + " cycles, want " + std::to_string(want));
    }
    return o;
}

Outcome case_study_paths() {
    Outcome o;
    auto megs = meg::build_megs(fixtures::load("cacheset"));
    const auto ps = meg::enumerate_meps(megs.at("cacheset"));
    const std::vector<std::vector<std::string>> want = {
        {"addr", "tag_addr", "way"}, {"addr", "tag_addr", "hit", "fetch", "mem_call", "complete", "way"}};
    for (const auto& w : want) {
        bool found = false;
        for (const auto& p : ps.paths) found |= p.nodes == w;
        o.require(found, "missing path starting " + w.front() + " of length " + std::to_string(w.size()));
    }
    return o;
}

Outcome golden_diagnosis() {
    Outcome o;
    auto h = fixtures::load("cacheset");
    auto megs = meg::build_megs(h);
    std::ifstream in(std::string(TLEAK_DESIGNS_DIR) + "/golden/cacheset_hit_vs_miss.json");
    const auto gold = nlohmann::json::parse(in);
    const auto runs = gold.at("runs").get<std::vector<std::string>>();
    auto stem = [](const std::string& s) { return s.substr(0, s.size() - 5); };
    auto a = sim::simulate(h, fixtures::stimulus(stem(runs[0]))).trace;
    auto b = sim::simulate(h, fixtures::stimulus(stem(runs[1]))).trace;
    const std::string inst = gold.at("instance");
    const auto d = diag::diagnose(a.at(inst), b.at(inst), megs.at(h.instance(inst).module));

    // The compare outcome must split exactly at the reported cycle, and the
    // registers it steers (hit among them) must split on the cycle after the
    // FSM performs the compare in LOOKUP.
    const auto cmp = hdl::parse_expression("(tag_addr == tag) && present");
    std::size_t split = a.cycles;
    for (std::size_t c = 0; c < std::min(a.cycles, b.cycles) && split == a.cycles; ++c)
        if (oracle::eval_at(cmp, a.at(inst), c) != oracle::eval_at(cmp, b.at(inst), c)) split = c;
    o.require(d.divergence_cycle == split, "divergence at " + std::to_string(d.divergence_cycle) +
                                               ", compare outcome splits at " + std::to_string(split));
    const auto& state = a.at(inst).find("state")->values;
    std::size_t lookup = 0;
    while (lookup < state.size() && state[lookup] != 1) ++lookup;
    std::size_t first_reg = a.cycles;
    for (const auto& c : d.culprits) {
        const auto& va = a.at(inst).find(c.signal)->values;
        const auto& vb = b.at(inst).find(c.signal)->values;
        for (std::size_t k = 0; k < std::min(va.size(), vb.size()); ++k)
            if (va[k] != vb[k]) {
                first_reg = std::min(first_reg, k);
                break;
            }
    }
    o.require(first_reg == lookup + 1, "registers split at " + std::to_string(first_reg) + ", compare in cycle " +
                                           std::to_string(lookup));
    const auto& ha = a.at(inst).find("hit")->values;
    const auto& hb = b.at(inst).find("hit")->values;
    o.require(lookup + 1 < ha.size() && ha[lookup + 1] != hb[lookup + 1], "hit does not split after the compare");
    o.require(d.divergence_cycle == gold.at("divergenceCycle").get<std::size_t>(), "divergence cycle differs from golden");
    o.require(d.length_mismatch == gold.at("lengthMismatch").get<bool>(), "length mismatch flag differs from golden");
    o.require(d.instigators == gold.at("instigators").get<std::vector<std::string>>(), "phase 1 differs from golden");
    const auto cs = d.culprit_signals();
    o.require(cs == gold.at("culprits").get<std::vector<std::string>>(), "phase 2 differs from golden");
    o.require(contains(cs, "hit"), "hit is not a culprit");
    o.require(contains(d.instigators, "tag_addr"), "tag_addr is not an instigator");
    return o;
}

Outcome divider_leak() {
    Outcome o;
    auto h = fixtures::load("serdiv");
    auto megs = meg::build_megs(h);
    fuzz::FuzzConfig cfg;
    cfg.time_budget = 60;
    cfg.rng_seed = 42;
    const auto r = fuzz::fuzz_loop(h, megs, cfg);
    const std::string div = "divunit.div";
    bool leaky = false;
    for (const auto& f : r.findings) leaky |= f.instance == div && f.first_leaky_level;
    o.require(leaky, "no first-leaky finding on " + div);
    bool state = false;
    for (const auto& d : r.diagnoses)
        state |= d.diagnosis.instance == div && contains(d.diagnosis.culprit_signals(), "state");
    o.require(state, "no diagnosis of " + div + " names the state register");
    o.require(r.stop_reason != "budget", "campaign was cut by the wall-clock cap");
    const auto again = fuzz::fuzz_loop(h, megs, cfg);
    o.require(fuzz::campaign_to_json(r).dump() == fuzz::campaign_to_json(again).dump(),
              "pinned-seed campaign is not reproducible");
    if (o.ok) o.detail = std::to_string(r.findings.size()) + " findings, " + std::to_string(r.diagnoses.size()) + " diagnoses";
    return o;
}

Outcome ct_alu_sweep() {
    Outcome o;
    auto h = fixtures::load("ct_alu");
    sim::Simulator s(h);
    std::size_t pairs = 0, findings = 0;
    for (const auto& tag : sim::Alphabet::of(h.top_module()).tags) {
        const auto base = s.run({{{tag, {{"a", 0}, {"b", 0}}, 1}}}).trace;
        for (std::uint64_t a = 0; a < 256; ++a)
            for (std::uint64_t b = 0; b < 256; ++b) {
                const auto run = s.run({{{tag, {{"a", a}, {"b", b}}, 1}}}).trace;
                findings += leakage::analyze({{&base, &run, {"base", ""}, {tag, ""}}}, h).size();
                ++pairs;
            }
    }
    o.require(findings == 0, std::to_string(findings) + " findings");
    o.detail = std::to_string(pairs) + " pairs, " + std::to_string(findings) + " findings";
    return o;
}

std::map<std::string, std::set<std::string>> output_ports(const hdl::DesignHierarchy& h) {
    std::map<std::string, std::set<std::string>> out;
    for (const auto& [name, m] : h.modules)
        for (const auto& p : m.ports)
            if (p.kind == hdl::SignalKind::Output) out[name].insert(p.name);
    return out;
}

Outcome meg_oracle() {
    Outcome o;
    for (const auto& dut : fixtures::kDuts) {
        auto h = fixtures::load(dut);
        const auto outs = output_ports(h);
        for (const auto& [name, g] : meg::build_megs(h))
            o.require(oracle::edge_set(g) == oracle::statement_edges(h.module(name), outs), dut + "/" + name);
    }
    return o;
}

Outcome dag_paths() {
    Outcome o;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto g = oracle::random_dag(seed, 10);
        std::set<std::vector<std::string>> got;
        for (const auto& p : meg::enumerate_meps(g).paths) got.insert(p.nodes);
        o.require(got == oracle::brute_force_paths(g), "DAG seed " + std::to_string(seed));
    }
    return o;
}

Outcome coverage_oracle() {
    Outcome o;
    auto h = fixtures::load("serdiv");
    auto megs = meg::build_megs(h);
    sim::Simulator s(h);
    std::map<std::string, std::vector<coverage::PathCondition>> pcs;
    for (const auto& [name, g] : megs)
        for (const auto& p : meg::enumerate_meps(g).paths) pcs[name].push_back(coverage::path_condition(p, g));
    std::size_t checks = 0;
    for (std::uint64_t dd = 0; dd < 16; ++dd)
        for (std::uint64_t dv = 0; dv < 16; ++dv) {
            const auto t = s.run({{{"div", {{"dividend", dd}, {"divisor", dv}}, 1}}}).trace;
            for (const auto& inst : h.instances) {
                const auto& trace = t.at(inst.path);
                const auto& conds = pcs[inst.module];
                const auto got = coverage::match_coverage(trace, conds);
                for (const auto& pc : conds) {
                    ++checks;
                    o.require(got.count(pc.path_id) == oracle::exhaustive_alignment(pc, trace),
                              inst.path + " path " + pc.path_id + " at " + std::to_string(dd) + "/" +
                                  std::to_string(dv));
                }
            }
        }
    if (o.ok) o.detail = std::to_string(checks) + " verdicts";
    return o;
}

Outcome trace_properties() {
    Outcome o;
    std::vector<hdl::DesignHierarchy> designs;
    for (const auto& dut : fixtures::kDuts) designs.push_back(fixtures::load(dut));
    std::vector<std::map<std::string, meg::Meg>> megs;
    std::vector<std::unique_ptr<sim::Simulator>> sims;
    for (const auto& h : designs) {
        megs.push_back(meg::build_megs(h));
        sims.push_back(std::make_unique<sim::Simulator>(h));
    }
    Rng rng(2024);
    std::size_t p1 = 0, p2 = 0, self = 0, det = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = trial % designs.size();
        const auto& h = designs[k];
        const auto alpha = sim::Alphabet::of(h.top_module());
        const auto st = fuzz::random_stimulus(alpha, rng, 4);
        sim::SimOptions opts;
        if (rng.coin()) opts.init = sim::InitPolicy::random(rng.next());
        const auto a = sims[k]->run(st, opts).trace;
        const auto a2 = sims[k]->run(st, opts).trace;
        const auto b = sims[k]->run(redraw(st, alpha, rng), opts).trace;
        for (const auto& inst : h.instances) {
            // P1
            if (a.at(inst.path) == a2.at(inst.path) &&
                leakage::measure(a, inst.path).cycles != leakage::measure(a2, inst.path).cycles)
                ++p1;
            // P2
            if (leakage::measure(a, inst.path).cycles != leakage::measure(b, inst.path).cycles) {
                try {
                    diag::diagnose(a.at(inst.path), b.at(inst.path), megs[k].at(inst.module));
                } catch (const Error&) {
                    ++p2;
                }
            }
        }
        if (!leakage::analyze({{&a, &a, {"a", ""}, {"a", ""}}}, h).empty()) ++self;

        fuzz::FuzzConfig cfg;
        cfg.rng_seed = rng.next();
        cfg.mutants_per_seed = 4;
        cfg.max_rounds = 1;
        cfg.max_steps = 3;
        cfg.stall_limit = 4;
        cfg.initial_seeds = 2;
        const auto x = fuzz::campaign_to_json(fuzz::fuzz_loop(h, megs[k], cfg)).dump();
        const auto y = fuzz::campaign_to_json(fuzz::fuzz_loop(h, megs[k], cfg)).dump();
        if (x != y) ++det;
    }
    o.require(p1 == 0, "P1 violations: " + std::to_string(p1));
    o.require(p2 == 0, "P2 violations: " + std::to_string(p2));
    o.require(self == 0, "self-pair findings: " + std::to_string(self));
    o.require(det == 0, "non-identical campaigns: " + std::to_string(det));
    return o;
}

Outcome vcd_round_trip() {
    Outcome o;
    std::size_t runs = 0;
    for (const auto& dut : fixtures::kDuts) {
        auto h = fixtures::load(dut);
        sim::Simulator s(h);
        std::vector<sim::Stimulus> stimuli;
        for (const auto& e : fs::directory_iterator(std::string(TLEAK_DESIGNS_DIR) + "/stimuli"))
            if (e.path().filename().string().rfind(dut + "_", 0) == 0) stimuli.push_back(sim::load_stimulus(e.path().string()));
        Rng rng(7);
        const auto alpha = sim::Alphabet::of(h.top_module());
        for (int i = 0; i < 50; ++i) stimuli.push_back(fuzz::random_stimulus(alpha, rng, 5));
        for (const auto& st : stimuli) {
            const auto b = s.run(st).trace;
            const auto back = sim::load_vcd(sim::write_vcd(b), {}, &h);
            o.require(back.bundle == b && back.missing_signals.empty(), dut + " run differs after reload");
            ++runs;
        }
    }
    if (o.ok) o.detail = std::to_string(runs) + " runs";
    return o;
}

Outcome mutant_structure() {
    Outcome o;
    std::size_t total = 0, bad = 0;
    Rng rng(99);
    while (total < 10000) {
        for (const auto& dut : fixtures::kDuts) {
            auto h = fixtures::load(dut);
            const auto alpha = sim::Alphabet::of(h.top_module());
            fuzz::Seed seed{"s" + std::to_string(total), fuzz::random_stimulus(alpha, rng, 8), {}};
            fuzz::FuzzConfig cfg;
            cfg.rng_seed = rng.next();
            for (const auto& m : fuzz::operand_mutate(seed, alpha, cfg, rng).mutants) {
                ++total;
                bool same = m.steps.size() == seed.stimulus.steps.size();
                for (std::size_t i = 0; same && i < m.steps.size(); ++i) same = m.steps[i].tag == seed.stimulus.steps[i].tag;
                bad += !same;
            }
        }
    }
    o.require(bad == 0, std::to_string(bad) + " of " + std::to_string(total) + " mutants changed structure");
    if (o.ok) o.detail = std::to_string(total) + " mutants";
    return o;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "cacheset latencies are 3/19/23 cycles", 1, latencies},
        {2, "cacheset hit and miss paths are enumerated", 1, case_study_paths},
        {3, "hit-vs-miss diagnosis matches the golden file", 1, golden_diagnosis},
        {4, "pinned-seed serdiv campaign localizes the divider state", 90, divider_leak},
        {5, "exhaustive 8-bit ct_alu sweep has no findings", 60, ct_alu_sweep},
        {6, "MEG edges equal the statement-walking oracle", 5, meg_oracle},
        {7, "random DAG paths equal brute force", 30, dag_paths},
        {8, "serdiv coverage verdicts equal the alignment oracle", 120, coverage_oracle},
        {9, "trace-function properties over 1000 trials", 0, trace_properties},
        {10, "VCD emit-then-load is bit-identical", 10, vcd_round_trip},
        {11, "operand mutants keep tags and step counts", 0, mutant_structure},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0 && secs > c.limit_s) {
            o.ok = false;
            o.detail = "took longer than " + std::to_string(static_cast<int>(c.limit_s)) + " s";
        }
        failed += !o.ok;
        std::printf("%s %2d %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
