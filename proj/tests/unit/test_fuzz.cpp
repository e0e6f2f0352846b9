#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "tleak/common/error.hpp"
#include "tleak/fuzz/fuzz.hpp"

using namespace tleak;

namespace {

std::vector<std::string> tags_of(const sim::Stimulus& s) {
    std::vector<std::string> out;
    for (const auto& st : s.steps) out.push_back(st.tag);
    return out;
}

fuzz::FuzzConfig quick(std::uint64_t seed) {
    fuzz::FuzzConfig c;
    c.rng_seed = seed;
    c.mutants_per_seed = 40;
    c.max_rounds = 4;
    c.max_steps = 4;
    return c;
}

} // namespace

TEST_CASE("structural mutation falls back to append") {
    auto h = fixtures::load("serdiv");
    const auto alpha = sim::Alphabet::of(h.top_module());
    Rng rng(1);
    sim::Stimulus empty;
    CHECK(fuzz::structural_mutate(empty, alpha, rng, {fuzz::StructOp::Delete}, 8) == fuzz::StructOp::Append);
    CHECK(empty.steps.size() == 1);
    const sim::StimulusStep kept{"div", {{"dividend", 5}, {"divisor", 2}}, 1};
    sim::Stimulus one{{kept}};
    CHECK(fuzz::structural_mutate(one, alpha, rng, {fuzz::StructOp::Swap}, 8) == fuzz::StructOp::Append);
    REQUIRE(one.steps.size() == 2);
    CHECK((one.steps[0] == kept || one.steps[1] == kept));
}

TEST_CASE("structural mutation is deterministic and keeps stimuli valid") {
    auto h = fixtures::load("cacheset");
    const auto alpha = sim::Alphabet::of(h.top_module());
    auto run = [&](std::uint64_t seed) {
        Rng rng(seed);
        sim::Stimulus s = fuzz::random_stimulus(alpha, rng, 6);
        std::vector<sim::Stimulus> out;
        for (int i = 0; i < 200; ++i) {
            fuzz::structural_mutate(s, alpha, rng, {fuzz::StructOp::Append, fuzz::StructOp::Delete,
                                                    fuzz::StructOp::ReplaceTag, fuzz::StructOp::Swap},
                                    6);
            sim::validate_stimulus(s, h.top_module());
            CHECK(s.steps.size() <= 6);
            out.push_back(s);
        }
        return out;
    };
    CHECK(run(9) == run(9));
    CHECK(run(9) != run(10));
}

TEST_CASE("operator frequencies are near uniform") {
    auto h = fixtures::load("cacheset");
    const auto alpha = sim::Alphabet::of(h.top_module());
    Rng rng(77);
    const std::set<fuzz::StructOp> all{fuzz::StructOp::Append, fuzz::StructOp::Delete, fuzz::StructOp::ReplaceTag,
                                       fuzz::StructOp::Swap};
    std::map<fuzz::StructOp, int> freq;
    sim::Stimulus s = fuzz::random_stimulus(alpha, rng, 8);
    for (int i = 0; i < 10000; ++i) ++freq[fuzz::structural_mutate(s, alpha, rng, all, 8)];
    const double uniform = 10000.0 / 4;
    for (auto op : all) {
        CAPTURE(fuzz::to_string(op));
        CHECK(freq[op] > uniform / 5);
        CHECK(freq[op] < uniform * 5);
    }
}

TEST_CASE("operand mutants keep structure and redraw data") {
    auto h = fixtures::load("cacheset");
    const auto alpha = sim::Alphabet::of(h.top_module());
    Rng rng(3);
    fuzz::Seed seed{"s0000", fuzz::random_stimulus(alpha, rng, 5), {}};
    fuzz::FuzzConfig cfg;
    cfg.mutants_per_seed = 10000;
    auto batch = fuzz::operand_mutate(seed, alpha, cfg, rng);
    CHECK(batch.count == 10000);
    CHECK_FALSE(batch.no_data_fields);
    for (const auto& m : batch.mutants) {
        CHECK(tags_of(m) == tags_of(seed.stimulus));
        REQUIRE(m.steps.size() == seed.stimulus.steps.size());
        for (std::size_t i = 0; i < m.steps.size(); ++i) CHECK(m.steps[i].hold == seed.stimulus.steps[i].hold);
        sim::validate_stimulus(m, h.top_module());
    }
    Rng again(3);
    fuzz::random_stimulus(alpha, again, 5);
    CHECK(fuzz::operand_mutate(seed, alpha, cfg, again).mutants == batch.mutants);
}

TEST_CASE("a zero divisor appears in a batch at the expected rate") {
    auto h = fixtures::load("serdiv");
    const auto alpha = sim::Alphabet::of(h.top_module());
    fuzz::Seed seed{"s0000", {{{"div", {{"dividend", 100}, {"divisor", 7}}, 1}}}, {}};
    fuzz::FuzzConfig cfg;
    const int trials = 1000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        cfg.rng_seed = 1000 + t;
        Rng rng(cfg.rng_seed);
        auto batch = fuzz::operand_mutate(seed, alpha, cfg, rng);
        bool zero = false;
        for (const auto& m : batch.mutants) zero |= m.steps[0].data.at("divisor") == 0;
        hits += zero;
    }
    const double p = 1.0 - std::pow(1.0 - 1.0 / 256, 200);
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(static_cast<double>(hits) / trials > p - 4 * sigma);
}

TEST_CASE("designs without data fields still produce a batch") {
    auto h = hdl::parse_design({{"t.hdl", "module m(input clk, input go, output reg q);\n//@tag t go=1\n"
                                          "always @(posedge clk) q <= go; endmodule"}});
    const auto alpha = sim::Alphabet::of(h.top_module());
    Rng rng(1);
    fuzz::Seed seed{"s0000", {{{"t", {}, 1}}}, {}};
    fuzz::FuzzConfig cfg;
    cfg.mutants_per_seed = 5;
    auto batch = fuzz::operand_mutate(seed, alpha, cfg, rng);
    CHECK(batch.no_data_fields);
    CHECK(batch.count == 5);
    for (const auto& m : batch.mutants) CHECK(m == seed.stimulus);
}

TEST_CASE("zero budget gives an empty result") {
    auto h = fixtures::load("serdiv");
    auto megs = meg::build_megs(h);
    auto cfg = quick(1);
    cfg.time_budget = 0;
    auto r = fuzz::fuzz_loop(h, megs, cfg);
    CHECK(r.seeds.empty());
    CHECK(r.findings.empty());
    CHECK(r.stimuli_explored == 0);
}

TEST_CASE("campaigns are reproducible, also across job counts") {
    auto h = fixtures::load("serdiv");
    auto megs = meg::build_megs(h);
    auto cfg = quick(5);
    const auto a = fuzz::campaign_to_json(fuzz::fuzz_loop(h, megs, cfg)).dump();
    const auto b = fuzz::campaign_to_json(fuzz::fuzz_loop(h, megs, cfg)).dump();
    cfg.jobs = 3;
    const auto c = fuzz::campaign_to_json(fuzz::fuzz_loop(h, megs, cfg)).dump();
    CHECK(a == b);
    CHECK(a == c);
    auto back = fuzz::campaign_from_json(nlohmann::json::parse(a));
    CHECK(fuzz::campaign_to_json(back).dump() == a);
}

TEST_CASE("campaign invariants") {
    for (const char* dut : {"serdiv", "cacheset", "ct_alu"}) {
        auto h = fixtures::load(dut);
        auto megs = meg::build_megs(h);
        auto r = fuzz::fuzz_loop(h, megs, quick(11));
        CAPTURE(dut);
        CHECK_FALSE(r.seeds.empty());
        fuzz::CodeCoverage code(h, megs, r.config.metric);
        std::set<std::string> seen;
        for (const auto& s : r.seeds) {
            auto items = code.items(sim::simulate(h, s.stimulus, r.config.sim).activity);
            std::vector<std::string> fresh;
            for (const auto& i : items)
                if (!seen.count(i)) fresh.push_back(i);
            CHECK_FALSE(s.new_coverage.empty());
            CHECK(s.new_coverage == fresh);
            seen.insert(items.begin(), items.end());
        }
        for (const auto& f : r.findings) {
            CHECK(f.run_a.seed == f.run_b.seed);
            CHECK(f.first_leaky_level);
        }
        if (std::string(dut) == "ct_alu") CHECK(r.findings.empty());
        if (std::string(dut) == "serdiv") {
            REQUIRE_FALSE(r.diagnoses.empty());
            for (const auto& d : r.diagnoses) {
                const auto cs = d.diagnosis.culprit_signals();
                CHECK(std::find(cs.begin(), cs.end(), "state") != cs.end());
            }
        }
    }
}

TEST_CASE("corpus stimuli are explored first") {
    auto dir = std::filesystem::temp_directory_path() / "tleak_corpus_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "a.json") << R"([{"tag":"div","data":{"dividend":200,"divisor":0}}])";
    auto h = fixtures::load("serdiv");
    auto megs = meg::build_megs(h);
    auto cfg = quick(2);
    cfg.corpus_dir = dir.string();
    auto r = fuzz::fuzz_loop(h, megs, cfg);
    REQUIRE_FALSE(r.seeds.empty());
    CHECK(r.seeds[0].stimulus.steps.at(0).data.at("divisor") == 0);
    std::ofstream(dir / "b.json") << R"([{"tag":"nope"}])";
    CHECK_THROWS_AS(fuzz::fuzz_loop(h, megs, cfg), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config JSON") {
    fuzz::FuzzConfig c;
    c.mutants_per_seed = 17;
    c.ops = {fuzz::StructOp::Swap};
    c.metric = fuzz::CoverageMetric::Branches;
    c.sim.quiescence = 3;
    auto back = fuzz::config_from_json(fuzz::config_to_json(c));
    CHECK(fuzz::config_to_json(back) == fuzz::config_to_json(c));
    CHECK_THROWS_WITH_AS(fuzz::config_from_json(nlohmann::json::parse(R"({"bogus":1})")),
                         doctest::Contains("ConfigError"), Error);
    CHECK_THROWS_AS(fuzz::config_from_json(nlohmann::json::parse(R"({"mutantsPerSeed":0})")), Error);
    auto partial = fuzz::config_from_json(nlohmann::json::parse(R"({"rngSeed":9})"), c);
    CHECK(partial.rng_seed == 9);
    CHECK(partial.mutants_per_seed == 17);
}
