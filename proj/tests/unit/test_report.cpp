#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tleak/common/error.hpp"
#include "tleak/common/hash.hpp"
#include "tleak/report/report.hpp"

using namespace tleak;
namespace fs = std::filesystem;

namespace {

fuzz::CampaignResult serdiv_campaign() {
    auto h = fixtures::load("serdiv");
    auto megs = meg::build_megs(h);
    fuzz::FuzzConfig cfg;
    cfg.rng_seed = 42;
    cfg.mutants_per_seed = 40;
    cfg.max_rounds = 3;
    return fuzz::fuzz_loop(h, megs, cfg);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("empty campaign summary") {
    fuzz::CampaignResult r;
    r.design = "x";
    auto s = report::summarize(r);
    CHECK(s.seeds == 0);
    CHECK(s.findings == 0);
    CHECK(s.timing.empty());
    const auto text = report::render_text(r);
    CHECK(text.find("findings\n  none") != std::string::npos);
    CHECK(text.find("diagnoses\n  none") != std::string::npos);
}

TEST_CASE("serdiv report quotes the state assignment") {
    auto r = serdiv_campaign();
    REQUIRE_FALSE(r.diagnoses.empty());
    const auto text = report::render_text(r);
    CHECK(text.find("state <=") != std::string::npos);
    CHECK(text.find("unavailable") == std::string::npos);
    CHECK(text.find("divunit.div") != std::string::npos);
}

TEST_CASE("summary counts agree with the campaign and round-trip") {
    auto r = serdiv_campaign();
    auto s = report::summarize(r);
    CHECK(s.seeds == r.seeds.size());
    CHECK(s.findings == r.findings.size());
    CHECK(s.diagnoses == r.diagnoses.size());
    CHECK(s.duration == r.simulated_cycles);
    CHECK(s.timing.size() == r.diagnoses.size());
    for (const auto& row : s.timing) {
        CHECK_FALSE(row.lines.empty());
        CHECK(std::is_sorted(row.lines.begin(), row.lines.end()));
    }
    CHECK(report::summary_from_json(report::summary_to_json(s)) == s);
}

TEST_CASE("changed or missing sources are not quoted") {
    const auto dir = fs::temp_directory_path() / "tleak_quote_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto file = (dir / "a.hdl").string();
    std::ofstream(file) << "line one\nline two\n";
    std::vector<hdl::SourceFile> sources{{file, fnv1a(std::string("line one\nline two\n"))}};
    CHECK(report::quote_line(file, 2, sources) == std::optional<std::string>("line two"));
    CHECK_FALSE(report::quote_line(file, 3, sources));
    CHECK_FALSE(report::quote_line(file, 0, sources));
    CHECK_FALSE(report::quote_line((dir / "b.hdl").string(), 1, sources));
    std::ofstream(file) << "edited\nline two\n";
    CHECK_FALSE(report::quote_line(file, 2, sources));
    fs::remove_all(dir);
}

TEST_CASE("render writes every format deterministically") {
    auto r = serdiv_campaign();
    auto megs = meg::build_megs(fixtures::load("serdiv"));
    const auto a = fs::temp_directory_path() / "tleak_render_a";
    const auto b = fs::temp_directory_path() / "tleak_render_b";
    fs::remove_all(a);
    fs::remove_all(b);
    const std::set<report::Format> all{report::Format::Text, report::Format::Json, report::Format::Csv,
                                       report::Format::Dot};
    auto wa = report::render(r, all, a.string(), &megs);
    auto wb = report::render(r, all, b.string(), &megs);
    REQUIRE(wa.size() == wb.size());
    for (const char* name : {"summary.txt", "campaign.json", "summary.json", "findings.json", "diagnoses.json",
                             "coverage.json", "coverage.csv", "findings.csv", "serdiv.dot", "divunit.dot"})
        CHECK(fs::exists(a / name));
    for (const auto& s : r.seeds) CHECK(fs::exists(a / "seeds" / (s.id + ".json")));
    for (std::size_t i = 0; i < wa.size(); ++i)
        CHECK(slurp(wa[i]) == slurp(b / fs::relative(wa[i], a)));
    auto back = fuzz::campaign_from_json(nlohmann::json::parse(slurp(a / "campaign.json")));
    CHECK(report::summarize(back) == report::summarize(r));
    auto findings = nlohmann::json::parse(slurp(a / "findings.json"));
    CHECK(findings.at("findings").size() == r.findings.size());
    CHECK_THROWS_AS(report::render(r, {report::Format::Dot}, a.string()), Error);
    CHECK_THROWS_AS(report::format_from_string("pdf"), Error);
    fs::remove_all(a);
    fs::remove_all(b);
}
