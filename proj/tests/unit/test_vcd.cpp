#include "doctest.h"

#include <sstream>

#include "fixtures.hpp"
#include "tleak/common/error.hpp"
#include "tleak/common/rng.hpp"
#include "tleak/fuzz/fuzz.hpp"
#include "tleak/sim/simulator.hpp"
#include "tleak/sim/vcd.hpp"

using namespace tleak;

namespace {

const char* kHeader = "$timescale 1ns $end\n"
                      "$scope module top $end\n"
                      "$var wire 1 ! clk $end\n"
                      "$var reg 4 \" v $end\n"
                      "$upscope $end\n"
                      "$enddefinitions $end\n";

ErrorKind error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::IoError;
}

} // namespace

TEST_CASE("emit then load is identical for every DUT") {
    for (const auto& dut : fixtures::kDuts) {
        auto h = fixtures::load(dut);
        sim::Simulator s(h);
        Rng rng(11);
        const auto alpha = sim::Alphabet::of(h.top_module());
        for (int i = 0; i < 20; ++i) {
            auto b = s.run(fuzz::random_stimulus(alpha, rng, 5)).trace;
            auto loaded = sim::load_vcd(sim::write_vcd(b), {}, &h);
            CHECK(loaded.bundle == b);
            CHECK(loaded.missing_signals.empty());
            CHECK(loaded.xz_warnings.empty());
        }
    }
}

TEST_CASE("x and z read as zero with warnings") {
    std::string text = kHeader;
    text += "#0\n0!\nbx1z1 \"\n#5\n1!\n#10\n0!\nb1111 \"\n#15\n1!\n#20\n0!\n";
    auto r = sim::load_vcd(text);
    const auto& v = r.bundle.at("top").find("v")->values;
    REQUIRE(v.size() == 2);
    CHECK(v[0] == 0b0101);
    CHECK(v[1] == 0b1111);
    CHECK(r.xz_warnings.at("top.v") == 1);
}

TEST_CASE("values are sampled before the rising edge") {
    std::string text = kHeader;
    text += "#0\n0!\nb0011 \"\n#5\n1!\nb0100 \"\n#10\n0!\n#15\n1!\n";
    auto r = sim::load_vcd(text);
    const auto& v = r.bundle.at("top").find("v")->values;
    REQUIRE(v.size() == 2);
    CHECK(v[0] == 3);
    CHECK(v[1] == 4);
}

TEST_CASE("empty body gives a zero-cycle bundle") {
    auto r = sim::load_vcd(kHeader);
    CHECK(r.bundle.cycles == 0);
}

TEST_CASE("loader errors") {
    CHECK(error_of([] {
              sim::load_vcd("$scope module top $end\n$var wire 1 ! a $end\n$upscope $end\n$enddefinitions $end\n");
          }) == ErrorKind::ClockNotFound);
    CHECK(error_of([] { sim::load_vcd("$scope module top $end\n$var wire 1 ! clk\n"); }) == ErrorKind::VcdParseError);
    CHECK(error_of([] { sim::load_vcd(std::string(kHeader) + "#0\n0?\n"); }) == ErrorKind::VcdParseError);
    auto h = fixtures::load("cacheset");
    CHECK(error_of([&] { sim::load_vcd(kHeader, {}, &h); }) == ErrorKind::UnknownScope);
}

TEST_CASE("scope map renames scopes and missing signals are flagged") {
    auto h = fixtures::load("cacheset");
    auto b = sim::simulate(h, fixtures::stimulus("cacheset_hit")).trace;
    std::string text = sim::write_vcd(b);
    // Drop the `hit` variable from the header.
    const auto at = text.find("$var wire 1 & hit $end\n");
    REQUIRE(at != std::string::npos);
    text.erase(at, std::string("$var wire 1 & hit $end\n").size());
    std::istringstream in(text);
    std::string kept, line;
    while (std::getline(in, line))
        if (line != "0&" && line != "1&") kept += line + "\n";
    text = kept;
    auto r = sim::load_vcd(text, {}, &h);
    CHECK(r.missing_signals == std::vector<std::string>{"cacheset.hit"});

    std::string plain = kHeader;
    plain += "#0\n0!\nb0001 \"\n#5\n1!\n";
    auto renamed = sim::load_vcd(plain, {{"top", "dut"}});
    CHECK(renamed.bundle.find("dut"));
}
