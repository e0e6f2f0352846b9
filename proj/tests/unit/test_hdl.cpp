#include "doctest.h"

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tleak/common/error.hpp"
#include "tleak/hdl/hierarchy.hpp"
#include "tleak/hdl/parser.hpp"
#include "tleak/hdl/printer.hpp"

using namespace tleak;

namespace {

hdl::DesignHierarchy parse_text(const std::string& text, std::optional<std::string> top = std::nullopt) {
    return hdl::parse_design({{"t.hdl", text}}, top);
}

ErrorKind error_of(const std::string& text) {
    try {
        parse_text(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::IoError;
}

void walk_locs(const hdl::StmtList& body, int max_line, int& count) {
    for (const auto& s : body) {
        ++count;
        CHECK(s.loc.line >= 1);
        CHECK(s.loc.line <= max_line);
        CHECK(s.loc.column >= 1);
        walk_locs(s.then_body, max_line, count);
        walk_locs(s.else_body, max_line, count);
        for (const auto& a : s.arms) walk_locs(a.body, max_line, count);
        walk_locs(s.default_body, max_line, count);
    }
}

int count_branches_assigning(const hdl::StmtList& body, const std::string& target) {
    int n = 0;
    for (const auto& s : body) {
        if (s.kind == hdl::StmtKind::If) {
            for (const auto& t : s.then_body)
                if (t.kind == hdl::StmtKind::Assign && t.dest.name == target) {
                    ++n;
                    break;
                }
            n += count_branches_assigning(s.then_body, target);
            n += count_branches_assigning(s.else_body, target);
        } else if (s.kind == hdl::StmtKind::Case) {
            for (const auto& a : s.arms) n += count_branches_assigning(a.body, target);
            n += count_branches_assigning(s.default_body, target);
        }
    }
    return n;
}

} // namespace

TEST_CASE("cacheset elaborates with the expected elements") {
    auto h = fixtures::load("cacheset");
    CHECK(h.top == "cacheset");
    const auto& m = h.top_module();
    const auto* addr = m.find_signal("addr");
    REQUIRE(addr);
    CHECK(addr->kind == hdl::SignalKind::Input);
    CHECK(addr->width == 8);
    CHECK(m.find_signal("tag_addr")->kind == hdl::SignalKind::Wire);
    for (const char* r : {"hit", "fetch", "state"}) CHECK(m.find_signal(r)->kind == hdl::SignalKind::Reg);
    CHECK(m.find_signal("way")->kind == hdl::SignalKind::Output);
    CHECK(m.find_signal("way")->is_reg);
    REQUIRE(m.instances.size() == 1);
    CHECK(m.instances[0].instance_name == "mem_call");
    CHECK(m.instances[0].module_name == "cache_mem");
    REQUIRE(m.tags.size() == 1);
    CHECK(m.tags[0].name == "access");
    CHECK(m.data_inputs == std::vector<std::string>{"addr"});
}

TEST_CASE("empty module has one port and no items") {
    auto h = parse_text("module m(input clk); endmodule");
    const auto& m = h.top_module();
    CHECK(m.ports.size() == 1);
    CHECK(m.items.empty());
    CHECK(m.instances.empty());
}

TEST_CASE("multiway hit and way sit under two distinct tag compares") {
    auto h = fixtures::load("cacheset_multiway");
    int hit = 0, way = 0;
    for (const auto& item : h.top_module().items)
        if (const auto* b = std::get_if<hdl::AlwaysBlock>(&item)) {
            hit += count_branches_assigning(b->body, "hit");
            way += count_branches_assigning(b->body, "way");
        }
    CHECK(hit >= 2);
    CHECK(way >= 2);
}

TEST_CASE("print then parse yields the same AST") {
    for (const auto& dut : fixtures::kDuts) {
        CAPTURE(dut);
        auto h = fixtures::load(dut);
        for (const auto& [name, m] : h.modules) {
            const std::string text = hdl::print_module(m);
            auto again = hdl::parse_modules({"printed.hdl", text});
            REQUIRE(again.size() == 1);
            CHECK(hdl::module_to_json(again[0], false) == hdl::module_to_json(m, false));
        }
    }
}

TEST_CASE("every statement location lies inside the source") {
    for (const auto& dut : fixtures::kDuts) {
        const std::string text = hdl::read_file(fixtures::design_path(dut));
        const int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n')) + 1;
        auto h = fixtures::load(dut);
        int count = 0;
        for (const auto& [name, m] : h.modules)
            for (const auto& item : m.items) {
                if (const auto* b = std::get_if<hdl::AlwaysBlock>(&item)) walk_locs(b->body, lines, count);
                else CHECK(std::get<hdl::ContinuousAssign>(item).loc.line <= lines);
            }
        CHECK(count > 0);
    }
}

TEST_CASE("frontend errors") {
    CHECK(error_of("module m(input clk) endmodule") == ErrorKind::SyntaxError);
    CHECK(error_of("module m(input clk, output y); assign y = q; endmodule") == ErrorKind::UnresolvedIdentifier);
    CHECK(error_of("module a(input clk); b u(.clk(clk)); endmodule\n"
                   "module b(input clk); a v(.clk(clk)); endmodule\n"
                   "module t(input clk); a w(.clk(clk)); endmodule") == ErrorKind::RecursiveInstantiation);
    CHECK(error_of("module c(input clk, input x); endmodule\n"
                   "module t(input clk); c u(.clk(clk), .nope(clk)); endmodule") == ErrorKind::PortMismatch);
    CHECK(error_of("module c(input clk, input x); endmodule\n"
                   "module t(input clk, input y); c u(.clk(clk), .x(y), .x(y)); endmodule") == ErrorKind::PortMismatch);
    CHECK(error_of("module m #(parameter W = 4) (input clk); endmodule") == ErrorKind::Unsupported);
}

TEST_CASE("syntax errors carry a 1-based location") {
    try {
        parse_text("module m(input clk);\n  assign = 1;\nendmodule");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        REQUIRE(e.loc());
        CHECK(e.loc()->line == 2);
        CHECK(e.loc()->column >= 1);
    }
}

TEST_CASE("levelize small hierarchies") {
    auto single = parse_text("module m(input clk); endmodule");
    CHECK(hdl::levelize(single) == std::vector<std::vector<std::string>>{{"m"}});
    auto cache = fixtures::load("cacheset");
    CHECK(hdl::levelize(cache) == std::vector<std::vector<std::string>>{{"cacheset.mem_call"}, {"cacheset"}});
}

TEST_CASE("levelize random four-level trees against a depth oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        // l3 leaves, l2 and l1 with random fan-out, top t.
        std::ostringstream src;
        src << "module l3(input clk); endmodule\n";
        for (int lvl = 2; lvl >= 0; --lvl) {
            const std::string name = lvl == 0 ? "t" : "l" + std::to_string(lvl);
            const std::string child = "l" + std::to_string(lvl + 1);
            src << "module " << name << "(input clk);\n";
            const int fan = 1 + static_cast<int>(rng() % 3);
            for (int k = 0; k < fan; ++k) src << "  " << child << " u" << (rng() % 100) << "_" << k << "(.clk(clk));\n";
            src << "endmodule\n";
        }
        auto h = parse_text(src.str(), "t");
        const auto got = hdl::levelize(h);
        CHECK(got == oracle::levels_by_depth(h));
        CHECK(got.size() == 4);
        std::size_t total = 0;
        for (const auto& g : got) total += g.size();
        CHECK(total == h.instances.size());
        for (const auto& inst : h.instances)
            if (!inst.parent.empty()) CHECK(inst.level == h.instance(inst.parent).level + 1);
    }
}
