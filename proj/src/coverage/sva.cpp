#include "tleak/coverage/sva.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "tleak/common/error.hpp"
#include "tleak/coverage/coverage.hpp"
#include "tleak/hdl/parser.hpp"

namespace tleak::coverage {

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(std::string_view lit) {
        ws();
        if (s.compare(i, lit.size(), lit) != 0) return false;
        i += lit.size();
        return true;
    }
    bool at_end() {
        ws();
        return i >= s.size();
    }
};

bool parse_int(Cursor& c, int& out) {
    c.ws();
    const std::size_t start = c.i;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
    if (c.i == start) return false;
    out = std::stoi(c.s.substr(start, c.i - start));
    return true;
}

// Returns an error message, or "" on success.
std::string parse_delay(Cursor& c, int& lo, int& hi) {
    if (!c.eat("##")) return "expected '##'";
    if (c.eat("[")) {
        if (!parse_int(c, lo)) return "expected delay lower bound";
        if (!c.eat(":")) return "expected ':' in delay range";
        if (c.eat("$")) {
            hi = -1;
        } else if (!parse_int(c, hi) || hi < lo) {
            return "bad delay upper bound";
        }
        if (!c.eat("]")) return "expected ']' after delay range";
        return "";
    }
    if (!parse_int(c, lo)) return "expected delay count";
    hi = lo;
    return "";
}

std::string parse_term(Cursor& c, std::string& expr) {
    c.ws();
    if (c.eat("1'b1")) {
        expr = "1'b1";
        return "";
    }
    if (c.i >= c.s.size() || c.s[c.i] != '(') return "expected boolean term";
    int depth = 0;
    const std::size_t start = c.i;
    for (; c.i < c.s.size(); ++c.i) {
        if (c.s[c.i] == '(') ++depth;
        if (c.s[c.i] == ')' && --depth == 0) {
            ++c.i;
            break;
        }
    }
    if (depth != 0) return "unbalanced parentheses";
    expr = c.s.substr(start, c.i - start);
    try {
        hdl::parse_expression(expr, "<sva>");
    } catch (const Error& e) {
        return std::string("bad boolean term: ") + e.what();
    }
    return "";
}

std::string parse_line(const std::string& line, SvaProperty& out) {
    Cursor c{line};
    c.ws();
    const std::size_t start = c.i;
    while (c.i < line.size() && (std::isalnum(static_cast<unsigned char>(line[c.i])) || line[c.i] == '_')) ++c.i;
    if (c.i == start || std::isdigit(static_cast<unsigned char>(line[start]))) return "expected property name";
    out.name = line.substr(start, c.i - start);
    if (!c.eat(":")) return "expected ':' after property name";
    if (!c.eat("cover")) return "expected 'cover'";
    if (!c.eat("property")) return "expected 'property'";
    if (!c.eat("(")) return "expected '('";
    if (!c.eat("@(")) return "expected clocking event";
    if (!c.eat("posedge")) return "expected 'posedge'";
    if (!c.eat("clk")) return "expected 'clk'";
    if (!c.eat(")")) return "expected ')' after clocking event";
    out.sequence.clear();
    bool first = true;
    while (true) {
        c.ws();
        if (c.i < line.size() && line[c.i] == ')') break;
        SvaElement el;
        if (!first || line.compare(c.i, 2, "##") == 0) {
            if (auto err = parse_delay(c, el.min_delay, el.max_delay); !err.empty()) return err;
        }
        if (auto err = parse_term(c, el.expr); !err.empty()) return err;
        out.sequence.push_back(std::move(el));
        first = false;
    }
    if (out.sequence.empty()) return "empty sequence";
    if (!c.eat(")")) return "expected ')'";
    if (!c.eat(";")) return "expected ';'";
    if (!c.at_end()) return "trailing text";
    return "";
}

template <typename F>
void for_each_property_line(const std::string& text, F&& f) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::size_t k = line.find_first_not_of(" \t\r");
        if (k == std::string::npos || line.compare(k, 2, "//") == 0) continue;
        f(n, line);
    }
}

} // namespace

std::vector<std::string> lint_sva(const std::string& text) {
    std::vector<std::string> problems;
    std::set<std::string> names;
    for_each_property_line(text, [&](int n, const std::string& line) {
        SvaProperty p;
        const std::string err = parse_line(line, p);
        if (!err.empty()) {
            problems.push_back("line " + std::to_string(n) + ": " + err);
        } else if (!names.insert(p.name).second) {
            problems.push_back("line " + std::to_string(n) + ": duplicate property '" + p.name + "'");
        }
    });
    return problems;
}

std::vector<SvaProperty> parse_sva(const std::string& text) {
    std::vector<SvaProperty> out;
    for_each_property_line(text, [&](int n, const std::string& line) {
        SvaProperty p;
        const std::string err = parse_line(line, p);
        if (!err.empty()) throw Error(ErrorKind::SyntaxError, err, SourceLoc{"<sva>", n, 1});
        out.push_back(std::move(p));
    });
    return out;
}

bool eval_property(const SvaProperty& p, const sim::InstanceTrace& trace) {
    const TraceView view(trace);
    const std::size_t n = view.cycles();
    std::vector<std::vector<std::uint8_t>> truth;
    for (const auto& el : p.sequence) truth.push_back(view.evaluate(el.expr));
    const std::size_t k = p.sequence.size();
    // visited[i * n + pos]: element i already tried at pos.
    std::vector<std::uint8_t> visited(k * n, 0);
    auto dfs = [&](auto&& self, std::size_t i, std::size_t pos) -> bool {
        if (!truth[i][pos]) return false;
        if (i + 1 == k) return true;
        if (visited[i * n + pos]) return false;
        visited[i * n + pos] = 1;
        const auto& next = p.sequence[i + 1];
        const std::size_t hi = next.max_delay < 0 ? n : pos + static_cast<std::size_t>(next.max_delay) + 1;
        for (std::size_t q = pos + static_cast<std::size_t>(next.min_delay); q < std::min(hi, n); ++q)
            if (self(self, i + 1, q)) return true;
        return false;
    };
    if (k == 0) return n > 0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto& first = p.sequence[0];
        const std::size_t hi = first.max_delay < 0 ? n : s + static_cast<std::size_t>(first.max_delay) + 1;
        for (std::size_t q = s + static_cast<std::size_t>(first.min_delay); q < std::min(hi, n); ++q)
            if (dfs(dfs, 0, q)) return true;
    }
    return false;
}

} // namespace tleak::coverage
