#include "tleak/meg/meg.hpp"

#include <sstream>

namespace tleak::meg {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string_view shape(NodeKind k) {
    switch (k) {
    case NodeKind::Input: return "shape=invhouse";
    case NodeKind::Output: return "shape=doublecircle";
    case NodeKind::Sequential: return "shape=box";
    case NodeKind::Combinational: return "shape=ellipse";
    case NodeKind::Instance: return "shape=component, style=dashed";
    }
    return "shape=ellipse";
}

std::string lines_text(const std::set<int>& lines) {
    std::string out;
    for (int l : lines) {
        if (!out.empty()) out += ',';
        out += std::to_string(l);
    }
    return out;
}

} // namespace

std::string export_dot(const Meg& g) {
    std::ostringstream os;
    os << "digraph " << quote(g.module()) << " {\n";
    os << "  rankdir=LR;\n";
    for (const auto& n : g.nodes())
        os << "  " << quote(n.id) << " [" << shape(n.kind) << ", label=" << quote(n.id) << "];\n";
    for (const auto& e : g.edges()) {
        os << "  " << quote(e.from) << " -> " << quote(e.to) << " [label="
           << quote("c=" + std::to_string(e.condition.clauses.size()) + " L" + lines_text(e.lines)) << "];\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json meg_to_json(const Meg& g) {
    using nlohmann::json;
    json nodes = json::array();
    for (const auto& n : g.nodes()) {
        nodes.push_back({{"id", n.id},
                         {"kind", std::string(to_string(n.kind))},
                         {"registered", n.registered},
                         {"width", n.width},
                         {"loc", {{"file", n.decl_loc.file}, {"line", n.decl_loc.line}}}});
    }
    json edges = json::array();
    for (const auto& e : g.edges()) {
        json clauses = json::array();
        for (const auto& c : e.condition.clauses) {
            json conj = json::array();
            for (const auto& x : c) conj.push_back(x.text);
            clauses.push_back(conj);
        }
        edges.push_back({{"from", e.from},
                         {"to", e.to},
                         {"condition", e.condition.render()},
                         {"clauses", clauses},
                         {"lines", e.lines}});
    }
    return {{"schemaVersion", 1}, {"module", g.module()}, {"nodes", nodes}, {"edges", edges}};
}

} // namespace tleak::meg
