#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tleak/common/source_loc.hpp"
#include "tleak/hdl/ast.hpp"

namespace tleak::meg {

enum class NodeKind { Input, Output, Sequential, Combinational, Instance };

std::string_view to_string(NodeKind kind);

struct MegNode {
    std::string id;
    NodeKind kind = NodeKind::Combinational;
    SourceLoc decl_loc;
    // Driven from a clocked block. Set for Sequential nodes and for
    // `output reg` ports, which keep Output kind.
    bool registered = false;
    int width = 1;

    bool sequential() const { return registered; }
};

struct Conjunct {
    std::string text;
    SourceLoc loc;

    friend bool operator==(const Conjunct& a, const Conjunct& b) { return a.text == b.text; }
};

using Conjunction = std::vector<Conjunct>;

// Disjunction of conjunctions; no clauses means unconditional.
struct EdgeCondition {
    std::vector<Conjunction> clauses;

    bool unconditional() const { return clauses.empty(); }
    // Parseable boolean expression text, "1" when unconditional.
    std::string render() const;
};

struct MegEdge {
    std::string from;
    std::string to;
    EdgeCondition condition;
    std::set<int> lines;
    std::set<SourceLoc> locs;
    // Assignment / port-binding ids that induce this dependency.
    std::set<int> origins;
};

class Meg {
public:
    Meg() = default;
    Meg(std::string module, std::vector<MegNode> nodes, std::vector<MegEdge> edges);

    const std::string& module() const { return module_; }
    const std::vector<MegNode>& nodes() const { return nodes_; }
    const std::vector<MegEdge>& edges() const { return edges_; }

    const MegNode* node(const std::string& id) const;
    const MegEdge* edge(const std::string& from, const std::string& to) const;
    // Outgoing edges ordered by target id.
    const std::vector<std::size_t>& out_edges(const std::string& id) const;
    std::size_t count(NodeKind kind) const;

private:
    std::string module_;
    std::vector<MegNode> nodes_;
    std::vector<MegEdge> edges_;
    std::map<std::string, std::size_t> node_index_;
    std::map<std::pair<std::string, std::string>, std::size_t> edge_index_;
    std::map<std::string, std::vector<std::size_t>> out_;
};

Meg build_meg(const hdl::ModuleAst& m);
std::map<std::string, Meg> build_megs(const hdl::DesignHierarchy& h);

struct MicroEventPath {
    std::vector<std::string> nodes;
    std::string id;

    std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    std::string str() const;
};

struct PathSet {
    std::vector<MicroEventPath> paths;
    bool truncated = false;
};

inline constexpr std::size_t kDefaultMaxPaths = 10000;
inline constexpr std::size_t kDefaultMaxLen = 64;

// Simple input-to-output paths, DFS with target-sorted adjacency; self-edges
// are skipped.
PathSet enumerate_meps(const Meg& g, std::size_t max_paths = kDefaultMaxPaths,
                       std::size_t max_len = kDefaultMaxLen);

std::string path_id(const std::vector<std::string>& nodes);

std::string export_dot(const Meg& g);
nlohmann::json meg_to_json(const Meg& g);

} // namespace tleak::meg
