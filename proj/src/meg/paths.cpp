#include "tleak/meg/meg.hpp"

#include <set>

#include "tleak/common/hash.hpp"

namespace tleak::meg {

std::string path_id(const std::vector<std::string>& nodes) {
    std::string key;
    for (const auto& n : nodes) {
        key += n;
        key += '>';
    }
    return hex64(fnv1a(key));
}

std::string MicroEventPath::str() const {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += " -> ";
        out += nodes[i];
    }
    return out;
}

namespace {

struct Search {
    const Meg& g;
    std::size_t max_paths;
    std::size_t max_len;
    PathSet result;
    std::vector<std::string> stack;
    std::set<std::string> on_path;
    bool stop = false;

    void visit(const std::string& id) {
        const MegNode* n = g.node(id);
        if (stack.size() > 1 && n && n->kind == NodeKind::Output) {
            if (result.paths.size() == max_paths) {
                result.truncated = true;
                stop = true;
                return;
            }
            result.paths.push_back(MicroEventPath{stack, path_id(stack)});
        }
        if (stack.size() - 1 >= max_len) {
            for (std::size_t ei : g.out_edges(id)) {
                const auto& e = g.edges()[ei];
                if (e.to != id && !on_path.count(e.to)) result.truncated = true;
            }
            return;
        }
        for (std::size_t ei : g.out_edges(id)) {
            const auto& e = g.edges()[ei];
            if (e.to == id || on_path.count(e.to)) continue;
            stack.push_back(e.to);
            on_path.insert(e.to);
            visit(e.to);
            on_path.erase(e.to);
            stack.pop_back();
            if (stop) return;
        }
    }
};

} // namespace

PathSet enumerate_meps(const Meg& g, std::size_t max_paths, std::size_t max_len) {
    Search s{g, max_paths, max_len, {}, {}, {}, false};
    for (const auto& n : g.nodes()) {
        if (n.kind != NodeKind::Input || n.id == "clk") continue;
        s.stack = {n.id};
        s.on_path = {n.id};
        s.visit(n.id);
        if (s.stop) break;
    }
    return std::move(s.result);
}

} // namespace tleak::meg
