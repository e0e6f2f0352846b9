#include "oracles.hpp"

#include "tleak/hdl/parser.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

namespace tleak::oracle {

using namespace hdl;

namespace {

void names_in(const ExprPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == ExprKind::Ident || e->kind == ExprKind::Index || e->kind == ExprKind::Slice) out.insert(e->name);
    for (const auto& op : e->operands) names_in(op, out);
}

struct Walker {
    EdgeSet edges;

    void assign(const std::string& dest, const std::set<std::string>& reads) {
        for (const auto& r : reads)
            if (r != "clk") edges.insert({r, dest});
    }

    void walk(const StmtList& body, const std::set<std::string>& ctx) {
        for (const auto& s : body) {
            if (s.kind == StmtKind::Assign) {
                std::set<std::string> reads = ctx;
                names_in(s.expr, reads);
                names_in(s.dest.index, reads);
                assign(s.dest.name, reads);
            } else if (s.kind == StmtKind::If) {
                std::set<std::string> inner = ctx;
                names_in(s.cond, inner);
                walk(s.then_body, inner);
                walk(s.else_body, inner);
            } else {
                std::set<std::string> all_labels = ctx;
                names_in(s.subject, all_labels);
                for (const auto& arm : s.arms) {
                    std::set<std::string> inner = ctx;
                    names_in(s.subject, inner);
                    for (const auto& l : arm.labels) {
                        names_in(l, inner);
                        names_in(l, all_labels);
                    }
                    walk(arm.body, inner);
                }
                if (s.has_default) walk(s.default_body, all_labels);
            }
        }
    }
};

} // namespace

EdgeSet statement_edges(const ModuleAst& m, const std::map<std::string, std::set<std::string>>& child_outputs) {
    Walker w;
    for (const auto& item : m.items) {
        if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
            std::set<std::string> reads;
            names_in(a->expr, reads);
            names_in(a->dest.index, reads);
            w.assign(a->dest.name, reads);
        } else {
            w.walk(std::get<AlwaysBlock>(item).body, {});
        }
    }
    for (const auto& inst : m.instances) {
        std::set<std::string> outs;
        if (auto it = child_outputs.find(inst.module_name); it != child_outputs.end()) outs = it->second;
        for (const auto& pb : inst.port_map) {
            if (!pb.actual || pb.formal == "clk") continue;
            if (outs.count(pb.formal)) {
                w.edges.insert({inst.instance_name, pb.actual->name});
            } else {
                std::set<std::string> reads;
                names_in(pb.actual, reads);
                w.assign(inst.instance_name, reads);
            }
        }
    }
    return w.edges;
}

EdgeSet edge_set(const meg::Meg& g) {
    EdgeSet out;
    for (const auto& e : g.edges()) out.insert({e.from, e.to});
    return out;
}

std::set<std::vector<std::string>> brute_force_paths(const meg::Meg& dag) {
    // Topological order by repeated removal of sources.
    std::map<std::string, int> indeg;
    for (const auto& n : dag.nodes()) indeg[n.id] = 0;
    for (const auto& e : dag.edges()) ++indeg[e.to];
    std::vector<std::string> order;
    while (order.size() < indeg.size()) {
        for (auto& [id, d] : indeg) {
            if (d != 0) continue;
            d = -1;
            order.push_back(id);
            for (const auto& e : dag.edges())
                if (e.from == id) --indeg[e.to];
            break;
        }
    }
    const std::size_t n = order.size();
    std::set<std::vector<std::string>> out;
    for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
        std::vector<std::string> seq;
        for (std::size_t i = 0; i < n; ++i)
            if (subset & (1u << i)) seq.push_back(order[i]);
        if (seq.size() < 2) continue;
        if (dag.node(seq.front())->kind != meg::NodeKind::Input) continue;
        if (dag.node(seq.back())->kind != meg::NodeKind::Output) continue;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < seq.size() && ok; ++i) ok = dag.edge(seq[i], seq[i + 1]) != nullptr;
        if (ok) out.insert(seq);
    }
    return out;
}

meg::Meg random_dag(std::uint64_t seed, int max_nodes) {
    std::mt19937_64 rng(seed);
    const int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_nodes - 1));
    // Names are shuffled so that lexical order differs from the DAG order.
    std::vector<int> names(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names[static_cast<std::size_t>(i)] = i;
    std::shuffle(names.begin(), names.end(), rng);
    const meg::NodeKind kinds[] = {meg::NodeKind::Input, meg::NodeKind::Output, meg::NodeKind::Sequential,
                                   meg::NodeKind::Combinational, meg::NodeKind::Instance};
    std::vector<meg::MegNode> nodes;
    for (int i = 0; i < n; ++i) {
        meg::MegNode node;
        node.id = "n" + std::to_string(names[static_cast<std::size_t>(i)]);
        node.kind = kinds[rng() % 5];
        nodes.push_back(node);
    }
    const std::uint64_t density = 20 + rng() % 60;
    std::vector<meg::MegEdge> edges;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (rng() % 100 < density) {
                meg::MegEdge e;
                e.from = nodes[static_cast<std::size_t>(i)].id;
                e.to = nodes[static_cast<std::size_t>(k)].id;
                edges.push_back(e);
            }
    return meg::Meg("dag", nodes, edges);
}

std::vector<std::vector<std::string>> levels_by_depth(const DesignHierarchy& h) {
    std::map<int, std::vector<std::string>, std::greater<>> by_depth;
    for (const auto& inst : h.instances)
        by_depth[static_cast<int>(std::count(inst.path.begin(), inst.path.end(), '.'))].push_back(inst.path);
    std::vector<std::vector<std::string>> out;
    for (auto& [d, paths] : by_depth) {
        std::sort(paths.begin(), paths.end());
        out.push_back(paths);
    }
    return out;
}

namespace {

std::uint64_t value_of(const sim::InstanceTrace& t, const std::string& name, std::size_t cycle, bool* found) {
    for (const auto& s : t.signals)
        if (s.name == name) {
            if (found) *found = true;
            return cycle < s.values.size() ? s.values[cycle] : 0;
        }
    if (found) *found = false;
    return 0;
}

int width_of(const ExprPtr& e, const sim::InstanceTrace& t) {
    switch (e->kind) {
    case ExprKind::Number: return e->literal_width ? e->literal_width : (e->value >> 32 ? 64 : 32);
    case ExprKind::Ident:
        for (const auto& s : t.signals)
            if (s.name == e->name) return s.width;
        return 64;
    case ExprKind::Index:
        for (const auto& s : t.signals)
            if (s.name.rfind(e->name + "[", 0) == 0) return s.width;
        return 1;
    case ExprKind::Slice: return e->msb - e->lsb + 1;
    case ExprKind::Unary:
        return e->uop == UnaryOp::BitNot ? width_of(e->operands[0], t) : 1;
    case ExprKind::Ternary: return std::max(width_of(e->operands[1], t), width_of(e->operands[2], t));
    case ExprKind::Binary:
        switch (e->bop) {
        case BinaryOp::Add: case BinaryOp::Sub: case BinaryOp::And: case BinaryOp::Or: case BinaryOp::Xor:
            return std::max(width_of(e->operands[0], t), width_of(e->operands[1], t));
        case BinaryOp::Shl: case BinaryOp::Shr: return width_of(e->operands[0], t);
        default: return 1;
        }
    }
    return 64;
}

} // namespace

std::uint64_t eval_at(const ExprPtr& e, const sim::InstanceTrace& t, std::size_t c) {
    auto sub = [&](std::size_t i) { return eval_at(e->operands[i], t, c); };
    switch (e->kind) {
    case ExprKind::Number: return e->value;
    case ExprKind::Ident: return value_of(t, e->name, c, nullptr);
    case ExprKind::Index: {
        const std::uint64_t k = sub(0);
        bool scalar = false;
        const std::uint64_t v = value_of(t, e->name, c, &scalar);
        if (scalar) {
            int w = 64;
            for (const auto& s : t.signals)
                if (s.name == e->name) w = s.width;
            return k < static_cast<std::uint64_t>(w) ? (v >> k) & 1 : 0;
        }
        return value_of(t, e->name + "[" + std::to_string(k) + "]", c, nullptr);
    }
    case ExprKind::Slice: {
        const int w = e->msb - e->lsb + 1;
        const std::uint64_t m = w >= 64 ? ~0ULL : (1ULL << w) - 1;
        return (value_of(t, e->name, c, nullptr) >> e->lsb) & m;
    }
    case ExprKind::Unary: {
        if (e->uop == UnaryOp::LogNot) return sub(0) == 0 ? 1 : 0;
        const int w = width_of(e, t);
        const std::uint64_t m = w >= 64 ? ~0ULL : (1ULL << w) - 1;
        return ~sub(0) & m;
    }
    case ExprKind::Ternary: return sub(0) ? sub(1) : sub(2);
    case ExprKind::Binary: break;
    }
    if (e->bop == BinaryOp::LogAnd) return (sub(0) && sub(1)) ? 1 : 0;
    if (e->bop == BinaryOp::LogOr) return (sub(0) || sub(1)) ? 1 : 0;
    const std::uint64_t a = sub(0), b = sub(1);
    switch (e->bop) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::And: return a & b;
    case BinaryOp::Or: return a | b;
    case BinaryOp::Xor: return a ^ b;
    case BinaryOp::Shl: return b >= 64 ? 0 : a << b;
    case BinaryOp::Shr: return b >= 64 ? 0 : a >> b;
    case BinaryOp::Eq: return a == b;
    case BinaryOp::Ne: return a != b;
    case BinaryOp::Lt: return a < b;
    case BinaryOp::Le: return a <= b;
    case BinaryOp::Gt: return a > b;
    case BinaryOp::Ge: return a >= b;
    default: return 0;
    }
}

bool exhaustive_alignment(const coverage::PathCondition& pc, const sim::InstanceTrace& t) {
    std::size_t n = 0;
    for (const auto& s : t.signals) n = std::max(n, s.values.size());
    std::vector<ExprPtr> exprs;
    for (const auto& s : pc.steps) exprs.push_back(s.kind == coverage::StepKind::Branch ? parse_expression(s.expr) : nullptr);
    // failed[(step, pos)] marks states already shown to have no completion.
    std::set<std::pair<std::size_t, std::size_t>> failed;
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t pos) -> bool {
        if (i == pc.steps.size()) return true;
        if (failed.count({i, pos})) return false;
        bool ok = false;
        switch (pc.steps[i].kind) {
        case coverage::StepKind::Branch: ok = eval_at(exprs[i], t, pos) != 0 && go(i + 1, pos); break;
        case coverage::StepKind::OneCycle: ok = pos + 1 < n && go(i + 1, pos + 1); break;
        case coverage::StepKind::Eventually:
            for (std::size_t p = pos; p < n && !ok; ++p) ok = go(i + 1, p);
            break;
        }
        if (!ok) failed.insert({i, pos});
        return ok;
    };
    for (std::size_t start = 0; start < n; ++start)
        if (go(0, start)) return true;
    return false;
}

std::size_t naive_cycles(const sim::TraceBundle& b, const std::string& instance) {
    for (const auto& it : b.instances) {
        if (it.path != instance) continue;
        std::size_t last = 0;
        bool any = false;
        for (const auto& s : it.signals)
            for (std::size_t c = std::max<std::size_t>(b.start_cycle, 1); c < s.values.size(); ++c)
                if (s.values[c] != s.values[c - 1] && (!any || c > last)) {
                    last = c;
                    any = true;
                }
        return any ? last - b.start_cycle + 1 : 0;
    }
    return 0;
}

} // namespace tleak::oracle
