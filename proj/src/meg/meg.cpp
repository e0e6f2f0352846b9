#include "tleak/meg/meg.hpp"

#include <algorithm>

#include "tleak/common/error.hpp"
#include "tleak/hdl/printer.hpp"

namespace tleak::meg {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::Input: return "input";
    case NodeKind::Output: return "output";
    case NodeKind::Sequential: return "sequential";
    case NodeKind::Combinational: return "combinational";
    case NodeKind::Instance: return "instance";
    }
    return "?";
}

std::string EdgeCondition::render() const {
    if (clauses.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        if (i) out += " || ";
        std::string conj;
        for (std::size_t k = 0; k < clauses[i].size(); ++k) {
            if (k) conj += " && ";
            conj += clauses[i][k].text;
        }
        out += clauses.size() > 1 || clauses[i].size() > 1 ? "(" + conj + ")" : conj;
    }
    return out;
}

Meg::Meg(std::string module, std::vector<MegNode> nodes, std::vector<MegEdge> edges)
    : module_(std::move(module)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end(), [](const MegNode& a, const MegNode& b) { return a.id < b.id; });
    std::sort(edges_.begin(), edges_.end(), [](const MegEdge& a, const MegEdge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    for (std::size_t i = 0; i < nodes_.size(); ++i) node_index_[nodes_[i].id] = i;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        edge_index_[{edges_[i].from, edges_[i].to}] = i;
        out_[edges_[i].from].push_back(i);
    }
}

const MegNode* Meg::node(const std::string& id) const {
    auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const MegEdge* Meg::edge(const std::string& from, const std::string& to) const {
    auto it = edge_index_.find({from, to});
    return it == edge_index_.end() ? nullptr : &edges_[it->second];
}

const std::vector<std::size_t>& Meg::out_edges(const std::string& id) const {
    static const std::vector<std::size_t> kNone;
    auto it = out_.find(id);
    return it == out_.end() ? kNone : it->second;
}

std::size_t Meg::count(NodeKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [&](const MegNode& n) { return n.kind == kind; }));
}

namespace {

using namespace hdl;

struct RawEdge {
    std::string from;
    std::string to;
    Conjunction conj;
    SourceLoc loc;
    int origin;
};

struct CondFrame {
    Conjunct conjunct;
    std::vector<std::string> signals;
};

ExprPtr make_eq(const ExprPtr& subject, const ExprPtr& label) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binary;
    e->bop = BinaryOp::Eq;
    e->loc = label->loc;
    e->operands = {subject, label};
    return e;
}

ExprPtr arm_condition(const ExprPtr& subject, const CaseArm& arm) {
    ExprPtr cond = make_eq(subject, arm.labels.front());
    for (std::size_t i = 1; i < arm.labels.size(); ++i) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Binary;
        e->bop = BinaryOp::LogOr;
        e->loc = cond->loc;
        e->operands = {cond, make_eq(subject, arm.labels[i])};
        cond = e;
    }
    return cond;
}

std::vector<std::string> identifiers_of(std::initializer_list<ExprPtr> exprs) {
    std::vector<std::string> out;
    for (const auto& e : exprs) collect_identifiers(e, out);
    return out;
}

class Builder {
public:
    explicit Builder(const ModuleAst& m) : m_(m) {}

    Meg run() {
        for (const auto& item : m_.items) {
            if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
                add_assignment(a->dest, a->expr, a->loc, a->assign_id);
            } else {
                const auto& b = std::get<AlwaysBlock>(item);
                clocked_ = b.trigger == AlwaysTrigger::PosedgeClock;
                walk(b.body);
                clocked_ = false;
            }
        }
        for (const auto& inst : m_.instances) {
            for (const auto& pb : inst.port_map) {
                if (!pb.actual || pb.formal == "clk") continue;
                if (is_child_output(inst, pb)) {
                    raw_.push_back(RawEdge{inst.instance_name, pb.actual->name, {}, pb.loc, pb.assign_id});
                } else {
                    std::vector<std::string> ids;
                    collect_identifiers(pb.actual, ids);
                    for (const auto& id : unique(ids))
                        raw_.push_back(RawEdge{id, inst.instance_name, {}, pb.loc, pb.assign_id});
                }
            }
        }
        return Meg(m_.name, make_nodes(), collapse());
    }

    // Output ports per module name. When absent, an actual that is a bare
    // wire never driven inside this module is taken as a child output.
    const std::map<std::string, std::set<std::string>>* child_outputs = nullptr;

private:
    bool is_child_output(const InstanceDecl& inst, const PortBinding& pb) const {
        if (child_outputs) {
            auto it = child_outputs->find(inst.module_name);
            return it != child_outputs->end() && it->second.count(pb.formal) > 0;
        }
        if (pb.actual->kind != ExprKind::Ident) return false;
        const SignalDecl* d = m_.find_signal(pb.actual->name);
        return d && !d->storage() && d->kind != SignalKind::Input && !comb_targets_.count(d->name);
    }

    static std::vector<std::string> unique(std::vector<std::string> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        ids.erase(std::remove(ids.begin(), ids.end(), "clk"), ids.end());
        return ids;
    }

    void add_assignment(const LValue& dest, const ExprPtr& expr, const SourceLoc& loc, int origin) {
        std::vector<std::string> ids = identifiers_of({expr, dest.index});
        Conjunction conj;
        for (const auto& f : stack_) {
            conj.push_back(f.conjunct);
            ids.insert(ids.end(), f.signals.begin(), f.signals.end());
        }
        if (clocked_) clocked_targets_.insert(dest.name);
        else comb_targets_.insert(dest.name);
        for (const auto& id : unique(std::move(ids))) raw_.push_back(RawEdge{id, dest.name, conj, loc, origin});
    }

    void walk(const StmtList& body) {
        for (const auto& s : body) {
            switch (s.kind) {
            case StmtKind::Assign: add_assignment(s.dest, s.expr, s.loc, s.assign_id); break;
            case StmtKind::If: {
                const std::string text = render_expr(s.cond);
                const auto sigs = identifiers_of({s.cond});
                stack_.push_back(CondFrame{Conjunct{text, s.loc}, sigs});
                walk(s.then_body);
                stack_.back().conjunct.text = "!" + text;
                walk(s.else_body);
                stack_.pop_back();
                break;
            }
            case StmtKind::Case: {
                std::vector<std::string> arm_texts;
                for (const auto& arm : s.arms) {
                    const ExprPtr cond = arm_condition(s.subject, arm);
                    const std::string text = render_expr(cond);
                    arm_texts.push_back(text);
                    stack_.push_back(CondFrame{Conjunct{text, arm.loc}, identifiers_of({cond})});
                    walk(arm.body);
                    stack_.pop_back();
                }
                if (s.has_default) {
                    std::vector<std::string> sigs = identifiers_of({s.subject});
                    for (const auto& arm : s.arms)
                        for (const auto& l : arm.labels) collect_identifiers(l, sigs);
                    for (const auto& t : arm_texts) stack_.push_back(CondFrame{Conjunct{"!" + t, s.loc}, sigs});
                    walk(s.default_body);
                    for (std::size_t i = 0; i < arm_texts.size(); ++i) stack_.pop_back();
                }
                break;
            }
            }
        }
    }

    std::vector<MegNode> make_nodes() const {
        std::vector<MegNode> nodes;
        for (const SignalDecl* d : m_.all_signals()) {
            MegNode n;
            n.id = d->name;
            n.decl_loc = d->loc;
            n.width = d->width;
            n.registered = clocked_targets_.count(d->name) > 0 ||
                           (d->storage() && !comb_targets_.count(d->name) && d->kind != SignalKind::Output);
            switch (d->kind) {
            case SignalKind::Input: n.kind = NodeKind::Input; break;
            case SignalKind::Output: n.kind = NodeKind::Output; break;
            case SignalKind::Wire: n.kind = NodeKind::Combinational; break;
            case SignalKind::Reg: n.kind = n.registered ? NodeKind::Sequential : NodeKind::Combinational; break;
            }
            nodes.push_back(std::move(n));
        }
        for (const auto& inst : m_.instances) {
            MegNode n;
            n.id = inst.instance_name;
            n.kind = NodeKind::Instance;
            n.decl_loc = inst.loc;
            nodes.push_back(std::move(n));
        }
        return nodes;
    }

    static std::string key(const Conjunction& c) {
        std::string k;
        for (const auto& x : c) k += x.text + "\x1f";
        return k;
    }

    std::vector<MegEdge> collapse() const {
        std::map<std::pair<std::string, std::string>, MegEdge> merged;
        std::map<std::pair<std::string, std::string>, bool> always;
        std::map<std::pair<std::string, std::string>, std::set<std::string>> seen;
        for (const auto& r : raw_) {
            const auto k = std::make_pair(r.from, r.to);
            auto& e = merged[k];
            e.from = r.from;
            e.to = r.to;
            e.lines.insert(r.loc.line);
            e.locs.insert(r.loc);
            e.origins.insert(r.origin);
            if (r.conj.empty()) always[k] = true;
            if (seen[k].insert(key(r.conj)).second && !r.conj.empty()) e.condition.clauses.push_back(r.conj);
        }
        std::vector<MegEdge> out;
        for (auto& [k, e] : merged) {
            if (always[k]) e.condition.clauses.clear();
            out.push_back(std::move(e));
        }
        return out;
    }

    const ModuleAst& m_;
    std::vector<CondFrame> stack_;
    std::vector<RawEdge> raw_;
    bool clocked_ = false;
    std::set<std::string> clocked_targets_;
    std::set<std::string> comb_targets_;
};

} // namespace

Meg build_meg(const hdl::ModuleAst& m) {
    Builder b(m);
    return b.run();
}

std::map<std::string, Meg> build_megs(const hdl::DesignHierarchy& h) {
    std::map<std::string, std::set<std::string>> outputs;
    for (const auto& [name, mod] : h.modules)
        for (const auto& p : mod.ports)
            if (p.kind == hdl::SignalKind::Output) outputs[name].insert(p.name);
    std::map<std::string, Meg> out;
    for (const auto& [name, mod] : h.modules) {
        Builder b(mod);
        b.child_outputs = &outputs;
        out.emplace(name, b.run());
    }
    return out;
}

} // namespace tleak::meg
