#include "tleak/sim/simulator.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "tleak/common/error.hpp"
#include "tleak/common/rng.hpp"
#include "tleak/sim/eval.hpp"

namespace tleak::sim {

using namespace hdl;

namespace {

struct Target {
    SlotRef slot;
    CompiledExpr index; // empty unless bit/element select
    std::optional<std::pair<int, int>> slice;
};

struct CStmt {
    StmtKind kind = StmtKind::Assign;
    Target dest;
    CompiledExpr expr;
    bool nonblocking = false;
    int assign_id = -1;
    CompiledExpr cond;
    std::vector<CStmt> then_body;
    std::vector<CStmt> else_body;
    std::vector<std::pair<std::vector<CompiledExpr>, std::vector<CStmt>>> arms;
    CompiledExpr subject;
    std::vector<CStmt> default_body;
    bool has_default = false;
    int branch_id = -1;
};

struct Process {
    int module = 0; // index into module_names
    bool clocked = false;
    std::vector<CStmt> body;
};

struct Write {
    const Target* target;
    std::uint64_t index;
    std::uint64_t value;
};

void store(std::vector<std::uint64_t>& s, const Target& t, std::uint64_t index, std::uint64_t v) {
    const SlotRef& r = t.slot;
    if (r.array) {
        if (index < static_cast<std::uint64_t>(r.count)) s[r.base + static_cast<int>(index)] = v & mask(r.width);
        return;
    }
    std::uint64_t& cell = s[r.base];
    if (!t.index.empty()) {
        if (index < static_cast<std::uint64_t>(r.width)) cell = (cell & ~(1ULL << index)) | ((v & 1) << index);
    } else if (t.slice) {
        const auto [msb, lsb] = *t.slice;
        const std::uint64_t m = mask(msb - lsb + 1) << lsb;
        cell = (cell & ~m) | ((v << lsb) & m);
    } else {
        cell = v & mask(r.width);
    }
}

// Would storing v through t change the value held in s?
bool changes(const std::vector<std::uint64_t>& s, const Target& t, std::uint64_t index, std::uint64_t v) {
    const SlotRef& r = t.slot;
    if (r.array)
        return index < static_cast<std::uint64_t>(r.count) && s[r.base + static_cast<int>(index)] != (v & mask(r.width));
    const std::uint64_t cell = s[r.base];
    if (!t.index.empty()) return index < static_cast<std::uint64_t>(r.width) && ((cell >> index) & 1) != (v & 1);
    if (t.slice) {
        const auto [msb, lsb] = *t.slice;
        return ((cell >> lsb) & mask(msb - lsb + 1)) != (v & mask(msb - lsb + 1));
    }
    return cell != (v & mask(r.width));
}

} // namespace

struct Simulator::Impl {
    std::vector<std::string> module_names;
    std::vector<Process> comb;
    std::vector<Process> clocked;
    std::size_t slot_count = 0;
    std::vector<std::uint8_t> storage;
    std::vector<int> widths;

    struct Column {
        std::string name;
        int slot;
        int width;
    };
    struct InstanceCols {
        std::string path;
        std::string module;
        std::vector<Column> cols;
    };
    std::vector<InstanceCols> instances;

    int rst_slot = -1;
    std::vector<int> top_inputs;
    std::map<std::string, int> top_slots;
    std::map<std::string, std::vector<std::pair<int, std::uint64_t>>> tag_drives;

    std::vector<std::map<std::string, SlotRef>> scopes;

    // Mutable run state, local to a run() call.
    struct Run {
        std::vector<std::uint64_t> state;
        std::vector<std::uint64_t> prev;
        ActivityLog* activity = nullptr;
        bool record = false;
        std::vector<Write> writes;
    };

    Resolver resolver(int scope) const {
        return [this, scope](const std::string& name) -> std::optional<SlotRef> {
            auto it = scopes[scope].find(name);
            if (it == scopes[scope].end()) return std::nullopt;
            return it->second;
        };
    }

    Target make_target(const LValue& lv, int scope) const {
        Target t;
        auto it = scopes[scope].find(lv.name);
        if (it == scopes[scope].end())
            throw Error(ErrorKind::UnresolvedIdentifier, "unknown assignment target '" + lv.name + "'", lv.loc);
        t.slot = it->second;
        if (lv.index) t.index = compile_expr(lv.index, resolver(scope));
        t.slice = lv.slice;
        return t;
    }

    std::vector<CStmt> compile_body(const StmtList& body, int scope) const {
        std::vector<CStmt> out;
        for (const auto& s : body) {
            CStmt c;
            c.kind = s.kind;
            switch (s.kind) {
            case StmtKind::Assign:
                c.dest = make_target(s.dest, scope);
                c.expr = compile_expr(s.expr, resolver(scope));
                c.nonblocking = s.style == AssignStyle::NonBlocking;
                c.assign_id = s.assign_id;
                break;
            case StmtKind::If:
                c.cond = compile_expr(s.cond, resolver(scope));
                c.then_body = compile_body(s.then_body, scope);
                c.else_body = compile_body(s.else_body, scope);
                c.branch_id = s.branch_id;
                break;
            case StmtKind::Case:
                c.subject = compile_expr(s.subject, resolver(scope));
                for (const auto& arm : s.arms) {
                    std::vector<CompiledExpr> labels;
                    for (const auto& l : arm.labels) labels.push_back(compile_expr(l, resolver(scope)));
                    c.arms.emplace_back(std::move(labels), compile_body(arm.body, scope));
                }
                c.default_body = compile_body(s.default_body, scope);
                c.has_default = s.has_default;
                c.branch_id = s.branch_id;
                break;
            }
            out.push_back(std::move(c));
        }
        return out;
    }

    explicit Impl(const DesignHierarchy& h) {
        std::map<std::string, int> scope_of;
        for (const auto& inst : h.instances) {
            const ModuleAst& m = h.module(inst.module);
            const int scope = static_cast<int>(scopes.size());
            scope_of[inst.path] = scope;
            scopes.emplace_back();
            InstanceCols ic{inst.path, inst.module, {}};
            for (const SignalDecl* d : m.all_signals()) {
                if (d->name == "clk") continue;
                SlotRef r;
                r.base = static_cast<int>(slot_count);
                r.count = d->array_size > 0 ? d->array_size : 1;
                r.width = d->width;
                r.array = d->array_size > 0;
                slot_count += static_cast<std::size_t>(r.count);
                for (int k = 0; k < r.count; ++k) {
                    storage.push_back(d->storage());
                    widths.push_back(d->width);
                    ic.cols.push_back(
                        {r.array ? d->name + "[" + std::to_string(k) + "]" : d->name, r.base + k, d->width});
                }
                scopes[scope][d->name] = r;
            }
            std::sort(ic.cols.begin(), ic.cols.end(), [](const Column& a, const Column& b) { return a.name < b.name; });
            instances.push_back(std::move(ic));
        }

        for (const auto& inst : h.instances) {
            const ModuleAst& m = h.module(inst.module);
            const int scope = scope_of[inst.path];
            auto mod_it = std::find(module_names.begin(), module_names.end(), m.name);
            const int mod_idx = static_cast<int>(mod_it - module_names.begin());
            if (mod_it == module_names.end()) module_names.push_back(m.name);

            Process cont{mod_idx, false, {}};
            for (const auto& item : m.items) {
                if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
                    CStmt c;
                    c.dest = make_target(a->dest, scope);
                    c.expr = compile_expr(a->expr, resolver(scope));
                    c.assign_id = a->assign_id;
                    cont.body.push_back(std::move(c));
                } else {
                    const auto& b = std::get<AlwaysBlock>(item);
                    Process p{mod_idx, b.trigger == AlwaysTrigger::PosedgeClock, compile_body(b.body, scope)};
                    (p.clocked ? clocked : comb).push_back(std::move(p));
                }
            }
            for (const auto& child_name : inst.children) {
                const InstanceInfo& child = h.instance(child_name);
                const ModuleAst& cm = h.module(child.module);
                const InstanceDecl* decl = m.find_instance(child.instance_name);
                const int cscope = scope_of[child.path];
                for (const auto& pb : decl->port_map) {
                    if (!pb.actual || pb.formal == "clk") continue;
                    const SignalDecl* formal = cm.find_signal(pb.formal);
                    CStmt c;
                    c.assign_id = pb.assign_id;
                    if (formal->kind == SignalKind::Output) {
                        LValue lv;
                        lv.name = pb.actual->name;
                        lv.loc = pb.loc;
                        c.dest = make_target(lv, scope);
                        auto ident = std::make_shared<Expr>();
                        ident->kind = ExprKind::Ident;
                        ident->name = pb.formal;
                        c.expr = compile_expr(ident, resolver(cscope));
                    } else {
                        LValue lv;
                        lv.name = pb.formal;
                        lv.loc = pb.loc;
                        c.dest = make_target(lv, cscope);
                        c.expr = compile_expr(pb.actual, resolver(scope));
                    }
                    cont.body.push_back(std::move(c));
                }
            }
            if (!cont.body.empty()) comb.insert(comb.begin(), std::move(cont));
        }

        const ModuleAst& top = h.top_module();
        for (const auto& p : top.ports) {
            if (p.kind != SignalKind::Input || p.name == "clk") continue;
            const int slot = scopes[0].at(p.name).base;
            top_inputs.push_back(slot);
            top_slots[p.name] = slot;
            if (p.name == "rst") rst_slot = slot;
        }
        for (const auto& t : top.tags) {
            auto& drives = tag_drives[t.name];
            for (const auto& [input, value] : t.drives) drives.emplace_back(top_slots.at(input), value);
        }
    }

    void exec(Run& r, const std::vector<CStmt>& body, int module, std::vector<std::uint64_t>& view) const {
        for (const auto& s : body) {
            switch (s.kind) {
            case StmtKind::Assign: {
                const std::uint64_t idx = s.dest.index.empty() ? 0 : s.dest.index.eval(view.data());
                const std::uint64_t v = s.expr.eval(view.data());
                if (r.record && changes(r.prev, s.dest, idx, v))
                    r.activity->assignments[module_names[module]].insert(s.assign_id);
                if (s.nonblocking) {
                    r.writes.push_back({&s.dest, idx, v});
                } else {
                    store(view, s.dest, idx, v);
                    if (&view != &r.state) r.writes.push_back({&s.dest, idx, v});
                }
                break;
            }
            case StmtKind::If: {
                const bool taken = s.cond.eval(view.data()) != 0;
                if (r.record) r.activity->branches[module_names[module]].insert({s.branch_id, taken ? 0 : 1});
                exec(r, taken ? s.then_body : s.else_body, module, view);
                break;
            }
            case StmtKind::Case: {
                const std::uint64_t subj = s.subject.eval(view.data());
                int arm = -1;
                for (std::size_t i = 0; i < s.arms.size() && arm < 0; ++i)
                    for (const auto& l : s.arms[i].first)
                        if (l.eval(view.data()) == subj) {
                            arm = static_cast<int>(i);
                            break;
                        }
                if (arm >= 0) {
                    if (r.record) r.activity->branches[module_names[module]].insert({s.branch_id, arm});
                    exec(r, s.arms[static_cast<std::size_t>(arm)].second, module, view);
                } else if (s.has_default) {
                    if (r.record)
                        r.activity->branches[module_names[module]].insert(
                            {s.branch_id, static_cast<int>(s.arms.size())});
                    exec(r, s.default_body, module, view);
                }
                break;
            }
            }
        }
    }

    void settle(Run& r) const {
        std::vector<std::uint64_t> before;
        for (int iter = 0;; ++iter) {
            if (iter >= kMaxSettleIterations)
                throw Error(ErrorKind::CombinationalLoop,
                            "combinational logic did not settle within " + std::to_string(kMaxSettleIterations) +
                                " iterations");
            before = r.state;
            for (const auto& p : comb) exec(r, p.body, p.module, r.state);
            if (before == r.state) break;
        }
        // One more pass on the settled state to log activity.
        r.record = true;
        for (const auto& p : comb) exec(r, p.body, p.module, r.state);
        r.record = false;
    }

    void edge(Run& r) const {
        r.writes.clear();
        std::vector<Write> commits;
        std::vector<std::uint64_t> work;
        for (const auto& p : clocked) {
            work = r.state;
            r.record = true;
            exec(r, p.body, p.module, work);
            r.record = false;
            commits.insert(commits.end(), r.writes.begin(), r.writes.end());
            r.writes.clear();
        }
        for (const auto& w : commits) store(r.state, *w.target, w.index, w.value);
    }
};

Simulator::Simulator(const DesignHierarchy& h) : design_(h), impl_(std::make_unique<Impl>(h)) {}
Simulator::~Simulator() = default;

SimulationResult Simulator::run(const Stimulus& stimulus, const SimOptions& options) const {
    const Impl& im = *impl_;
    validate_stimulus(stimulus, design_.top_module());

    SimulationResult result;
    Impl::Run r;
    r.activity = &result.activity;
    r.state.assign(im.slot_count, 0);
    if (options.init.kind == InitPolicy::Kind::Random) {
        Rng rng(options.init.seed);
        for (std::size_t i = 0; i < im.slot_count; ++i)
            if (im.storage[i]) r.state[i] = rng.bits(im.widths[i]);
    }
    r.prev = r.state;

    TraceBundle& tb = result.trace;
    tb.run_id = options.run_id;
    tb.stimulus = stimulus;
    tb.start_cycle = static_cast<std::size_t>(std::max(0, options.reset_cycles));
    for (const auto& ic : im.instances) {
        InstanceTrace it{ic.path, ic.module, {}};
        for (const auto& c : ic.cols) it.signals.push_back({c.name, c.width, {}});
        tb.instances.push_back(std::move(it));
    }

    std::vector<std::uint64_t> last_sample;
    auto cycle = [&](const std::vector<std::pair<int, std::uint64_t>>& inputs) {
        for (int s : im.top_inputs) r.state[s] = 0;
        for (const auto& [s, v] : inputs) r.state[s] = v & mask(im.widths[s]);
        im.settle(r);
        for (std::size_t i = 0; i < im.instances.size(); ++i) {
            const auto& cols = im.instances[i].cols;
            auto& sigs = tb.instances[i].signals;
            for (std::size_t k = 0; k < cols.size(); ++k)
                sigs[k].values.push_back(r.state[static_cast<std::size_t>(cols[k].slot)]);
        }
        const bool changed = tb.cycles == 0 || r.state != last_sample;
        last_sample = r.state;
        ++tb.cycles;
        r.prev = last_sample;
        im.edge(r);
        return changed;
    };

    for (int i = 0; i < options.reset_cycles; ++i) {
        std::vector<std::pair<int, std::uint64_t>> in;
        if (im.rst_slot >= 0) in.emplace_back(im.rst_slot, 1);
        cycle(in);
    }

    auto budget_left = [&] {
        if (tb.cycles < options.max_cycles) return true;
        tb.hit_max_cycles = true;
        return false;
    };

    for (std::size_t si = 0; si < stimulus.steps.size() && budget_left(); ++si) {
        const StimulusStep& step = stimulus.steps[si];
        std::vector<std::pair<int, std::uint64_t>> held;
        for (const auto& [k, v] : step.data) held.emplace_back(im.top_slots.at(k), v);
        int idle = 0;
        for (int n = 0; budget_left(); ++n) {
            auto in = held;
            if (n == 0) {
                const auto& drives = im.tag_drives.at(step.tag);
                in.insert(in.end(), drives.begin(), drives.end());
            }
            idle = cycle(in) ? 0 : idle + 1;
            if (n + 1 >= step.hold && idle >= options.quiescence) break;
        }
    }
    return result;
}

SimulationResult simulate(const DesignHierarchy& h, const Stimulus& stimulus, const SimOptions& options) {
    return Simulator(h).run(stimulus, options);
}

} // namespace tleak::sim
