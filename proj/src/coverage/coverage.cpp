#include "tleak/coverage/coverage.hpp"

#include <algorithm>
#include <sstream>

#include "tleak/common/error.hpp"
#include "tleak/hdl/parser.hpp"
#include "tleak/sim/eval.hpp"

namespace tleak::coverage {

std::string_view to_string(StepKind kind) {
    switch (kind) {
    case StepKind::Branch: return "branch";
    case StepKind::OneCycle: return "one_cycle";
    case StepKind::Eventually: return "eventually";
    }
    return "?";
}

PathCondition path_condition(const meg::MicroEventPath& p, const meg::Meg& g) {
    PathCondition pc;
    pc.path_id = p.id;
    pc.nodes = p.nodes;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
        const meg::MegEdge* e = g.edge(p.nodes[i], p.nodes[i + 1]);
        if (!e)
            throw Error(ErrorKind::PathNotInGraph, "edge " + p.nodes[i] + " -> " + p.nodes[i + 1] +
                                                       " is not in the MEG of '" + g.module() + "'");
        const meg::MegNode* from = g.node(e->from);
        const meg::MegNode* to = g.node(e->to);
        if (!e->condition.unconditional())
            pc.steps.push_back({StepKind::Branch, e->condition.render(), *e->lines.begin()});
        if (to->registered) pc.steps.push_back({StepKind::OneCycle, "", 0});
        if (from->kind == meg::NodeKind::Input || from->kind == meg::NodeKind::Instance)
            pc.steps.push_back({StepKind::Eventually, "", 0});
    }
    return pc;
}

std::string property_name(const std::string& module, const std::string& path_id) {
    return "cov_" + module + "_" + path_id;
}

std::string emit_sva(const PathCondition& pc, const std::string& module, std::string* warning) {
    std::string seq;
    bool last_was_delay = false;
    bool any_term = false;
    for (const auto& s : pc.steps) {
        if (s.kind == StepKind::Branch) {
            if (any_term && !last_was_delay) seq += " ##0 ";
            seq += "(" + s.expr + ")";
            last_was_delay = false;
            any_term = true;
            continue;
        }
        if (last_was_delay) seq += " 1'b1";
        if (!seq.empty()) seq += " ";
        seq += s.kind == StepKind::OneCycle ? "##1" : "##[0:$]";
        last_was_delay = true;
    }
    if (seq.empty()) {
        seq = "1'b1";
        if (warning) *warning = "path " + pc.path_id + " has no conditions; property is trivially coverable";
    } else if (last_was_delay) {
        seq += " 1'b1";
    }
    std::string out = "// " + module + ": ";
    for (std::size_t i = 0; i < pc.nodes.size(); ++i) out += (i ? " -> " : "") + pc.nodes[i];
    out += "\n" + property_name(module, pc.path_id) + ": cover property (@(posedge clk) " + seq + ");\n";
    return out;
}

TraceView::TraceView(const sim::InstanceTrace& t) {
    // Arrays get contiguous slots, element order by index.
    std::map<std::string, std::vector<std::pair<int, const sim::SignalTrace*>>> groups;
    for (const auto& s : t.signals) {
        const std::string base = sim::base_signal(s.name);
        int idx = -1;
        if (base != s.name) idx = std::stoi(s.name.substr(base.size() + 1));
        groups[base].emplace_back(idx, &s);
        cycles_ = std::max(cycles_, s.values.size());
    }
    std::vector<std::pair<int, const sim::SignalTrace*>> layout;
    for (auto& [name, elems] : groups) {
        std::sort(elems.begin(), elems.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        sim::SlotRef r;
        r.base = static_cast<int>(layout.size());
        r.width = elems.front().second->width;
        r.array = elems.front().first >= 0;
        r.count = r.array ? elems.back().first + 1 : 1;
        std::vector<const sim::SignalTrace*> dense(static_cast<std::size_t>(r.count), nullptr);
        for (const auto& [i, s] : elems) dense[static_cast<std::size_t>(std::max(i, 0))] = s;
        for (const auto* s : dense) layout.emplace_back(0, s);
        slots_[name] = r;
    }
    width_ = layout.size();
    rows_.assign(cycles_ * width_, 0);
    for (std::size_t k = 0; k < layout.size(); ++k) {
        const auto* s = layout[k].second;
        if (!s) continue;
        for (std::size_t c = 0; c < s->values.size(); ++c) rows_[c * width_ + k] = s->values[c];
    }
}

std::vector<std::uint8_t> TraceView::evaluate(const std::string& expr) const {
    const hdl::ExprPtr e = hdl::parse_expression(expr, "<condition>");
    const sim::CompiledExpr c = sim::compile_expr(e, [this](const std::string& n) -> std::optional<sim::SlotRef> {
        auto it = slots_.find(n);
        if (it == slots_.end()) return std::nullopt;
        return it->second;
    });
    std::vector<std::uint8_t> out(cycles_, 0);
    for (std::size_t p = 0; p < cycles_; ++p) out[p] = c.eval(rows_.data() + p * width_) != 0;
    return out;
}

namespace {

bool matches_cached(const PathCondition& pc, const TraceView& view,
                    std::map<std::string, std::vector<std::uint8_t>>& cache) {
    const std::size_t n = view.cycles();
    if (n == 0) return false;
    std::vector<std::uint8_t> reach(n, 1);
    for (const auto& s : pc.steps) {
        switch (s.kind) {
        case StepKind::Branch: {
            auto it = cache.find(s.expr);
            if (it == cache.end()) it = cache.emplace(s.expr, view.evaluate(s.expr)).first;
            for (std::size_t p = 0; p < n; ++p) reach[p] &= it->second[p];
            break;
        }
        case StepKind::OneCycle:
            for (std::size_t p = n; p-- > 1;) reach[p] = reach[p - 1];
            reach[0] = 0;
            break;
        case StepKind::Eventually: {
            auto first = std::find(reach.begin(), reach.end(), 1);
            std::fill(first, reach.end(), 1);
            break;
        }
        }
        if (std::find(reach.begin(), reach.end(), 1) == reach.end()) return false;
    }
    return true;
}

} // namespace

bool matches(const PathCondition& pc, const TraceView& view) {
    std::map<std::string, std::vector<std::uint8_t>> cache;
    return matches_cached(pc, view, cache);
}

std::set<std::string> match_coverage(const sim::InstanceTrace& trace, const std::vector<PathCondition>& conditions) {
    const TraceView view(trace);
    std::map<std::string, std::vector<std::uint8_t>> cache;
    std::set<std::string> out;
    for (const auto& pc : conditions)
        if (matches_cached(pc, view, cache)) out.insert(pc.path_id);
    return out;
}

std::size_t CoverageReport::total() const {
    std::size_t n = 0;
    for (const auto& [_, m] : modules) n += m.total;
    return n;
}

std::size_t CoverageReport::covered() const {
    std::size_t n = 0;
    for (const auto& [_, m] : modules) n += m.covered;
    return n;
}

double CoverageReport::overall_percent() const {
    const std::size_t t = total();
    return t == 0 ? 0.0 : 100.0 * static_cast<double>(covered()) / static_cast<double>(t);
}

nlohmann::json coverage_to_json(const CoverageReport& r) {
    nlohmann::json mods = nlohmann::json::array();
    for (const auto& [name, m] : r.modules)
        mods.push_back({{"module", name},
                        {"totalPaths", m.total},
                        {"coveredPaths", m.covered},
                        {"truncated", m.truncated},
                        {"coveredIds", m.covered_ids}});
    return {{"schemaVersion", 1}, {"modules", mods}, {"overallPercent", r.overall_percent()}};
}

CoverageReport coverage_from_json(const nlohmann::json& j) {
    CoverageReport r;
    for (const auto& m : j.at("modules")) {
        ModuleCoverage mc;
        mc.module = m.at("module").get<std::string>();
        mc.total = m.at("totalPaths").get<std::size_t>();
        mc.covered = m.at("coveredPaths").get<std::size_t>();
        mc.truncated = m.at("truncated").get<bool>();
        mc.covered_ids = m.at("coveredIds").get<std::set<std::string>>();
        r.modules[mc.module] = std::move(mc);
    }
    return r;
}

std::string coverage_csv(const CoverageReport& r) {
    std::ostringstream os;
    os << "module,total_paths,covered_paths,percent,truncated\n";
    for (const auto& [name, m] : r.modules) {
        const double pct = m.total ? 100.0 * static_cast<double>(m.covered) / static_cast<double>(m.total) : 0.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", pct);
        os << name << ',' << m.total << ',' << m.covered << ',' << buf << ',' << (m.truncated ? "true" : "false")
           << '\n';
    }
    return os.str();
}

CoverageTracker::CoverageTracker(const hdl::DesignHierarchy& h, const std::map<std::string, meg::Meg>& megs,
                                 std::size_t max_paths, std::size_t max_len) {
    for (const auto& [name, g] : megs) {
        if (!h.modules.count(name)) continue;
        auto ps = meg::enumerate_meps(g, max_paths, max_len);
        auto& conds = conditions_[name];
        for (const auto& p : ps.paths) conds.push_back(path_condition(p, g));
        ModuleCoverage mc;
        mc.module = name;
        mc.total = ps.paths.size();
        mc.truncated = ps.truncated;
        report_.modules[name] = std::move(mc);
        paths_[name] = std::move(ps);
    }
}

std::size_t CoverageTracker::add(const sim::TraceBundle& bundle) {
    std::size_t fresh = 0;
    for (const auto& inst : bundle.instances) {
        auto mit = report_.modules.find(inst.module);
        if (mit == report_.modules.end()) continue;
        ModuleCoverage& mc = mit->second;
        if (mc.covered == mc.total) continue;
        std::vector<PathCondition> pending;
        for (const auto& pc : conditions_.at(inst.module))
            if (!mc.covered_ids.count(pc.path_id)) pending.push_back(pc);
        for (const auto& id : match_coverage(inst, pending)) {
            if (mc.covered_ids.insert(id).second) ++fresh;
        }
        mc.covered = mc.covered_ids.size();
    }
    return fresh;
}

bool CoverageTracker::complete() const {
    for (const auto& [_, m] : report_.modules)
        if (m.covered < m.total) return false;
    return true;
}

const std::vector<PathCondition>& CoverageTracker::conditions(const std::string& module) const {
    return conditions_.at(module);
}

} // namespace tleak::coverage
