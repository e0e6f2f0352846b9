#include "tleak/diag/diagnose.hpp"

#include <algorithm>
#include <map>

#include "tleak/common/error.hpp"
#include "tleak/kernels/trace_kernels.hpp"

namespace tleak::diag {

std::vector<std::string> Diagnosis::culprit_signals() const {
    std::vector<std::string> out;
    for (const auto& c : culprits) out.push_back(c.signal);
    return out;
}

namespace {

std::set<std::string> base_names(const sim::InstanceTrace& t) {
    std::set<std::string> out;
    for (const auto& s : t.signals) out.insert(sim::base_signal(s.name));
    return out;
}

void check_signals(const sim::InstanceTrace& a, const sim::InstanceTrace& b, const meg::Meg& g) {
    std::set<std::string> names;
    for (const auto& s : a.signals) names.insert(s.name);
    std::set<std::string> names_b;
    for (const auto& s : b.signals) names_b.insert(s.name);
    if (names != names_b)
        throw Error(ErrorKind::SignalMismatch, "traces of '" + a.path + "' and '" + b.path + "' record different signals");
    std::set<std::string> nodes;
    for (const auto& n : g.nodes())
        if (n.kind != meg::NodeKind::Instance && n.id != "clk") nodes.insert(n.id);
    const auto traced = base_names(a);
    if (traced != nodes) {
        std::string detail;
        for (const auto& n : nodes)
            if (!traced.count(n)) detail += " missing:" + n;
        for (const auto& n : traced)
            if (!nodes.count(n)) detail += " extra:" + n;
        throw Error(ErrorKind::SignalMismatch,
                    "trace of '" + a.path + "' does not match the MEG of '" + g.module() + "':" + detail);
    }
}

} // namespace

Diagnosis diagnose(const sim::InstanceTrace& a, const sim::InstanceTrace& b, const meg::Meg& g) {
    check_signals(a, b, g);
    Diagnosis d;
    d.instance = a.path;
    d.module = g.module();

    // Phase 1.
    std::size_t best = kernels::npos;
    std::set<std::string> instigators;
    std::size_t len_a = 0, len_b = 0;
    for (const auto& sa : a.signals) {
        const auto* sb = b.find(sa.name);
        len_a = sa.values.size();
        len_b = sb->values.size();
        const std::size_t n = std::min(len_a, len_b);
        const std::size_t c = kernels::first_difference(sa.values.data(), sb->values.data(), n);
        if (c == kernels::npos) continue;
        if (c < best) {
            best = c;
            instigators.clear();
        }
        if (c == best) instigators.insert(sim::base_signal(sa.name));
    }
    if (best == kernels::npos && len_a != len_b) {
        const auto& longer = len_a > len_b ? a : b;
        const std::size_t n = std::min(len_a, len_b);
        for (const auto& s : longer.signals)
            if (kernels::last_change(s.values.data(), s.values.size(), n) != kernels::npos)
                instigators.insert(sim::base_signal(s.name));
        if (!instigators.empty()) {
            best = n;
            d.length_mismatch = true;
        }
    }
    if (best == kernels::npos)
        throw Error(ErrorKind::NoDivergence, "traces of '" + a.path + "' do not diverge");
    d.divergence_cycle = best;
    d.instigators.assign(instigators.begin(), instigators.end());

    // Phase 2.
    std::map<std::string, std::set<SourceLoc>> culprits;
    std::set<std::string> visited(instigators.begin(), instigators.end());
    std::vector<std::string> frontier;
    for (const auto& s : d.instigators) {
        const auto* n = g.node(s);
        if (n && n->registered) {
            auto& locs = culprits[s];
            for (const auto& e : g.edges())
                if (e.to == s) locs.insert(e.locs.begin(), e.locs.end());
        } else {
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        d.frontier_trace.push_back(frontier);
        std::vector<std::string> next;
        for (const auto& id : frontier) {
            for (std::size_t ei : g.out_edges(id)) {
                const meg::MegEdge& e = g.edges()[ei];
                if (e.to == id) continue;
                const auto* child = g.node(e.to);
                if (child->registered) {
                    culprits[e.to].insert(e.locs.begin(), e.locs.end());
                } else if (visited.insert(e.to).second) {
                    next.push_back(e.to);
                }
            }
        }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
    }
    for (auto& [sig, locs] : culprits) d.culprits.push_back(Culprit{sig, std::move(locs)});
    return d;
}

nlohmann::json diagnosis_to_json(const Diagnosis& d) {
    nlohmann::json culprits = nlohmann::json::array();
    for (const auto& c : d.culprits) {
        nlohmann::json lines = nlohmann::json::array();
        nlohmann::json locs = nlohmann::json::array();
        std::set<int> seen;
        for (const auto& l : c.locs) {
            if (seen.insert(l.line).second) lines.push_back(l.line);
            locs.push_back({{"file", l.file}, {"line", l.line}, {"col", l.column}});
        }
        const SourceLoc first = c.locs.empty() ? SourceLoc{} : *c.locs.begin();
        culprits.push_back(
            {{"signal", c.signal}, {"file", first.file}, {"line", first.line}, {"lines", lines}, {"locs", locs}});
    }
    return {{"instance", d.instance},
            {"module", d.module},
            {"instigators", d.instigators},
            {"divergenceCycle", d.divergence_cycle},
            {"lengthMismatch", d.length_mismatch},
            {"culprits", culprits},
            {"frontierTrace", d.frontier_trace}};
}

Diagnosis diagnosis_from_json(const nlohmann::json& j) {
    Diagnosis d;
    d.instance = j.at("instance").get<std::string>();
    d.module = j.at("module").get<std::string>();
    d.instigators = j.at("instigators").get<std::vector<std::string>>();
    d.divergence_cycle = j.at("divergenceCycle").get<std::size_t>();
    d.length_mismatch = j.value("lengthMismatch", false);
    for (const auto& c : j.at("culprits")) {
        Culprit k;
        k.signal = c.at("signal").get<std::string>();
        for (const auto& l : c.at("locs"))
            k.locs.insert(SourceLoc{l.at("file").get<std::string>(), l.at("line").get<int>(), l.at("col").get<int>()});
        d.culprits.push_back(std::move(k));
    }
    d.frontier_trace = j.at("frontierTrace").get<std::vector<std::vector<std::string>>>();
    return d;
}

} // namespace tleak::diag
