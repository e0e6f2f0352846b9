#include "tleak/sim/trace.hpp"

#include <algorithm>

#include "tleak/common/error.hpp"

namespace tleak::sim {

const SignalTrace* InstanceTrace::find(const std::string& name) const {
    auto it = std::lower_bound(signals.begin(), signals.end(), name,
                               [](const SignalTrace& s, const std::string& n) { return s.name < n; });
    return it != signals.end() && it->name == name ? &*it : nullptr;
}

const InstanceTrace* TraceBundle::find(const std::string& path) const {
    for (const auto& i : instances)
        if (i.path == path) return &i;
    return nullptr;
}

const InstanceTrace& TraceBundle::at(const std::string& path) const {
    if (const auto* i = find(path)) return *i;
    throw Error(ErrorKind::UnknownInstance, "no trace for instance '" + path + "'");
}

void ActivityLog::merge(const ActivityLog& other) {
    for (const auto& [m, ids] : other.assignments) assignments[m].insert(ids.begin(), ids.end());
    for (const auto& [m, arms] : other.branches) branches[m].insert(arms.begin(), arms.end());
}

std::string base_signal(const std::string& name) {
    const auto p = name.find('[');
    return p == std::string::npos ? name : name.substr(0, p);
}

} // namespace tleak::sim
