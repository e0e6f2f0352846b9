#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tleak/sim/stimulus.hpp"

namespace tleak::sim {

struct SignalTrace {
    std::string name; // array elements appear as `name[i]`
    int width = 1;
    std::vector<std::uint64_t> values; // one sample per cycle

    friend bool operator==(const SignalTrace&, const SignalTrace&) = default;
};

struct InstanceTrace {
    std::string path;
    std::string module;
    std::vector<SignalTrace> signals; // sorted by name

    const SignalTrace* find(const std::string& name) const;
    friend bool operator==(const InstanceTrace&, const InstanceTrace&) = default;
};

struct TraceBundle {
    std::string run_id;
    std::size_t start_cycle = 0;
    std::size_t cycles = 0;
    bool hit_max_cycles = false;
    Stimulus stimulus;
    std::vector<InstanceTrace> instances; // instance tree pre-order

    const InstanceTrace* find(const std::string& path) const;
    const InstanceTrace& at(const std::string& path) const;
    friend bool operator==(const TraceBundle&, const TraceBundle&) = default;
};

// Per-module code activity: assignments that executed with a value change and
// branch arms taken, keyed by module name.
struct ActivityLog {
    std::map<std::string, std::set<int>> assignments;
    std::map<std::string, std::set<std::pair<int, int>>> branches;

    void merge(const ActivityLog& other);
};

struct SimulationResult {
    TraceBundle trace;
    ActivityLog activity;
};

// Name of the array parent for `name[i]`, or the name itself.
std::string base_signal(const std::string& name);

} // namespace tleak::sim
