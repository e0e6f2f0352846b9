#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tleak/common/source_loc.hpp"
#include "tleak/meg/meg.hpp"
#include "tleak/sim/trace.hpp"

namespace tleak::diag {

struct Culprit {
    std::string signal;
    // Assignments inducing the dependency that reached this register.
    std::set<SourceLoc> locs;

    friend bool operator==(const Culprit&, const Culprit&) = default;
};

struct Diagnosis {
    std::string instance;
    std::string module;
    std::vector<std::string> instigators; // sorted
    std::size_t divergence_cycle = 0;
    // Divergence found only because one trace is longer.
    bool length_mismatch = false;
    std::vector<Culprit> culprits; // sorted by signal
    std::vector<std::vector<std::string>> frontier_trace;

    std::vector<std::string> culprit_signals() const;
    friend bool operator==(const Diagnosis&, const Diagnosis&) = default;
};

// Phase 1 finds the earliest cycle at which the traces differ and every
// signal differing there; Phase 2 walks the MEG breadth-first from those
// signals, stopping at registered nodes, which become culprits.
// Errors: NoDivergence, SignalMismatch.
Diagnosis diagnose(const sim::InstanceTrace& a, const sim::InstanceTrace& b, const meg::Meg& g);

nlohmann::json diagnosis_to_json(const Diagnosis& d);
Diagnosis diagnosis_from_json(const nlohmann::json& j);

} // namespace tleak::diag
