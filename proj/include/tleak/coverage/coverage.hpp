#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tleak/hdl/ast.hpp"
#include "tleak/meg/meg.hpp"
#include "tleak/sim/eval.hpp"
#include "tleak/sim/trace.hpp"

namespace tleak::coverage {

enum class StepKind { Branch, OneCycle, Eventually };

std::string_view to_string(StepKind kind);

struct ConditionStep {
    StepKind kind = StepKind::Branch;
    std::string expr; // Branch only
    int line = 0;     // Branch only: first line of the inducing edge

    friend bool operator==(const ConditionStep&, const ConditionStep&) = default;
};

struct PathCondition {
    std::string path_id;
    std::vector<std::string> nodes;
    std::vector<ConditionStep> steps;
};

// Per edge, in path order: Branch when the edge is conditioned, OneCycle
// when it enters a registered node, Eventually when it leaves an input or
// instance node. Throws Error{PathNotInGraph}.
PathCondition path_condition(const meg::MicroEventPath& p, const meg::Meg& g);

std::string property_name(const std::string& module, const std::string& path_id);

// One `cover property` line. `warning` is set for empty step lists.
std::string emit_sva(const PathCondition& pc, const std::string& module, std::string* warning = nullptr);

// Trace values of one instance laid out as evaluator slots, row per cycle.
class TraceView {
public:
    explicit TraceView(const sim::InstanceTrace& t);

    std::size_t cycles() const { return cycles_; }
    // Truth of `expr` at every cycle. Throws Error{ExpressionEvalError}.
    std::vector<std::uint8_t> evaluate(const std::string& expr) const;

private:
    std::size_t cycles_ = 0;
    std::size_t width_ = 0;
    std::vector<std::uint64_t> rows_; // cycles_ x width_
    std::map<std::string, sim::SlotRef> slots_;
};

// Exact existence of an alignment: a set of reachable positions is carried
// through the steps; every position must be a cycle of the trace.
bool matches(const PathCondition& pc, const TraceView& view);

std::set<std::string> match_coverage(const sim::InstanceTrace& trace, const std::vector<PathCondition>& conditions);

struct ModuleCoverage {
    std::string module;
    std::size_t total = 0;
    std::size_t covered = 0;
    bool truncated = false;
    std::set<std::string> covered_ids;
};

struct CoverageReport {
    std::map<std::string, ModuleCoverage> modules;

    std::size_t total() const;
    std::size_t covered() const;
    double overall_percent() const;
};

nlohmann::json coverage_to_json(const CoverageReport& r);
CoverageReport coverage_from_json(const nlohmann::json& j);
std::string coverage_csv(const CoverageReport& r);

// Accumulates timing coverage across runs. Already-covered paths are not
// re-evaluated.
class CoverageTracker {
public:
    CoverageTracker(const hdl::DesignHierarchy& h, const std::map<std::string, meg::Meg>& megs,
                    std::size_t max_paths = meg::kDefaultMaxPaths, std::size_t max_len = meg::kDefaultMaxLen);

    // Returns the number of newly covered paths.
    std::size_t add(const sim::TraceBundle& bundle);
    const CoverageReport& report() const { return report_; }
    bool complete() const;
    const std::vector<PathCondition>& conditions(const std::string& module) const;
    const std::map<std::string, meg::PathSet>& paths() const { return paths_; }

private:
    std::map<std::string, meg::PathSet> paths_;
    std::map<std::string, std::vector<PathCondition>> conditions_;
    CoverageReport report_;
};

} // namespace tleak::coverage
