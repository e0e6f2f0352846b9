#pragma once

// Independent reference implementations used to check the library. None of
// them call into the code they check.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tleak/coverage/coverage.hpp"
#include "tleak/hdl/ast.hpp"
#include "tleak/meg/meg.hpp"
#include "tleak/sim/trace.hpp"

namespace tleak::oracle {

using EdgeSet = std::set<std::pair<std::string, std::string>>;

// Dependency edges by walking statements directly: every identifier read by
// an assignment or by an enclosing if/case condition feeds the target.
// `child_outputs` holds, per instantiated module, its output port names.
EdgeSet statement_edges(const hdl::ModuleAst& m, const std::map<std::string, std::set<std::string>>& child_outputs);

EdgeSet edge_set(const meg::Meg& g);

// Every node subset, ordered by a topological order of the DAG, that starts
// at an input, ends at an output, and has an edge between each neighbour.
std::set<std::vector<std::string>> brute_force_paths(const meg::Meg& dag);

meg::Meg random_dag(std::uint64_t seed, int max_nodes);

// Groups instance paths by their dot-count depth, deepest first.
std::vector<std::vector<std::string>> levels_by_depth(const hdl::DesignHierarchy& h);

// Direct evaluation of an expression on a trace at one cycle.
std::uint64_t eval_at(const hdl::ExprPtr& e, const sim::InstanceTrace& t, std::size_t cycle);

// Search over every start cycle and every delay choice.
bool exhaustive_alignment(const coverage::PathCondition& pc, const sim::InstanceTrace& t);

// Last toggle of any signal at or after `from`, recomputed from raw values.
std::size_t naive_cycles(const sim::TraceBundle& b, const std::string& instance);

} // namespace tleak::oracle
