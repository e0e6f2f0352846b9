#pragma once

#include <string>

#include "json.hpp"

#include "tleak/hdl/ast.hpp"

namespace tleak::hdl {

// Fully parenthesized rendering; this is also the canonical text of edge
// conditions, and it re-parses to the same tree.
std::string render_expr(const ExprPtr& e);
std::string render_lvalue(const LValue& lv);

// Subset-grammar source text for a module, pragmas included.
std::string print_module(const ModuleAst& m);

nlohmann::json module_to_json(const ModuleAst& m, bool with_locs = true);
nlohmann::json design_to_json(const DesignHierarchy& h, bool with_locs = true);

} // namespace tleak::hdl
