#pragma once

#include <string>
#include <vector>

#include "tleak/hdl/ast.hpp"

namespace tleak::hdl {

// Instance paths grouped by depth, deepest group first; paths within a group
// are in lexicographic order.
std::vector<std::vector<std::string>> levelize(const DesignHierarchy& h);

// True when `ancestor` is a strict prefix of `path` in the instance tree.
bool is_strict_descendant(const std::string& path, const std::string& ancestor);

} // namespace tleak::hdl
