#include "tleak/hdl/hierarchy.hpp"

#include <algorithm>

namespace tleak::hdl {

std::vector<std::vector<std::string>> levelize(const DesignHierarchy& h) {
    const int depth = h.max_level();
    std::vector<std::vector<std::string>> groups(static_cast<std::size_t>(depth));
    for (const auto& inst : h.instances) groups[static_cast<std::size_t>(depth - inst.level)].push_back(inst.path);
    for (auto& g : groups) std::sort(g.begin(), g.end());
    return groups;
}

bool is_strict_descendant(const std::string& path, const std::string& ancestor) {
    return path.size() > ancestor.size() + 1 && path.compare(0, ancestor.size(), ancestor) == 0 &&
           path[ancestor.size()] == '.';
}

} // namespace tleak::hdl
