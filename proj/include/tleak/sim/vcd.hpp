#pragma once

#include <map>
#include <string>
#include <vector>

#include "tleak/hdl/ast.hpp"
#include "tleak/sim/trace.hpp"

namespace tleak::sim {

// Cycle c is written at time 10c with the clock low; the clock rises at
// 10c + 5. Run metadata (start cycle, run id, stimulus) travels in a
// $comment block so that load_vcd(write_vcd(b)) == b.
std::string write_vcd(const TraceBundle& bundle);

struct VcdLoadResult {
    TraceBundle bundle;
    // x/z bits read as 0; count of affected value changes per "path.signal".
    std::map<std::string, std::size_t> xz_warnings;
    // "path.signal" entries the design declares but the VCD lacks.
    std::vector<std::string> missing_signals;
};

// Samples every variable at rising edges of `clk`, using the values held just
// before the edge. scope_map renames dotted VCD scopes to instance paths
// (identity when absent). When a design is given, every scope must name one of
// its instances (Error{UnknownScope}). Errors: VcdParseError, ClockNotFound.
VcdLoadResult load_vcd(const std::string& text, const std::map<std::string, std::string>& scope_map = {},
                       const hdl::DesignHierarchy* design = nullptr);

VcdLoadResult load_vcd_file(const std::string& path, const std::map<std::string, std::string>& scope_map = {},
                            const hdl::DesignHierarchy* design = nullptr);

} // namespace tleak::sim
