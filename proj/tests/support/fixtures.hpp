#pragma once

#include <string>
#include <vector>

#include "tleak/hdl/parser.hpp"
#include "tleak/sim/stimulus.hpp"

namespace tleak::fixtures {

inline const std::vector<std::string> kDuts = {"cacheset", "cacheset_multiway", "serdiv", "ct_alu"};

inline std::string design_path(const std::string& name) {
    return std::string(TLEAK_DESIGNS_DIR) + "/" + name + ".hdl";
}

inline std::string stimulus_path(const std::string& name) {
    return std::string(TLEAK_DESIGNS_DIR) + "/stimuli/" + name + ".json";
}

inline hdl::DesignHierarchy load(const std::string& name) { return hdl::load_design({design_path(name)}); }

inline sim::Stimulus stimulus(const std::string& name) { return sim::load_stimulus(stimulus_path(name)); }

} // namespace tleak::fixtures
