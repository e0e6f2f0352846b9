#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "tleak/hdl/ast.hpp"

namespace tleak::sim {

struct StimulusStep {
    std::string tag;
    std::map<std::string, std::uint64_t> data;
    // Minimum cycles the step lasts; it then runs on until the design is
    // quiescent.
    int hold = 1;

    friend bool operator==(const StimulusStep&, const StimulusStep&) = default;
};

struct Stimulus {
    std::vector<StimulusStep> steps;

    std::vector<std::string> tags() const;
    friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

// The stimulus alphabet of a top module: tag names plus data inputs with
// their widths.
struct Alphabet {
    std::vector<std::string> tags;
    std::vector<std::pair<std::string, int>> data;

    static Alphabet of(const hdl::ModuleAst& top);
    int width_of(const std::string& input) const;
};

nlohmann::json stimulus_to_json(const Stimulus& s);
Stimulus stimulus_from_json(const nlohmann::json& j);
Stimulus load_stimulus(const std::string& path);
void save_stimulus(const Stimulus& s, const std::string& path);

// Throws Error{InvalidStimulus} when a tag is undeclared, a data key is not a
// declared data input, or a value exceeds the input width.
void validate_stimulus(const Stimulus& s, const hdl::ModuleAst& top);

std::string stimulus_str(const Stimulus& s);

} // namespace tleak::sim
