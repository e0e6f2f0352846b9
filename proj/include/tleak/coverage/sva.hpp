#pragma once

#include <string>
#include <vector>

#include "tleak/sim/trace.hpp"

namespace tleak::coverage {

// One boolean term of a cover sequence and the cycle delay range that
// precedes it. max_delay < 0 stands for `$`.
struct SvaElement {
    int min_delay = 0;
    int max_delay = 0;
    std::string expr;
};

struct SvaProperty {
    std::string name;
    std::vector<SvaElement> sequence;
};

// Problems found in a file of `name: cover property (@(posedge clk) seq);`
// lines; empty when the text is in the supported subset.
std::vector<std::string> lint_sva(const std::string& text);

// Throws Error{SyntaxError} on the first lint problem.
std::vector<SvaProperty> parse_sva(const std::string& text);

// Reference evaluation by depth-first search over start cycles and delays.
bool eval_property(const SvaProperty& p, const sim::InstanceTrace& trace);

} // namespace tleak::coverage
