#pragma once

#include <string>

namespace tleak {

// 1-based line and column.
struct SourceLoc {
    std::string file;
    int line = 0;
    int column = 0;

    std::string str() const { return file + ":" + std::to_string(line) + ":" + std::to_string(column); }

    friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
    friend auto operator<=>(const SourceLoc&, const SourceLoc&) = default;
};

} // namespace tleak
