#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tleak/common/source_loc.hpp"

namespace tleak {

enum class ErrorKind {
    SyntaxError,
    UnresolvedIdentifier,
    RecursiveInstantiation,
    PortMismatch,
    Unsupported,
    CombinationalLoop,
    InvalidStimulus,
    VcdParseError,
    ClockNotFound,
    UnknownScope,
    UnknownInstance,
    StructuralMismatch,
    NoDivergence,
    SignalMismatch,
    PathNotInGraph,
    ExpressionEvalError,
    EmptyGroup,
    IoError,
    ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the toolkit. The kind is stable and is what
// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::optional<SourceLoc> loc = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    const std::optional<SourceLoc>& loc() const noexcept { return loc_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::optional<SourceLoc> loc_;
    std::string detail_;
};

} // namespace tleak
