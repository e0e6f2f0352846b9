#include "tleak/common/error.hpp"

namespace tleak {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedIdentifier: return "UnresolvedIdentifier";
    case ErrorKind::RecursiveInstantiation: return "RecursiveInstantiation";
    case ErrorKind::PortMismatch: return "PortMismatch";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::CombinationalLoop: return "CombinationalLoop";
    case ErrorKind::InvalidStimulus: return "InvalidStimulus";
    case ErrorKind::VcdParseError: return "VcdParseError";
    case ErrorKind::ClockNotFound: return "ClockNotFound";
    case ErrorKind::UnknownScope: return "UnknownScope";
    case ErrorKind::UnknownInstance: return "UnknownInstance";
    case ErrorKind::StructuralMismatch: return "StructuralMismatch";
    case ErrorKind::NoDivergence: return "NoDivergence";
    case ErrorKind::SignalMismatch: return "SignalMismatch";
    case ErrorKind::PathNotInGraph: return "PathNotInGraph";
    case ErrorKind::ExpressionEvalError: return "ExpressionEvalError";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Error";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message, const std::optional<SourceLoc>& loc) {
    std::string out;
    if (loc) {
        out += loc->str();
        out += ": ";
    }
    out += to_string(kind);
    if (!message.empty()) {
        out += ": ";
        out += message;
    }
    return out;
}

} // namespace

Error::Error(ErrorKind kind, std::string message, std::optional<SourceLoc> loc)
    : std::runtime_error(compose(kind, message, loc)), kind_(kind), loc_(std::move(loc)),
      detail_(std::move(message)) {}

} // namespace tleak
