#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tleak/hdl/ast.hpp"

namespace tleak::hdl {

struct SourceText {
    std::string path;
    std::string text;
};

// Syntax only: no cross-module resolution. Throws Error{SyntaxError,
// Unsupported}.
std::vector<ModuleAst> parse_modules(const SourceText& source);

// Parses every source, resolves identifiers and instance bindings, and builds
// the instance tree. `top` is inferred when exactly one module is never
// instantiated.
DesignHierarchy parse_design(const std::vector<SourceText>& sources,
                             const std::optional<std::string>& top = std::nullopt);

// Reads files from disk and forwards to parse_design; records content hashes.
DesignHierarchy load_design(const std::vector<std::string>& paths,
                            const std::optional<std::string>& top = std::nullopt);

// Standalone expression in the subset grammar (used for rendered edge
// conditions and classifier expressions).
ExprPtr parse_expression(std::string_view text, const std::string& file = "<expr>");

// Resolution checks for a single module against a module table; exposed for
// tests that build ASTs by hand.
void check_module(const ModuleAst& m, const std::map<std::string, ModuleAst>& modules);

std::string read_file(const std::string& path);

} // namespace tleak::hdl
