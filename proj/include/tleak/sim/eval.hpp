#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tleak/hdl/ast.hpp"

namespace tleak::sim {

inline std::uint64_t mask(int width) { return width >= 64 ? ~0ULL : ((1ULL << width) - 1); }

// Location of a named value in a flat slot vector. count > 1 for arrays.
struct SlotRef {
    int base = 0;
    int count = 1;
    int width = 1;
    bool array = false;
};

using Resolver = std::function<std::optional<SlotRef>(const std::string&)>;

// Expression flattened to a node array; node 0 is the root.
class CompiledExpr {
public:
    CompiledExpr() = default;

    std::uint64_t eval(const std::uint64_t* slots) const { return nodes_.empty() ? 0 : eval_at(0, slots); }
    int width() const { return nodes_.empty() ? 1 : nodes_[0].width; }
    bool empty() const { return nodes_.empty(); }

private:
    friend CompiledExpr compile_expr(const hdl::ExprPtr& e, const Resolver& resolve);

    enum class Op : std::uint8_t {
        Const, Load, LoadElem, Bit, Slice, BitNot, LogNot,
        Add, Sub, And, Or, Xor, Shl, Shr, Eq, Ne, Lt, Le, Gt, Ge, LogAnd, LogOr, Ternary
    };
    struct Node {
        Op op = Op::Const;
        int width = 1;
        std::uint64_t imm = 0;
        int slot = 0;
        int count = 1;
        int lsb = 0;
        int a = -1, b = -1, c = -1;
    };

    std::uint64_t eval_at(int i, const std::uint64_t* s) const;
    int add(const hdl::ExprPtr& e, const Resolver& resolve);

    std::vector<Node> nodes_;
};

// Throws Error{ExpressionEvalError} for identifiers the resolver rejects.
CompiledExpr compile_expr(const hdl::ExprPtr& e, const Resolver& resolve);

} // namespace tleak::sim
