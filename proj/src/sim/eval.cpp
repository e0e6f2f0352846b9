#include "tleak/sim/eval.hpp"

#include <algorithm>

#include "tleak/common/error.hpp"

namespace tleak::sim {

using hdl::BinaryOp;
using hdl::ExprKind;

int CompiledExpr::add(const hdl::ExprPtr& e, const Resolver& resolve) {
    const int idx = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Node n;
    auto lookup = [&](const std::string& name) {
        auto r = resolve(name);
        if (!r) throw Error(ErrorKind::ExpressionEvalError, "unknown signal '" + name + "'", e->loc);
        return *r;
    };
    switch (e->kind) {
    case ExprKind::Number:
        n.op = Op::Const;
        n.imm = e->value;
        n.width = e->literal_width ? e->literal_width : (e->value >> 32 ? 64 : 32);
        break;
    case ExprKind::Ident: {
        const SlotRef r = lookup(e->name);
        if (r.array) throw Error(ErrorKind::ExpressionEvalError, "array '" + e->name + "' used without index", e->loc);
        n.op = Op::Load;
        n.slot = r.base;
        n.width = r.width;
        break;
    }
    case ExprKind::Index: {
        const SlotRef r = lookup(e->name);
        n.slot = r.base;
        n.count = r.count;
        if (r.array) {
            n.op = Op::LoadElem;
            n.width = r.width;
        } else {
            n.op = Op::Bit;
            n.width = 1;
            n.count = r.width;
        }
        break;
    }
    case ExprKind::Slice: {
        const SlotRef r = lookup(e->name);
        n.op = Op::Slice;
        n.slot = r.base;
        n.lsb = e->lsb;
        n.width = e->msb - e->lsb + 1;
        break;
    }
    case ExprKind::Unary:
        n.op = e->uop == hdl::UnaryOp::BitNot ? Op::BitNot : Op::LogNot;
        break;
    case ExprKind::Binary:
        switch (e->bop) {
        case BinaryOp::Add: n.op = Op::Add; break;
        case BinaryOp::Sub: n.op = Op::Sub; break;
        case BinaryOp::And: n.op = Op::And; break;
        case BinaryOp::Or: n.op = Op::Or; break;
        case BinaryOp::Xor: n.op = Op::Xor; break;
        case BinaryOp::Shl: n.op = Op::Shl; break;
        case BinaryOp::Shr: n.op = Op::Shr; break;
        case BinaryOp::Eq: n.op = Op::Eq; break;
        case BinaryOp::Ne: n.op = Op::Ne; break;
        case BinaryOp::Lt: n.op = Op::Lt; break;
        case BinaryOp::Le: n.op = Op::Le; break;
        case BinaryOp::Gt: n.op = Op::Gt; break;
        case BinaryOp::Ge: n.op = Op::Ge; break;
        case BinaryOp::LogAnd: n.op = Op::LogAnd; break;
        case BinaryOp::LogOr: n.op = Op::LogOr; break;
        }
        break;
    case ExprKind::Ternary: n.op = Op::Ternary; break;
    }
    if (e->kind == ExprKind::Index) n.a = add(e->operands.at(0), resolve);
    if (e->kind == ExprKind::Unary || e->kind == ExprKind::Binary || e->kind == ExprKind::Ternary) {
        n.a = add(e->operands.at(0), resolve);
        if (e->operands.size() > 1) n.b = add(e->operands[1], resolve);
        if (e->operands.size() > 2) n.c = add(e->operands[2], resolve);
        const int wa = nodes_[n.a].width;
        const int wb = n.b >= 0 ? nodes_[n.b].width : 0;
        switch (n.op) {
        case Op::BitNot: n.width = wa; break;
        case Op::LogNot: n.width = 1; break;
        case Op::Add: case Op::Sub: case Op::And: case Op::Or: case Op::Xor: n.width = std::max(wa, wb); break;
        case Op::Shl: case Op::Shr: n.width = wa; break;
        case Op::Ternary: n.width = std::max(wb, nodes_[n.c].width); break;
        default: n.width = 1; break;
        }
    }
    nodes_[idx] = n;
    return idx;
}

std::uint64_t CompiledExpr::eval_at(int i, const std::uint64_t* s) const {
    const Node& n = nodes_[i];
    switch (n.op) {
    case Op::Const: return n.imm;
    case Op::Load: return s[n.slot];
    case Op::LoadElem: {
        const std::uint64_t k = eval_at(n.a, s);
        return k < static_cast<std::uint64_t>(n.count) ? s[n.slot + static_cast<int>(k)] : 0;
    }
    case Op::Bit: {
        const std::uint64_t k = eval_at(n.a, s);
        return k < static_cast<std::uint64_t>(n.count) ? (s[n.slot] >> k) & 1 : 0;
    }
    case Op::Slice: return (s[n.slot] >> n.lsb) & mask(n.width);
    case Op::BitNot: return ~eval_at(n.a, s) & mask(n.width);
    case Op::LogNot: return eval_at(n.a, s) == 0;
    case Op::LogAnd: return eval_at(n.a, s) != 0 && eval_at(n.b, s) != 0;
    case Op::LogOr: return eval_at(n.a, s) != 0 || eval_at(n.b, s) != 0;
    case Op::Ternary: return eval_at(n.a, s) ? eval_at(n.b, s) : eval_at(n.c, s);
    default: break;
    }
    const std::uint64_t a = eval_at(n.a, s);
    const std::uint64_t b = eval_at(n.b, s);
    switch (n.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::And: return a & b;
    case Op::Or: return a | b;
    case Op::Xor: return a ^ b;
    case Op::Shl: return b >= 64 ? 0 : a << b;
    case Op::Shr: return b >= 64 ? 0 : a >> b;
    case Op::Eq: return a == b;
    case Op::Ne: return a != b;
    case Op::Lt: return a < b;
    case Op::Le: return a <= b;
    case Op::Gt: return a > b;
    case Op::Ge: return a >= b;
    default: return 0;
    }
}

CompiledExpr compile_expr(const hdl::ExprPtr& e, const Resolver& resolve) {
    CompiledExpr out;
    if (e) out.add(e, resolve);
    return out;
}

} // namespace tleak::sim
