#include "tleak/hdl/ast.hpp"

#include <algorithm>

#include "tleak/common/error.hpp"

namespace tleak::hdl {

const SignalDecl* ModuleAst::find_signal(const std::string& n) const {
    for (const auto& p : ports)
        if (p.name == n) return &p;
    for (const auto& d : decls)
        if (d.name == n) return &d;
    return nullptr;
}

const InstanceDecl* ModuleAst::find_instance(const std::string& n) const {
    for (const auto& i : instances)
        if (i.instance_name == n) return &i;
    return nullptr;
}

std::vector<const SignalDecl*> ModuleAst::all_signals() const {
    std::vector<const SignalDecl*> out;
    out.reserve(ports.size() + decls.size());
    for (const auto& p : ports) out.push_back(&p);
    for (const auto& d : decls) out.push_back(&d);
    return out;
}

const ModuleAst& DesignHierarchy::module(const std::string& name) const {
    auto it = modules.find(name);
    if (it == modules.end()) throw Error(ErrorKind::UnresolvedIdentifier, "module '" + name + "'");
    return it->second;
}

const InstanceInfo* DesignHierarchy::find_instance(const std::string& path) const {
    for (const auto& i : instances)
        if (i.path == path) return &i;
    return nullptr;
}

const InstanceInfo& DesignHierarchy::instance(const std::string& path) const {
    if (const auto* i = find_instance(path)) return *i;
    throw Error(ErrorKind::UnknownInstance, "'" + path + "'");
}

int DesignHierarchy::max_level() const {
    int lvl = 0;
    for (const auto& i : instances) lvl = std::max(lvl, i.level);
    return lvl;
}

std::string_view to_string(SignalKind kind) {
    switch (kind) {
    case SignalKind::Input: return "input";
    case SignalKind::Output: return "output";
    case SignalKind::Wire: return "wire";
    case SignalKind::Reg: return "reg";
    }
    return "?";
}

std::string_view to_string(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
    case BinaryOp::Xor: return "^";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::LogAnd: return "&&";
    case BinaryOp::LogOr: return "||";
    }
    return "?";
}

void collect_identifiers(const ExprPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    switch (e->kind) {
    case ExprKind::Number: return;
    case ExprKind::Ident:
    case ExprKind::Slice: out.push_back(e->name); return;
    case ExprKind::Index:
        out.push_back(e->name);
        collect_identifiers(e->operands[0], out);
        return;
    default:
        for (const auto& op : e->operands) collect_identifiers(op, out);
    }
}

} // namespace tleak::hdl
