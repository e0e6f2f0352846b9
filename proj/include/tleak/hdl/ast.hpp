#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tleak/common/source_loc.hpp"

namespace tleak::hdl {

enum class SignalKind { Input, Output, Wire, Reg };

struct SignalDecl {
    std::string name;
    SignalKind kind = SignalKind::Wire;
    int width = 1;
    // 0 for scalars/vectors, N for `reg [w-1:0] name [0:N-1]`.
    int array_size = 0;
    // `output reg`: the port is also a storage element.
    bool is_reg = false;
    SourceLoc loc;

    bool storage() const { return kind == SignalKind::Reg || is_reg; }
    bool is_port() const { return kind == SignalKind::Input || kind == SignalKind::Output; }
};

enum class ExprKind { Number, Ident, Unary, Binary, Ternary, Index, Slice };
enum class UnaryOp { BitNot, LogNot };
enum class BinaryOp { Add, Sub, And, Or, Xor, Shl, Shr, Eq, Ne, Lt, Le, Gt, Ge, LogAnd, LogOr };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree node. Index covers both bit-selects and 1-D array
// element reads; which one it is depends on the referenced declaration.
struct Expr {
    ExprKind kind = ExprKind::Number;
    SourceLoc loc;
    std::uint64_t value = 0;
    int literal_width = 0; // 0 when unsized
    std::string name;      // Ident, Index, Slice
    UnaryOp uop = UnaryOp::BitNot;
    BinaryOp bop = BinaryOp::Add;
    std::vector<ExprPtr> operands;
    int msb = 0; // Slice
    int lsb = 0;
};

struct LValue {
    std::string name;
    ExprPtr index; // bit-select or array element, may be null
    std::optional<std::pair<int, int>> slice;
    SourceLoc loc;
};

enum class AssignStyle { Blocking, NonBlocking };

struct Stmt;
using StmtList = std::vector<Stmt>;

struct CaseArm {
    std::vector<ExprPtr> labels;
    StmtList body;
    SourceLoc loc;
};

enum class StmtKind { Assign, If, Case };

struct Stmt {
    StmtKind kind = StmtKind::Assign;
    SourceLoc loc;

    // Assign
    LValue dest;
    ExprPtr expr;
    AssignStyle style = AssignStyle::Blocking;
    int assign_id = -1;

    // If
    ExprPtr cond;
    StmtList then_body;
    StmtList else_body;

    // Case
    ExprPtr subject;
    std::vector<CaseArm> arms;
    StmtList default_body;
    bool has_default = false;

    // If/Case: module-unique branch id. Arms: If 0 = then, 1 = else; Case
    // i = arms[i], arms.size() = default.
    int branch_id = -1;
};

struct ContinuousAssign {
    LValue dest;
    ExprPtr expr;
    SourceLoc loc;
    int assign_id = -1;
};

enum class AlwaysTrigger { PosedgeClock, Combinational };

struct AlwaysBlock {
    AlwaysTrigger trigger = AlwaysTrigger::Combinational;
    StmtList body;
    SourceLoc loc;
};

using ModuleItem = std::variant<ContinuousAssign, AlwaysBlock>;

struct PortBinding {
    std::string formal;
    ExprPtr actual; // may be null for an explicitly unconnected port `.x()`
    SourceLoc loc;
    int assign_id = -1;
};

struct InstanceDecl {
    std::string instance_name;
    std::string module_name;
    std::vector<PortBinding> port_map;
    SourceLoc loc;
};

// Stimulus alphabet declared with `//@tag` and `//@data` pragmas in the top
// module. A tag names a structural step kind; its assignments drive inputs on
// the first cycle of the step.
struct TagDef {
    std::string name;
    std::vector<std::pair<std::string, std::uint64_t>> drives;
    SourceLoc loc;
};

struct ModuleAst {
    std::string name;
    SourceLoc loc;
    int end_line = 0;
    std::vector<SignalDecl> ports;
    std::vector<SignalDecl> decls;
    std::vector<ModuleItem> items;
    std::vector<InstanceDecl> instances;
    std::vector<TagDef> tags;
    std::vector<std::string> data_inputs;
    int assign_count = 0;
    int branch_count = 0;

    const SignalDecl* find_signal(const std::string& name) const;
    const InstanceDecl* find_instance(const std::string& name) const;
    bool has_clock() const { return find_signal("clk") != nullptr; }
    // Ports followed by internal declarations, in source order.
    std::vector<const SignalDecl*> all_signals() const;
};

struct InstanceInfo {
    std::string path;
    std::string module;
    std::string parent; // empty for the top
    std::string instance_name;
    std::vector<std::string> children;
    int level = 1;
};

struct SourceFile {
    std::string path;
    std::uint64_t hash = 0;
};

struct DesignHierarchy {
    std::map<std::string, ModuleAst> modules;
    std::string top;
    // Pre-order walk of the instance tree, top first.
    std::vector<InstanceInfo> instances;
    std::vector<SourceFile> sources;

    const ModuleAst& module(const std::string& name) const;
    const ModuleAst& top_module() const { return module(top); }
    const InstanceInfo& instance(const std::string& path) const;
    const InstanceInfo* find_instance(const std::string& path) const;
    int max_level() const;
};

std::string_view to_string(SignalKind kind);
std::string_view to_string(BinaryOp op);

// Helpers shared by the MEG builder, the simulator, and the oracles.
void collect_identifiers(const ExprPtr& e, std::vector<std::string>& out);

} // namespace tleak::hdl
