#include "tleak/hdl/printer.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

namespace tleak::hdl {

namespace {

std::string render_number(const Expr& e) {
    if (e.literal_width == 0) return std::to_string(e.value);
    std::ostringstream ss;
    ss << e.literal_width << "'h" << std::hex << e.value;
    return ss.str();
}

void indent(std::ostringstream& out, int depth) {
    for (int i = 0; i < depth; ++i) out << "  ";
}

void print_stmts(std::ostringstream& out, const StmtList& body, int depth);

void print_block(std::ostringstream& out, const StmtList& body, int depth) {
    out << "begin\n";
    print_stmts(out, body, depth + 1);
    indent(out, depth);
    out << "end";
}

void print_stmts(std::ostringstream& out, const StmtList& body, int depth) {
    for (const auto& s : body) {
        indent(out, depth);
        switch (s.kind) {
        case StmtKind::Assign:
            out << render_lvalue(s.dest) << (s.style == AssignStyle::Blocking ? " = " : " <= ")
                << render_expr(s.expr) << ";\n";
            break;
        case StmtKind::If:
            out << "if (" << render_expr(s.cond) << ") ";
            print_block(out, s.then_body, depth);
            if (!s.else_body.empty()) {
                out << " else ";
                print_block(out, s.else_body, depth);
            }
            out << "\n";
            break;
        case StmtKind::Case:
            out << "case (" << render_expr(s.subject) << ")\n";
            for (const auto& arm : s.arms) {
                indent(out, depth + 1);
                for (std::size_t i = 0; i < arm.labels.size(); ++i)
                    out << (i ? ", " : "") << render_expr(arm.labels[i]);
                out << ": ";
                print_block(out, arm.body, depth + 1);
                out << "\n";
            }
            if (s.has_default) {
                indent(out, depth + 1);
                out << "default: ";
                print_block(out, s.default_body, depth + 1);
                out << "\n";
            }
            indent(out, depth);
            out << "endcase\n";
            break;
        }
    }
}

std::string decl_prefix(const SignalDecl& d) {
    std::string out(to_string(d.kind));
    if (d.is_reg) out += " reg";
    if (d.width > 1) out += " [" + std::to_string(d.width - 1) + ":0]";
    return out;
}

nlohmann::json loc_json(const SourceLoc& loc) {
    return {{"file", loc.file}, {"line", loc.line}, {"col", loc.column}};
}

nlohmann::json signal_json(const SignalDecl& d, bool with_locs) {
    nlohmann::json j = {{"name", d.name}, {"kind", std::string(to_string(d.kind))}, {"width", d.width}};
    if (d.array_size) j["arraySize"] = d.array_size;
    if (d.is_reg) j["reg"] = true;
    if (with_locs) j["loc"] = loc_json(d.loc);
    return j;
}

nlohmann::json stmts_json(const StmtList& body, bool with_locs);

nlohmann::json stmt_json(const Stmt& s, bool with_locs) {
    nlohmann::json j;
    switch (s.kind) {
    case StmtKind::Assign:
        j = {{"kind", s.style == AssignStyle::Blocking ? "blocking" : "nonblocking"},
             {"dest", render_lvalue(s.dest)},
             {"expr", render_expr(s.expr)},
             {"assignId", s.assign_id}};
        break;
    case StmtKind::If:
        j = {{"kind", "if"},
             {"cond", render_expr(s.cond)},
             {"then", stmts_json(s.then_body, with_locs)},
             {"else", stmts_json(s.else_body, with_locs)},
             {"branchId", s.branch_id}};
        break;
    case StmtKind::Case: {
        nlohmann::json arms = nlohmann::json::array();
        for (const auto& arm : s.arms) {
            nlohmann::json labels = nlohmann::json::array();
            for (const auto& l : arm.labels) labels.push_back(render_expr(l));
            arms.push_back({{"labels", labels}, {"body", stmts_json(arm.body, with_locs)}});
        }
        j = {{"kind", "case"}, {"subject", render_expr(s.subject)}, {"arms", arms}, {"branchId", s.branch_id}};
        if (s.has_default) j["default"] = stmts_json(s.default_body, with_locs);
        break;
    }
    }
    if (with_locs) j["loc"] = loc_json(s.loc);
    return j;
}

nlohmann::json stmts_json(const StmtList& body, bool with_locs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : body) arr.push_back(stmt_json(s, with_locs));
    return arr;
}

} // namespace

std::string render_expr(const ExprPtr& e) {
    if (!e) return "";
    switch (e->kind) {
    case ExprKind::Number: return render_number(*e);
    case ExprKind::Ident: return e->name;
    case ExprKind::Index: return e->name + "[" + render_expr(e->operands[0]) + "]";
    case ExprKind::Slice: return e->name + "[" + std::to_string(e->msb) + ":" + std::to_string(e->lsb) + "]";
    case ExprKind::Unary: return std::string(e->uop == UnaryOp::BitNot ? "~" : "!") + render_expr(e->operands[0]);
    case ExprKind::Binary:
        return "(" + render_expr(e->operands[0]) + " " + std::string(to_string(e->bop)) + " " +
               render_expr(e->operands[1]) + ")";
    case ExprKind::Ternary:
        return "(" + render_expr(e->operands[0]) + " ? " + render_expr(e->operands[1]) + " : " +
               render_expr(e->operands[2]) + ")";
    }
    return "";
}

std::string render_lvalue(const LValue& lv) {
    std::string out = lv.name;
    if (lv.index) out += "[" + render_expr(lv.index) + "]";
    if (lv.slice) out += "[" + std::to_string(lv.slice->first) + ":" + std::to_string(lv.slice->second) + "]";
    return out;
}

std::string print_module(const ModuleAst& m) {
    std::ostringstream out;
    for (const auto& tag : m.tags) {
        out << "//@tag " << tag.name;
        for (const auto& [sig, v] : tag.drives) out << " " << sig << "=" << v;
        out << "\n";
    }
    if (!m.data_inputs.empty()) {
        out << "//@data";
        for (const auto& d : m.data_inputs) out << " " << d;
        out << "\n";
    }
    out << "module " << m.name << "(";
    for (std::size_t i = 0; i < m.ports.size(); ++i) {
        out << (i ? ", " : "") << decl_prefix(m.ports[i]) << " " << m.ports[i].name;
    }
    out << ");\n";
    for (const auto& d : m.decls) {
        out << "  " << decl_prefix(d) << " " << d.name;
        if (d.array_size) out << " [0:" << d.array_size - 1 << "]";
        out << ";\n";
    }
    // Items and instances in source order so that assignment ids survive a
    // print/parse round trip.
    std::vector<std::pair<SourceLoc, std::function<void()>>> parts;
    for (const auto& item : m.items) {
        if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
            parts.emplace_back(a->loc, [&out, a] {
                out << "  assign " << render_lvalue(a->dest) << " = " << render_expr(a->expr) << ";\n";
            });
        } else {
            const auto* b = &std::get<AlwaysBlock>(item);
            parts.emplace_back(b->loc, [&out, b] {
                out << "  always " << (b->trigger == AlwaysTrigger::PosedgeClock ? "@(posedge clk) " : "@(*) ");
                print_block(out, b->body, 1);
                out << "\n";
            });
        }
    }
    for (const auto& inst : m.instances) {
        parts.emplace_back(inst.loc, [&out, &inst] {
            out << "  " << inst.module_name << " " << inst.instance_name << "(";
            for (std::size_t i = 0; i < inst.port_map.size(); ++i) {
                const auto& pb = inst.port_map[i];
                out << (i ? ", " : "") << "." << pb.formal << "(" << render_expr(pb.actual) << ")";
            }
            out << ");\n";
        });
    }
    std::stable_sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
        return std::tie(x.first.line, x.first.column) < std::tie(y.first.line, y.first.column);
    });
    for (const auto& [loc, print] : parts) print();
    out << "endmodule\n";
    return out.str();
}

nlohmann::json module_to_json(const ModuleAst& m, bool with_locs) {
    nlohmann::json j;
    j["name"] = m.name;
    if (with_locs) j["loc"] = loc_json(m.loc);
    j["ports"] = nlohmann::json::array();
    for (const auto& p : m.ports) j["ports"].push_back(signal_json(p, with_locs));
    j["decls"] = nlohmann::json::array();
    for (const auto& d : m.decls) j["decls"].push_back(signal_json(d, with_locs));
    j["items"] = nlohmann::json::array();
    for (const auto& item : m.items) {
        if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
            nlohmann::json ij = {{"kind", "assign"},
                                 {"dest", render_lvalue(a->dest)},
                                 {"expr", render_expr(a->expr)},
                                 {"assignId", a->assign_id}};
            if (with_locs) ij["loc"] = loc_json(a->loc);
            j["items"].push_back(ij);
        } else {
            const auto& b = std::get<AlwaysBlock>(item);
            nlohmann::json ij = {{"kind", "always"},
                                 {"trigger", b.trigger == AlwaysTrigger::PosedgeClock ? "posedge clk" : "*"},
                                 {"body", stmts_json(b.body, with_locs)}};
            if (with_locs) ij["loc"] = loc_json(b.loc);
            j["items"].push_back(ij);
        }
    }
    j["instances"] = nlohmann::json::array();
    for (const auto& inst : m.instances) {
        nlohmann::json ports = nlohmann::json::array();
        for (const auto& pb : inst.port_map) ports.push_back({{"formal", pb.formal}, {"actual", render_expr(pb.actual)}});
        nlohmann::json ij = {{"name", inst.instance_name}, {"module", inst.module_name}, {"ports", ports}};
        if (with_locs) ij["loc"] = loc_json(inst.loc);
        j["instances"].push_back(ij);
    }
    nlohmann::json tags = nlohmann::json::array();
    for (const auto& t : m.tags) {
        nlohmann::json drives = nlohmann::json::object();
        for (const auto& [sig, v] : t.drives) drives[sig] = v;
        tags.push_back({{"name", t.name}, {"drives", drives}});
    }
    j["tags"] = tags;
    j["data"] = m.data_inputs;
    return j;
}

nlohmann::json design_to_json(const DesignHierarchy& h, bool with_locs) {
    nlohmann::json j;
    j["schemaVersion"] = 1;
    j["top"] = h.top;
    j["modules"] = nlohmann::json::array();
    for (const auto& [name, m] : h.modules) j["modules"].push_back(module_to_json(m, with_locs));
    j["instances"] = nlohmann::json::array();
    for (const auto& i : h.instances)
        j["instances"].push_back({{"path", i.path}, {"module", i.module}, {"level", i.level}});
    return j;
}

} // namespace tleak::hdl
