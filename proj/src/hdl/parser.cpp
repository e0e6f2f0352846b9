#include "tleak/hdl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "tleak/common/error.hpp"
#include "tleak/common/hash.hpp"

namespace tleak::hdl {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::uint64_t value = 0;
    int width = 0;
    SourceLoc loc;
};

struct Pragma {
    int line = 0;
    std::string text;
    SourceLoc loc;
};

class Lexer {
public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run(std::vector<Pragma>& pragmas) {
        std::vector<Token> out;
        for (;;) {
            skip_space(pragmas);
            Token t;
            t.loc = here();
            if (pos_ >= text_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            const char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Tok::Ident;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                        text_[pos_] == '$')) {
                    t.text += text_[pos_];
                    advance();
                }
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
                lex_number(t);
            } else {
                lex_punct(t);
            }
            out.push_back(std::move(t));
        }
    }

private:
    SourceLoc here() const { return SourceLoc{file_, line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space(std::vector<Pragma>& pragmas) {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                const SourceLoc loc = here();
                std::string body;
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    body += text_[pos_];
                    advance();
                }
                if (body.rfind("//@", 0) == 0) pragmas.push_back(Pragma{loc.line, body.substr(3), loc});
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                const SourceLoc loc = here();
                advance();
                advance();
                bool closed = false;
                while (pos_ + 1 < text_.size()) {
                    if (text_[pos_] == '*' && text_[pos_ + 1] == '/') {
                        advance();
                        advance();
                        closed = true;
                        break;
                    }
                    advance();
                }
                if (!closed) throw Error(ErrorKind::SyntaxError, "unterminated block comment", loc);
            } else {
                return;
            }
        }
    }

    static int digit_value(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return 99;
    }

    void lex_number(Token& t) {
        t.kind = Tok::Number;
        std::string lead;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            if (text_[pos_] != '_') lead += text_[pos_];
            advance();
        }
        if (pos_ < text_.size() && text_[pos_] == '\'') {
            advance();
            if (pos_ >= text_.size()) throw Error(ErrorKind::SyntaxError, "truncated literal", t.loc);
            const char base_ch = static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
            int base = 0;
            switch (base_ch) {
            case 'b': base = 2; break;
            case 'h': base = 16; break;
            case 'd': base = 10; break;
            case 'o': base = 8; break;
            default: throw Error(ErrorKind::SyntaxError, "bad literal base", t.loc);
            }
            advance();
            std::string digits;
            while (pos_ < text_.size() && (std::isxdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                if (text_[pos_] != '_') digits += text_[pos_];
                advance();
            }
            if (digits.empty()) throw Error(ErrorKind::SyntaxError, "literal has no digits", t.loc);
            t.value = parse_digits(digits, base, t.loc);
            if (!lead.empty()) {
                t.width = std::stoi(lead);
                if (t.width < 1 || t.width > 64)
                    throw Error(ErrorKind::Unsupported, "literal width must be 1..64", t.loc);
                if (t.width < 64) t.value &= (std::uint64_t{1} << t.width) - 1;
            }
            t.text = (lead.empty() ? "" : lead) + "'" + base_ch + digits;
        } else {
            t.value = parse_digits(lead, 10, t.loc);
            t.text = lead;
        }
    }

    static std::uint64_t parse_digits(const std::string& digits, int base, const SourceLoc& loc) {
        std::uint64_t v = 0;
        for (char c : digits) {
            const int d = digit_value(c);
            if (d >= base) throw Error(ErrorKind::SyntaxError, std::string("bad digit '") + c + "'", loc);
            const unsigned __int128 next = static_cast<unsigned __int128>(v) * static_cast<unsigned>(base) + static_cast<unsigned>(d);
            if (next > ~std::uint64_t{0}) throw Error(ErrorKind::Unsupported, "literal exceeds 64 bits", loc);
            v = static_cast<std::uint64_t>(next);
        }
        return v;
    }

    void lex_punct(Token& t) {
        static const char* kTwo[] = {"==", "!=", "<=", ">=", "&&", "||", "<<", ">>"};
        t.kind = Tok::Punct;
        if (pos_ + 1 < text_.size()) {
            const std::string two = std::string(text_.substr(pos_, 2));
            for (const char* op : kTwo) {
                if (two == op) {
                    t.text = two;
                    advance();
                    advance();
                    return;
                }
            }
        }
        static const std::string kOne = "()[]{}:;,.=<>+-&|^~!?@#*";
        const char c = text_[pos_];
        if (kOne.find(c) == std::string::npos)
            throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'", t.loc);
        t.text = std::string(1, c);
        advance();
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::set<std::string>& unsupported_keywords() {
    static const std::set<std::string> k = {"parameter", "localparam", "generate", "endgenerate", "genvar",
                                            "integer",   "inout",      "negedge",  "function",    "task",
                                            "initial",   "tri",        "supply0",  "supply1",     "logic",
                                            "for",       "while",      "casez",    "casex",       "defparam"};
    return k;
}

const std::set<std::string>& keywords() {
    static const std::set<std::string> k = {"module", "endmodule", "input",   "output", "wire",    "reg",
                                            "assign", "always",    "posedge", "begin",  "end",     "if",
                                            "else",   "case",      "endcase", "default"};
    return k;
}

class Parser {
public:
    Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::vector<ModuleAst> modules() {
        std::vector<ModuleAst> out;
        while (!at_end()) {
            if (peek_ident("module")) {
                out.push_back(module());
            } else {
                fail("expected 'module'");
            }
        }
        return out;
    }

    ExprPtr standalone_expr() {
        ExprPtr e = expr();
        if (!at_end()) fail("trailing input after expression");
        return e;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        const std::size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    bool at_end() const { return peek().kind == Tok::End; }
    bool peek_ident(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
    bool peek_punct(std::string_view s) const { return peek().kind == Tok::Punct && peek().text == s; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw Error(ErrorKind::SyntaxError, msg + " (found " + found + ")", t.loc);
    }

    Token take() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    void expect_punct(std::string_view s) {
        if (!peek_punct(s)) fail("expected '" + std::string(s) + "'");
        take();
    }
    void expect_ident(std::string_view s) {
        if (!peek_ident(s)) fail("expected '" + std::string(s) + "'");
        take();
    }
    bool accept_punct(std::string_view s) {
        if (peek_punct(s)) {
            take();
            return true;
        }
        return false;
    }

    Token name() {
        if (peek().kind != Tok::Ident) fail("expected identifier");
        if (unsupported_keywords().count(peek().text))
            throw Error(ErrorKind::Unsupported, "'" + peek().text + "' is outside the supported subset", peek().loc);
        if (keywords().count(peek().text)) fail("expected identifier");
        return take();
    }

    void reject_unsupported() {
        if (peek().kind == Tok::Ident && unsupported_keywords().count(peek().text))
            throw Error(ErrorKind::Unsupported, "'" + peek().text + "' is outside the supported subset", peek().loc);
    }

    int range_width() {
        // '[' msb ':' 0 ']'
        const SourceLoc loc = peek().loc;
        expect_punct("[");
        if (peek().kind != Tok::Number) fail("expected constant msb");
        const auto msb = take().value;
        expect_punct(":");
        if (peek().kind != Tok::Number) fail("expected constant lsb");
        const auto lsb = take().value;
        expect_punct("]");
        if (lsb != 0) throw Error(ErrorKind::Unsupported, "ranges must be [msb:0]", loc);
        if (msb >= 64) throw Error(ErrorKind::Unsupported, "signals wider than 64 bits", loc);
        return static_cast<int>(msb) + 1;
    }

    int array_dim() {
        const SourceLoc loc = peek().loc;
        expect_punct("[");
        if (peek().kind != Tok::Number) fail("expected constant array bound");
        const auto lo = take().value;
        expect_punct(":");
        if (peek().kind != Tok::Number) fail("expected constant array bound");
        const auto hi = take().value;
        expect_punct("]");
        if (lo != 0 || hi < lo) throw Error(ErrorKind::Unsupported, "arrays must be declared [0:N-1]", loc);
        if (peek_punct("[")) throw Error(ErrorKind::Unsupported, "multi-dimensional arrays", peek().loc);
        if (hi >= 4096) throw Error(ErrorKind::Unsupported, "arrays larger than 4096 elements", loc);
        return static_cast<int>(hi) + 1;
    }

    ModuleAst module() {
        ModuleAst m;
        m.loc = peek().loc;
        expect_ident("module");
        m.name = name().text;
        if (peek_punct("#")) throw Error(ErrorKind::Unsupported, "parametrized modules", peek().loc);
        expect_punct("(");
        if (!peek_punct(")")) {
            do {
                m.ports.push_back(port_decl());
            } while (accept_punct(","));
        }
        expect_punct(")");
        expect_punct(";");
        while (!peek_ident("endmodule")) {
            if (at_end()) fail("missing 'endmodule'");
            item(m);
        }
        m.end_line = take().loc.line;
        m_ = nullptr;
        return m;
    }

    SignalDecl port_decl() {
        SignalDecl d;
        d.loc = peek().loc;
        reject_unsupported();
        if (peek_ident("input")) {
            d.kind = SignalKind::Input;
        } else if (peek_ident("output")) {
            d.kind = SignalKind::Output;
        } else {
            fail("expected 'input' or 'output' (ANSI port list)");
        }
        take();
        reject_unsupported();
        if (peek_ident("wire")) {
            take();
        } else if (peek_ident("reg")) {
            if (d.kind == SignalKind::Input) fail("inputs cannot be 'reg'");
            take();
            d.is_reg = true;
        }
        if (peek_punct("[")) d.width = range_width();
        const Token n = name();
        d.name = n.text;
        d.loc = n.loc;
        return d;
    }

    void item(ModuleAst& m) {
        m_ = &m;
        reject_unsupported();
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail("expected module item");
        if (t.text == "input" || t.text == "output")
            throw Error(ErrorKind::Unsupported, "non-ANSI port declarations", t.loc);
        if (t.text == "wire" || t.text == "reg") {
            const bool is_reg = t.text == "reg";
            take();
            int width = 1;
            if (peek_punct("[")) width = range_width();
            do {
                SignalDecl d;
                const Token n = name();
                d.name = n.text;
                d.loc = n.loc;
                d.width = width;
                d.kind = is_reg ? SignalKind::Reg : SignalKind::Wire;
                if (peek_punct("[")) {
                    if (!is_reg) throw Error(ErrorKind::Unsupported, "wire arrays", peek().loc);
                    d.array_size = array_dim();
                }
                if (peek_punct("="))
                    throw Error(ErrorKind::Unsupported, "declaration initializers", peek().loc);
                m.decls.push_back(d);
            } while (accept_punct(","));
            expect_punct(";");
            return;
        }
        if (t.text == "assign") {
            ContinuousAssign a;
            a.loc = take().loc;
            a.dest = lvalue();
            expect_punct("=");
            a.expr = expr();
            expect_punct(";");
            a.assign_id = m.assign_count++;
            m.items.emplace_back(std::move(a));
            return;
        }
        if (t.text == "always") {
            AlwaysBlock b;
            b.loc = take().loc;
            expect_punct("@");
            if (accept_punct("*")) {
                b.trigger = AlwaysTrigger::Combinational;
            } else {
                expect_punct("(");
                if (accept_punct("*")) {
                    b.trigger = AlwaysTrigger::Combinational;
                } else {
                    reject_unsupported();
                    expect_ident("posedge");
                    const Token clk = name();
                    if (clk.text != "clk")
                        throw Error(ErrorKind::Unsupported, "the only clock is the input named 'clk'", clk.loc);
                    if (peek_ident("or") || peek_punct(","))
                        throw Error(ErrorKind::Unsupported, "multiple clock/reset events", peek().loc);
                    b.trigger = AlwaysTrigger::PosedgeClock;
                }
                expect_punct(")");
            }
            b.body = stmt_as_list();
            m.items.emplace_back(std::move(b));
            return;
        }
        if (keywords().count(t.text)) fail("unexpected keyword");
        // Module instantiation: <module> <instance> ( .formal(actual), ... );
        InstanceDecl inst;
        inst.loc = t.loc;
        inst.module_name = name().text;
        if (peek_punct("#")) throw Error(ErrorKind::Unsupported, "parameter overrides", peek().loc);
        inst.instance_name = name().text;
        expect_punct("(");
        if (!peek_punct(")")) {
            do {
                PortBinding pb;
                pb.loc = peek().loc;
                if (!peek_punct("."))
                    throw Error(ErrorKind::Unsupported, "positional port connections", peek().loc);
                take();
                pb.formal = name().text;
                expect_punct("(");
                if (!peek_punct(")")) pb.actual = expr();
                expect_punct(")");
                pb.assign_id = m.assign_count++;
                inst.port_map.push_back(std::move(pb));
            } while (accept_punct(","));
        }
        expect_punct(")");
        expect_punct(";");
        m.instances.push_back(std::move(inst));
    }

    StmtList stmt_as_list() {
        StmtList out;
        if (peek_ident("begin")) {
            take();
            while (!peek_ident("end")) {
                if (at_end()) fail("missing 'end'");
                stmt_into(out);
            }
            take();
        } else {
            stmt_into(out);
        }
        return out;
    }

    void stmt_into(StmtList& out) {
        reject_unsupported();
        if (peek_ident("begin")) {
            StmtList inner = stmt_as_list();
            for (auto& s : inner) out.push_back(std::move(s));
            return;
        }
        Stmt s;
        s.loc = peek().loc;
        if (peek_ident("if")) {
            take();
            s.kind = StmtKind::If;
            expect_punct("(");
            s.cond = expr();
            expect_punct(")");
            s.branch_id = m_->branch_count++;
            s.then_body = stmt_as_list();
            if (peek_ident("else")) {
                take();
                s.else_body = stmt_as_list();
            }
            out.push_back(std::move(s));
            return;
        }
        if (peek_ident("case")) {
            take();
            s.kind = StmtKind::Case;
            expect_punct("(");
            s.subject = expr();
            expect_punct(")");
            s.branch_id = m_->branch_count++;
            while (!peek_ident("endcase")) {
                if (at_end()) fail("missing 'endcase'");
                if (peek_ident("default")) {
                    if (s.has_default) fail("duplicate default arm");
                    take();
                    accept_punct(":");
                    s.has_default = true;
                    s.default_body = stmt_as_list();
                    continue;
                }
                CaseArm arm;
                arm.loc = peek().loc;
                do {
                    arm.labels.push_back(expr());
                } while (accept_punct(","));
                expect_punct(":");
                arm.body = stmt_as_list();
                s.arms.push_back(std::move(arm));
            }
            take();
            out.push_back(std::move(s));
            return;
        }
        s.kind = StmtKind::Assign;
        s.dest = lvalue();
        if (accept_punct("=")) {
            s.style = AssignStyle::Blocking;
        } else if (accept_punct("<=")) {
            s.style = AssignStyle::NonBlocking;
        } else {
            fail("expected '=' or '<='");
        }
        s.expr = expr();
        expect_punct(";");
        s.assign_id = m_->assign_count++;
        out.push_back(std::move(s));
    }

    LValue lvalue() {
        LValue lv;
        const Token n = name();
        lv.name = n.text;
        lv.loc = n.loc;
        if (peek_punct("[")) {
            take();
            ExprPtr first = expr();
            if (accept_punct(":")) {
                if (first->kind != ExprKind::Number) fail("part-select bounds must be constants");
                if (peek().kind != Tok::Number) fail("part-select bounds must be constants");
                const auto lsb = take().value;
                if (first->value < lsb) fail("part-select must be [msb:lsb]");
                lv.slice = std::make_pair(static_cast<int>(first->value), static_cast<int>(lsb));
            } else {
                lv.index = first;
            }
            expect_punct("]");
            if (peek_punct("[")) throw Error(ErrorKind::Unsupported, "nested selects", peek().loc);
        }
        return lv;
    }

    // Precedence climbing, loosest first.
    ExprPtr expr() { return ternary(); }

    ExprPtr ternary() {
        ExprPtr c = binary(0);
        if (peek_punct("?")) {
            take();
            ExprPtr a = expr();
            expect_punct(":");
            ExprPtr b = ternary();
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Ternary;
            e->loc = c->loc;
            e->operands = {c, a, b};
            return e;
        }
        return c;
    }

    struct Level {
        std::vector<std::pair<std::string_view, BinaryOp>> ops;
    };

    static const std::vector<Level>& levels() {
        static const std::vector<Level> l = {
            {{{"||", BinaryOp::LogOr}}},
            {{{"&&", BinaryOp::LogAnd}}},
            {{{"|", BinaryOp::Or}}},
            {{{"^", BinaryOp::Xor}}},
            {{{"&", BinaryOp::And}}},
            {{{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}}},
            {{{"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}}},
            {{{"<<", BinaryOp::Shl}, {">>", BinaryOp::Shr}}},
            {{{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}},
        };
        return l;
    }

    ExprPtr binary(std::size_t level) {
        if (level >= levels().size()) return unary();
        ExprPtr lhs = binary(level + 1);
        for (;;) {
            if (peek().kind != Tok::Punct) return lhs;
            const auto& ops = levels()[level].ops;
            auto it = std::find_if(ops.begin(), ops.end(), [&](const auto& p) { return p.first == peek().text; });
            if (it == ops.end()) return lhs;
            take();
            ExprPtr rhs = binary(level + 1);
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Binary;
            e->bop = it->second;
            e->loc = lhs->loc;
            e->operands = {lhs, rhs};
            lhs = e;
        }
    }

    ExprPtr unary() {
        if (peek_punct("~") || peek_punct("!")) {
            const Token op = take();
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Unary;
            e->uop = op.text == "~" ? UnaryOp::BitNot : UnaryOp::LogNot;
            e->loc = op.loc;
            e->operands = {unary()};
            return e;
        }
        if (peek_punct("-")) throw Error(ErrorKind::Unsupported, "unary minus", peek().loc);
        if (peek_punct("{")) throw Error(ErrorKind::Unsupported, "concatenation", peek().loc);
        return primary();
    }

    ExprPtr primary() {
        if (peek().kind == Tok::Number) {
            const Token t = take();
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Number;
            e->value = t.value;
            e->literal_width = t.width;
            e->loc = t.loc;
            return e;
        }
        if (accept_punct("(")) {
            ExprPtr e = expr();
            expect_punct(")");
            return e;
        }
        const Token n = name();
        auto e = std::make_shared<Expr>();
        e->name = n.text;
        e->loc = n.loc;
        e->kind = ExprKind::Ident;
        if (peek_punct("[")) {
            take();
            ExprPtr first = expr();
            if (accept_punct(":")) {
                if (first->kind != ExprKind::Number || peek().kind != Tok::Number)
                    fail("part-select bounds must be constants");
                const auto lsb = take().value;
                if (first->value < lsb || first->value >= 64) fail("bad part-select bounds");
                e->kind = ExprKind::Slice;
                e->msb = static_cast<int>(first->value);
                e->lsb = static_cast<int>(lsb);
            } else {
                e->kind = ExprKind::Index;
                e->operands = {first};
            }
            expect_punct("]");
            if (peek_punct("[")) throw Error(ErrorKind::Unsupported, "nested selects", peek().loc);
        }
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ModuleAst* m_ = nullptr;
};

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

void apply_pragmas(std::vector<ModuleAst>& modules, const std::vector<Pragma>& pragmas) {
    for (const Pragma& p : pragmas) {
        // A pragma inside a module body belongs to that module; otherwise it
        // describes the next module that follows it in the file.
        ModuleAst* target = nullptr;
        for (auto& m : modules)
            if (m.loc.line <= p.line && p.line <= m.end_line) target = &m;
        for (auto& m : modules) {
            if (target) break;
            if (m.loc.line >= p.line) target = &m;
        }
        if (!target && !modules.empty()) target = &modules.back();
        if (!target) continue;
        const auto words = split_ws(p.text);
        if (words.empty()) continue;
        if (words[0] == "tag") {
            if (words.size() < 2) throw Error(ErrorKind::SyntaxError, "//@tag needs a name", p.loc);
            TagDef tag;
            tag.name = words[1];
            tag.loc = p.loc;
            for (std::size_t i = 2; i < words.size(); ++i) {
                const auto eq = words[i].find('=');
                if (eq == std::string::npos || eq == 0)
                    throw Error(ErrorKind::SyntaxError, "//@tag drive must be name=value", p.loc);
                std::vector<Pragma> none;
                Lexer lx(words[i].substr(eq + 1), p.loc.file);
                const auto toks = lx.run(none);
                if (toks.size() != 2 || toks[0].kind != Tok::Number)
                    throw Error(ErrorKind::SyntaxError, "//@tag drive value must be a literal", p.loc);
                tag.drives.emplace_back(words[i].substr(0, eq), toks[0].value);
            }
            target->tags.push_back(std::move(tag));
        } else if (words[0] == "data") {
            for (std::size_t i = 1; i < words.size(); ++i) target->data_inputs.push_back(words[i]);
        } else {
            throw Error(ErrorKind::SyntaxError, "unknown pragma '//@" + words[0] + "'", p.loc);
        }
    }
}

// --- resolution ---------------------------------------------------------

struct Scope {
    const ModuleAst& m;

    const SignalDecl& signal(const std::string& name, const SourceLoc& loc) const {
        const SignalDecl* d = m.find_signal(name);
        if (!d) throw Error(ErrorKind::UnresolvedIdentifier, "'" + name + "' in module '" + m.name + "'", loc);
        return *d;
    }

    void check_expr(const ExprPtr& e) const {
        if (!e) return;
        switch (e->kind) {
        case ExprKind::Number: return;
        case ExprKind::Ident: {
            const auto& d = signal(e->name, e->loc);
            if (d.array_size > 0)
                throw Error(ErrorKind::Unsupported, "whole-array reference to '" + e->name + "'", e->loc);
            if (d.name == "clk")
                throw Error(ErrorKind::Unsupported, "the clock cannot be used as data", e->loc);
            return;
        }
        case ExprKind::Index: {
            const auto& d = signal(e->name, e->loc);
            if (d.name == "clk") throw Error(ErrorKind::Unsupported, "the clock cannot be used as data", e->loc);
            check_expr(e->operands[0]);
            return;
        }
        case ExprKind::Slice: {
            const auto& d = signal(e->name, e->loc);
            if (d.array_size > 0) throw Error(ErrorKind::Unsupported, "part-select of an array", e->loc);
            if (e->msb >= d.width) throw Error(ErrorKind::SyntaxError, "part-select out of range", e->loc);
            return;
        }
        default:
            for (const auto& op : e->operands) check_expr(op);
        }
    }

    const SignalDecl& check_lvalue(const LValue& lv) const {
        const auto& d = signal(lv.name, lv.loc);
        if (d.kind == SignalKind::Input)
            throw Error(ErrorKind::PortMismatch, "assignment to input '" + lv.name + "'", lv.loc);
        if (d.array_size > 0 && !lv.index)
            throw Error(ErrorKind::Unsupported, "whole-array assignment to '" + lv.name + "'", lv.loc);
        if (lv.slice && (lv.slice->first >= d.width || d.array_size > 0))
            throw Error(ErrorKind::SyntaxError, "part-select out of range", lv.loc);
        check_expr(lv.index);
        return d;
    }

    void check_stmts(const StmtList& body, AlwaysTrigger trig) const {
        for (const auto& s : body) {
            switch (s.kind) {
            case StmtKind::Assign: {
                const auto& d = check_lvalue(s.dest);
                if (!d.storage())
                    throw Error(ErrorKind::PortMismatch,
                                "procedural assignment to non-reg '" + s.dest.name + "'", s.dest.loc);
                if (s.style == AssignStyle::NonBlocking && trig != AlwaysTrigger::PosedgeClock)
                    throw Error(ErrorKind::Unsupported, "non-blocking assignment outside a clocked block", s.loc);
                check_expr(s.expr);
                break;
            }
            case StmtKind::If:
                check_expr(s.cond);
                check_stmts(s.then_body, trig);
                check_stmts(s.else_body, trig);
                break;
            case StmtKind::Case:
                check_expr(s.subject);
                for (const auto& arm : s.arms) {
                    for (const auto& l : arm.labels) check_expr(l);
                    check_stmts(arm.body, trig);
                }
                check_stmts(s.default_body, trig);
                break;
            }
        }
    }
};

} // namespace

std::vector<ModuleAst> parse_modules(const SourceText& source) {
    std::vector<Pragma> pragmas;
    Lexer lexer(source.text, source.path);
    Parser parser(lexer.run(pragmas));
    auto modules = parser.modules();
    for (auto& m : modules) {
        // Declaration order matters for traces and JSON dumps; keep it, but
        // stamp the file name onto the module location.
        if (m.loc.file.empty()) m.loc.file = source.path;
    }
    apply_pragmas(modules, pragmas);
    return modules;
}

ExprPtr parse_expression(std::string_view text, const std::string& file) {
    std::vector<Pragma> pragmas;
    Lexer lexer(text, file);
    Parser parser(lexer.run(pragmas));
    return parser.standalone_expr();
}

void check_module(const ModuleAst& m, const std::map<std::string, ModuleAst>& modules) {
    std::set<std::string> names;
    for (const SignalDecl* d : m.all_signals()) {
        if (!names.insert(d->name).second)
            throw Error(ErrorKind::SyntaxError, "duplicate declaration of '" + d->name + "'", d->loc);
        if (d->width < 1 || d->width > 64)
            throw Error(ErrorKind::Unsupported, "signal width must be 1..64", d->loc);
    }
    for (const auto& inst : m.instances) {
        if (!names.insert(inst.instance_name).second)
            throw Error(ErrorKind::SyntaxError, "instance name '" + inst.instance_name + "' collides", inst.loc);
    }
    if (const SignalDecl* clk = m.find_signal("clk")) {
        if (clk->kind != SignalKind::Input || clk->width != 1)
            throw Error(ErrorKind::Unsupported, "'clk' must be a 1-bit input", clk->loc);
    }
    Scope scope{m};
    for (const auto& item : m.items) {
        if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
            const auto& d = scope.check_lvalue(a->dest);
            if (d.storage())
                throw Error(ErrorKind::PortMismatch, "continuous assignment to reg '" + a->dest.name + "'", a->loc);
            if (a->dest.index && d.array_size == 0)
                throw Error(ErrorKind::Unsupported, "bit-select target in continuous assignment", a->loc);
            scope.check_expr(a->expr);
        } else {
            const auto& b = std::get<AlwaysBlock>(item);
            if (b.trigger == AlwaysTrigger::PosedgeClock && !m.has_clock())
                throw Error(ErrorKind::UnresolvedIdentifier, "'clk' in module '" + m.name + "'", b.loc);
            scope.check_stmts(b.body, b.trigger);
        }
    }
    for (const auto& inst : m.instances) {
        auto it = modules.find(inst.module_name);
        if (it == modules.end())
            throw Error(ErrorKind::UnresolvedIdentifier, "module '" + inst.module_name + "'", inst.loc);
        const ModuleAst& child = it->second;
        std::set<std::string> bound;
        for (const auto& pb : inst.port_map) {
            const auto port = std::find_if(child.ports.begin(), child.ports.end(),
                                           [&](const SignalDecl& p) { return p.name == pb.formal; });
            if (port == child.ports.end())
                throw Error(ErrorKind::PortMismatch,
                            "module '" + child.name + "' has no port '" + pb.formal + "'", pb.loc);
            if (!bound.insert(pb.formal).second)
                throw Error(ErrorKind::PortMismatch, "port '" + pb.formal + "' bound twice", pb.loc);
            if (!pb.actual) continue;
            if (pb.formal == "clk") {
                if (pb.actual->kind != ExprKind::Ident || pb.actual->name != "clk")
                    throw Error(ErrorKind::Unsupported, "child 'clk' must connect to the parent clock", pb.loc);
                if (!m.has_clock())
                    throw Error(ErrorKind::UnresolvedIdentifier, "'clk' in module '" + m.name + "'", pb.loc);
                continue;
            }
            if (port->kind == SignalKind::Output) {
                if (pb.actual->kind != ExprKind::Ident)
                    throw Error(ErrorKind::PortMismatch, "output port '" + pb.formal + "' must bind to a signal",
                                pb.loc);
                const auto& d = scope.signal(pb.actual->name, pb.actual->loc);
                if (d.storage() || d.kind == SignalKind::Input || d.array_size > 0)
                    throw Error(ErrorKind::PortMismatch,
                                "output port '" + pb.formal + "' must drive a wire or non-reg output", pb.loc);
            } else {
                scope.check_expr(pb.actual);
            }
        }
    }
    for (const auto& tag : m.tags) {
        for (const auto& [sig, value] : tag.drives) {
            const SignalDecl* d = m.find_signal(sig);
            if (!d || d->kind != SignalKind::Input || sig == "clk")
                throw Error(ErrorKind::UnresolvedIdentifier, "//@tag drives unknown input '" + sig + "'", tag.loc);
            (void)value;
        }
    }
    for (const auto& sig : m.data_inputs) {
        const SignalDecl* d = m.find_signal(sig);
        if (!d || d->kind != SignalKind::Input || sig == "clk")
            throw Error(ErrorKind::UnresolvedIdentifier, "//@data names unknown input '" + sig + "'", m.loc);
    }
}

DesignHierarchy parse_design(const std::vector<SourceText>& sources, const std::optional<std::string>& top) {
    DesignHierarchy h;
    for (const auto& src : sources) {
        h.sources.push_back(SourceFile{src.path, fnv1a(src.text)});
        for (auto& m : parse_modules(src)) {
            if (h.modules.count(m.name))
                throw Error(ErrorKind::SyntaxError, "module '" + m.name + "' defined twice", m.loc);
            std::string name = m.name;
            h.modules.emplace(std::move(name), std::move(m));
        }
    }
    if (h.modules.empty()) throw Error(ErrorKind::SyntaxError, "no modules in design");
    for (const auto& [name, m] : h.modules) check_module(m, h.modules);

    // Recursion check over the module instantiation graph.
    std::map<std::string, int> color;
    std::vector<std::string> stack;
    std::function<void(const std::string&)> visit = [&](const std::string& name) {
        color[name] = 1;
        stack.push_back(name);
        for (const auto& inst : h.modules.at(name).instances) {
            const int c = color[inst.module_name];
            if (c == 1) {
                std::string cycle;
                auto it = std::find(stack.begin(), stack.end(), inst.module_name);
                for (; it != stack.end(); ++it) cycle += *it + " -> ";
                cycle += inst.module_name;
                throw Error(ErrorKind::RecursiveInstantiation, cycle, inst.loc);
            }
            if (c == 0) visit(inst.module_name);
        }
        stack.pop_back();
        color[name] = 2;
    };
    for (const auto& [name, m] : h.modules) {
        if (color[name] == 0) visit(name);
    }

    if (top) {
        if (!h.modules.count(*top)) throw Error(ErrorKind::UnresolvedIdentifier, "top module '" + *top + "'");
        h.top = *top;
    } else {
        std::set<std::string> instantiated;
        for (const auto& [name, m] : h.modules)
            for (const auto& inst : m.instances) instantiated.insert(inst.module_name);
        std::vector<std::string> roots;
        for (const auto& [name, m] : h.modules)
            if (!instantiated.count(name)) roots.push_back(name);
        if (roots.size() != 1) {
            std::string list;
            for (const auto& r : roots) list += (list.empty() ? "" : ", ") + r;
            throw Error(ErrorKind::ConfigError, "cannot infer top module among: " + list + " (use --top)");
        }
        h.top = roots.front();
    }

    std::function<void(const std::string&, const std::string&, const std::string&, const std::string&, int)> build =
        [&](const std::string& path, const std::string& module, const std::string& parent,
            const std::string& inst_name, int level) {
            const std::size_t idx = h.instances.size();
            h.instances.push_back(InstanceInfo{path, module, parent, inst_name, {}, level});
            for (const auto& inst : h.modules.at(module).instances) {
                const std::string child = path + "." + inst.instance_name;
                h.instances[idx].children.push_back(child);
                build(child, inst.module_name, path, inst.instance_name, level + 1);
            }
        };
    build(h.top, h.top, "", h.top, 1);
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DesignHierarchy load_design(const std::vector<std::string>& paths, const std::optional<std::string>& top) {
    std::vector<SourceText> sources;
    for (const auto& p : paths) sources.push_back(SourceText{p, read_file(p)});
    return parse_design(sources, top);
}

} // namespace tleak::hdl
