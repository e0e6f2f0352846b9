#include "tleak/sim/vcd.hpp"

#include <algorithm>
#include <sstream>

#include "tleak/common/error.hpp"
#include "tleak/hdl/parser.hpp"

namespace tleak::sim {

namespace {

std::string id_code(std::size_t n) {
    std::string s;
    do {
        s += static_cast<char>(33 + n % 94);
        n /= 94;
    } while (n);
    return s;
}

std::string binary(std::uint64_t v, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int i = 0; i < width; ++i)
        if ((v >> i) & 1) s[static_cast<std::size_t>(width - 1 - i)] = '1';
    return s;
}

void emit_value(std::ostringstream& os, std::uint64_t v, int width, const std::string& id) {
    if (width == 1)
        os << (v & 1) << id << '\n';
    else
        os << 'b' << binary(v, width) << ' ' << id << '\n';
}

std::string leaf_name(const std::string& path) {
    const auto dot = path.rfind('.');
    return dot == std::string::npos ? path : path.substr(dot + 1);
}

} // namespace

std::string write_vcd(const TraceBundle& b) {
    std::ostringstream os;
    nlohmann::json meta = {{"run", b.run_id},
                           {"start", b.start_cycle},
                           {"hitMaxCycles", b.hit_max_cycles},
                           {"stimulus", stimulus_to_json(b.stimulus)}};
    nlohmann::json modules = nlohmann::json::object();
    for (const auto& inst : b.instances) modules[inst.path] = inst.module;
    meta["modules"] = modules;
    os << "$comment tleak " << meta.dump() << " $end\n";
    os << "$timescale 1ns $end\n";

    struct Var {
        const SignalTrace* sig;
        std::string id;
    };
    std::vector<Var> vars;
    std::size_t next = 0;
    const std::string clk_id = id_code(next++);

    // Instances are in pre-order, so scopes nest by path prefix.
    std::vector<std::string> open;
    for (std::size_t i = 0; i < b.instances.size(); ++i) {
        const auto& inst = b.instances[i];
        while (!open.empty() && inst.path.rfind(open.back() + ".", 0) != 0) {
            os << "$upscope $end\n";
            open.pop_back();
        }
        os << "$scope module " << leaf_name(inst.path) << " $end\n";
        open.push_back(inst.path);
        if (i == 0) os << "$var wire 1 " << clk_id << " clk $end\n";
        for (const auto& s : inst.signals) {
            vars.push_back({&s, id_code(next++)});
            os << "$var " << (s.width == 1 ? "wire" : "reg") << ' ' << s.width << ' ' << vars.back().id << ' '
               << s.name << " $end\n";
        }
    }
    while (!open.empty()) {
        os << "$upscope $end\n";
        open.pop_back();
    }
    os << "$enddefinitions $end\n";

    for (std::size_t c = 0; c < b.cycles; ++c) {
        os << '#' << 10 * c << '\n';
        if (c == 0) os << "$dumpvars\n";
        os << '0' << clk_id << '\n';
        for (const auto& v : vars) {
            const std::uint64_t x = v.sig->values[c];
            if (c == 0 || v.sig->values[c - 1] != x) emit_value(os, x, v.sig->width, v.id);
        }
        if (c == 0) os << "$end\n";
        os << '#' << 10 * c + 5 << '\n' << '1' << clk_id << '\n';
    }
    return os.str();
}

namespace {

struct VarRef {
    std::size_t instance;
    std::size_t signal;
};

class VcdReader {
public:
    VcdReader(const std::string& text, const std::map<std::string, std::string>& scope_map,
              const hdl::DesignHierarchy* design)
        : in_(text), scope_map_(scope_map), design_(design) {}

    VcdLoadResult run() {
        header();
        body();
        finish();
        return std::move(out_);
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::VcdParseError, "line " + std::to_string(line_) + ": " + msg,
                    SourceLoc{"<vcd>", line_, 1});
    }

    bool next(std::string& tok) {
        while (true) {
            if (pos_ < words_.size()) {
                tok = words_[pos_++];
                return true;
            }
            std::string l;
            if (!std::getline(in_, l)) return false;
            ++line_;
            words_.clear();
            pos_ = 0;
            std::istringstream ls(l);
            std::string w;
            while (ls >> w) words_.push_back(w);
        }
    }

    std::string rest_until_end() {
        std::string tok, text;
        while (true) {
            if (!next(tok)) fail("unterminated section");
            if (tok == "$end") return text;
            if (!text.empty()) text += ' ';
            text += tok;
        }
    }

    std::string scope_path() const {
        std::string p;
        for (const auto& s : scopes_) p += (p.empty() ? "" : ".") + s;
        return p;
    }

    std::size_t instance_for(const std::string& vcd_scope) {
        std::string path = vcd_scope;
        if (auto it = scope_map_.find(vcd_scope); it != scope_map_.end()) path = it->second;
        if (auto it = inst_index_.find(path); it != inst_index_.end()) return it->second;
        std::string module;
        if (design_) {
            const auto* info = design_->find_instance(path);
            if (!info) throw Error(ErrorKind::UnknownScope, "VCD scope '" + vcd_scope + "' is not an instance of the design");
            module = info->module;
        } else if (auto it = meta_modules_.find(path); it != meta_modules_.end()) {
            module = it->second;
        } else {
            module = leaf_name(path);
        }
        inst_index_[path] = out_.bundle.instances.size();
        out_.bundle.instances.push_back(InstanceTrace{path, module, {}});
        return out_.bundle.instances.size() - 1;
    }

    void header() {
        std::string tok;
        while (next(tok)) {
            if (tok == "$enddefinitions") {
                rest_until_end();
                return;
            }
            if (tok == "$comment") {
                const std::string text = rest_until_end();
                if (text.rfind("tleak ", 0) == 0) {
                    try {
                        const auto meta = nlohmann::json::parse(text.substr(6));
                        out_.bundle.run_id = meta.value("run", "");
                        out_.bundle.start_cycle = meta.value("start", std::size_t{0});
                        out_.bundle.hit_max_cycles = meta.value("hitMaxCycles", false);
                        if (meta.contains("stimulus")) out_.bundle.stimulus = stimulus_from_json(meta["stimulus"]);
                        if (meta.contains("modules"))
                            for (const auto& [k, v] : meta["modules"].items()) meta_modules_[k] = v.get<std::string>();
                    } catch (const nlohmann::json::exception& e) {
                        fail(std::string("bad metadata comment: ") + e.what());
                    }
                }
            } else if (tok == "$scope") {
                std::string kind, name;
                if (!next(kind) || !next(name)) fail("truncated $scope");
                rest_until_end();
                scopes_.push_back(name);
                instance_for(scope_path());
            } else if (tok == "$upscope") {
                rest_until_end();
                if (scopes_.empty()) fail("$upscope without open scope");
                scopes_.pop_back();
            } else if (tok == "$var") {
                std::string kind, width, id, name;
                if (!next(kind) || !next(width) || !next(id) || !next(name)) fail("truncated $var");
                std::string extra = rest_until_end();
                if (!extra.empty() && extra.front() == '[' && extra.find(':') == std::string::npos) name += extra;
                int w = 0;
                try {
                    w = std::stoi(width);
                } catch (...) {
                    fail("bad $var width '" + width + "'");
                }
                if (w < 1 || w > 64) fail("unsupported $var width " + width);
                if (scopes_.empty()) fail("$var outside any scope");
                if (name == "clk") {
                    if (clk_id_.empty()) clk_id_ = id;
                    continue;
                }
                const std::size_t inst = instance_for(scope_path());
                auto& sigs = out_.bundle.instances[inst].signals;
                sigs.push_back(SignalTrace{name, w, {}});
                ids_[id].push_back({inst, sigs.size() - 1});
            } else if (tok == "$timescale" || tok == "$date" || tok == "$version") {
                rest_until_end();
            } else {
                fail("unexpected '" + tok + "' in header");
            }
        }
        fail("missing $enddefinitions");
    }

    void apply(const std::string& id, std::uint64_t v) {
        auto it = ids_.find(id);
        if (it == ids_.end()) return;
        for (const auto& r : it->second) current_[r.instance][r.signal] = v;
    }

    void flush_timestamp() {
        if (clk_rose_) {
            for (std::size_t i = 0; i < current_.size(); ++i)
                for (std::size_t k = 0; k < current_[i].size(); ++k)
                    out_.bundle.instances[i].signals[k].values.push_back(current_[i][k]);
            ++out_.bundle.cycles;
        }
        for (const auto& [id, v] : pending_) apply(id, v);
        pending_.clear();
        clk_rose_ = false;
    }

    std::uint64_t parse_bits(const std::string& bits, const std::string& id) {
        std::uint64_t v = 0;
        bool xz = false;
        for (char c : bits) {
            v <<= 1;
            if (c == '1') {
                v |= 1;
            } else if (c == 'x' || c == 'X' || c == 'z' || c == 'Z') {
                xz = true;
            } else if (c != '0') {
                fail("bad value character '" + std::string(1, c) + "'");
            }
        }
        if (xz) {
            auto it = ids_.find(id);
            if (it != ids_.end())
                for (const auto& r : it->second)
                    ++out_.xz_warnings[out_.bundle.instances[r.instance].path + "." +
                                       out_.bundle.instances[r.instance].signals[r.signal].name];
        }
        return v;
    }

    void change(const std::string& id, std::uint64_t v) {
        if (id == clk_id_) {
            if (clk_ == 0 && v == 1) clk_rose_ = true;
            clk_ = v & 1;
            return;
        }
        if (!ids_.count(id)) fail("value change for undeclared identifier '" + id + "'");
        pending_.emplace_back(id, v);
    }

    void body() {
        if (clk_id_.empty()) throw Error(ErrorKind::ClockNotFound, "no 'clk' variable in VCD header");
        current_.resize(out_.bundle.instances.size());
        for (std::size_t i = 0; i < current_.size(); ++i)
            current_[i].assign(out_.bundle.instances[i].signals.size(), 0);
        std::string tok;
        while (next(tok)) {
            if (tok[0] == '#') {
                flush_timestamp();
            } else if (tok == "$dumpvars" || tok == "$dumpall" || tok == "$dumpon" || tok == "$dumpoff" ||
                       tok == "$end") {
                continue;
            } else if (tok == "$comment") {
                rest_until_end();
            } else if (tok[0] == 'b' || tok[0] == 'B') {
                std::string id;
                if (!next(id)) fail("vector change without identifier");
                change(id, parse_bits(tok.substr(1), id));
            } else if (tok[0] == 'r' || tok[0] == 'R') {
                fail("real values are not supported");
            } else if (std::string("01xXzZ").find(tok[0]) != std::string::npos) {
                const std::string id = tok.substr(1);
                if (id.empty()) fail("scalar change without identifier");
                change(id, parse_bits(tok.substr(0, 1), id));
            } else {
                fail("unexpected token '" + tok + "'");
            }
        }
        flush_timestamp();
    }

    void finish() {
        for (auto& inst : out_.bundle.instances)
            std::sort(inst.signals.begin(), inst.signals.end(),
                      [](const SignalTrace& a, const SignalTrace& b) { return a.name < b.name; });
        if (!design_) return;
        for (const auto& info : design_->instances) {
            const auto* trace = out_.bundle.find(info.path);
            for (const hdl::SignalDecl* d : design_->module(info.module).all_signals()) {
                if (d->name == "clk") continue;
                const int n = d->array_size > 0 ? d->array_size : 1;
                for (int k = 0; k < n; ++k) {
                    const std::string name = d->array_size > 0 ? d->name + "[" + std::to_string(k) + "]" : d->name;
                    if (!trace || !trace->find(name)) out_.missing_signals.push_back(info.path + "." + name);
                }
            }
        }
    }

    std::istringstream in_;
    const std::map<std::string, std::string>& scope_map_;
    const hdl::DesignHierarchy* design_;
    std::vector<std::string> words_;
    std::size_t pos_ = 0;
    int line_ = 0;
    std::vector<std::string> scopes_;
    std::map<std::string, std::size_t> inst_index_;
    std::map<std::string, std::string> meta_modules_;
    std::map<std::string, std::vector<VarRef>> ids_;
    std::string clk_id_;
    std::uint64_t clk_ = 0;
    bool clk_rose_ = false;
    std::vector<std::vector<std::uint64_t>> current_;
    std::vector<std::pair<std::string, std::uint64_t>> pending_;
    VcdLoadResult out_;
};

} // namespace

VcdLoadResult load_vcd(const std::string& text, const std::map<std::string, std::string>& scope_map,
                       const hdl::DesignHierarchy* design) {
    return VcdReader(text, scope_map, design).run();
}

VcdLoadResult load_vcd_file(const std::string& path, const std::map<std::string, std::string>& scope_map,
                            const hdl::DesignHierarchy* design) {
    VcdLoadResult r = load_vcd(hdl::read_file(path), scope_map, design);
    if (r.bundle.run_id.empty()) r.bundle.run_id = path;
    return r;
}

} // namespace tleak::sim
