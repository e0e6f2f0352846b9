#include "tleak/sim/stimulus.hpp"

#include <algorithm>
#include <fstream>

#include "tleak/common/error.hpp"
#include "tleak/hdl/parser.hpp"
#include "tleak/sim/eval.hpp"

namespace tleak::sim {

std::vector<std::string> Stimulus::tags() const {
    std::vector<std::string> out;
    for (const auto& s : steps) out.push_back(s.tag);
    return out;
}

Alphabet Alphabet::of(const hdl::ModuleAst& top) {
    Alphabet a;
    for (const auto& t : top.tags) a.tags.push_back(t.name);
    for (const auto& d : top.data_inputs) {
        const auto* decl = top.find_signal(d);
        a.data.emplace_back(d, decl ? decl->width : 1);
    }
    return a;
}

int Alphabet::width_of(const std::string& input) const {
    for (const auto& [n, w] : data)
        if (n == input) return w;
    return 0;
}

nlohmann::json stimulus_to_json(const Stimulus& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& st : s.steps) {
        nlohmann::json data = nlohmann::json::object();
        for (const auto& [k, v] : st.data) data[k] = v;
        arr.push_back({{"tag", st.tag}, {"data", data}, {"hold", st.hold}});
    }
    return arr;
}

Stimulus stimulus_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidStimulus, "stimulus must be a JSON array of steps");
    Stimulus s;
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("tag") || !item["tag"].is_string())
            throw Error(ErrorKind::InvalidStimulus, "each step needs a string 'tag'");
        StimulusStep st;
        st.tag = item["tag"].get<std::string>();
        if (item.contains("data")) {
            if (!item["data"].is_object()) throw Error(ErrorKind::InvalidStimulus, "'data' must be an object");
            for (const auto& [k, v] : item["data"].items()) {
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
                    throw Error(ErrorKind::InvalidStimulus, "data value for '" + k + "' must be a non-negative integer");
                st.data[k] = v.get<std::uint64_t>();
            }
        }
        if (item.contains("hold")) {
            if (!item["hold"].is_number_integer() || item["hold"].get<std::int64_t>() < 1)
                throw Error(ErrorKind::InvalidStimulus, "'hold' must be a positive integer");
            st.hold = item["hold"].get<int>();
        }
        s.steps.push_back(std::move(st));
    }
    return s;
}

Stimulus load_stimulus(const std::string& path) {
    const std::string text = hdl::read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidStimulus, path + ": " + e.what());
    }
    return stimulus_from_json(j);
}

void save_stimulus(const Stimulus& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
    out << stimulus_to_json(s).dump(2) << "\n";
}

void validate_stimulus(const Stimulus& s, const hdl::ModuleAst& top) {
    const Alphabet a = Alphabet::of(top);
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        const auto& st = s.steps[i];
        const std::string where = "step " + std::to_string(i) + ": ";
        if (st.hold < 1) throw Error(ErrorKind::InvalidStimulus, where + "hold must be at least 1");
        if (std::find(a.tags.begin(), a.tags.end(), st.tag) == a.tags.end())
            throw Error(ErrorKind::InvalidStimulus, where + "unknown tag '" + st.tag + "'");
        for (const auto& [k, v] : st.data) {
            const int w = a.width_of(k);
            if (w == 0) throw Error(ErrorKind::InvalidStimulus, where + "'" + k + "' is not a data input");
            if ((v & ~mask(w)) != 0)
                throw Error(ErrorKind::InvalidStimulus,
                            where + "value " + std::to_string(v) + " does not fit " + std::to_string(w) + "-bit '" + k + "'");
        }
    }
}

std::string stimulus_str(const Stimulus& s) {
    std::string out;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        if (i) out += "; ";
        out += s.steps[i].tag;
        if (!s.steps[i].data.empty()) {
            out += "(";
            bool first = true;
            for (const auto& [k, v] : s.steps[i].data) {
                if (!first) out += ", ";
                first = false;
                out += k + "=" + std::to_string(v);
            }
            out += ")";
        }
    }
    return out;
}

} // namespace tleak::sim
