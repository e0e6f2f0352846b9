#include "tleak/leakage/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "tleak/common/error.hpp"
#include "tleak/hdl/hierarchy.hpp"
#include "tleak/hdl/parser.hpp"
#include "tleak/kernels/trace_kernels.hpp"
#include "tleak/sim/eval.hpp"

namespace tleak::leakage {

ExecutionTime measure(const sim::TraceBundle& bundle, const std::string& instance) {
    const sim::InstanceTrace& it = bundle.at(instance);
    ExecutionTime t;
    t.instance = instance;
    t.start_cycle = bundle.start_cycle;
    std::size_t last = kernels::npos;
    for (const auto& s : it.signals) {
        const std::size_t c = kernels::last_change(s.values.data(), s.values.size(), bundle.start_cycle);
        if (c != kernels::npos && (last == kernels::npos || c > last)) last = c;
    }
    if (last != kernels::npos) {
        t.last_toggle = last;
        t.cycles = last - t.start_cycle + 1;
    }
    return t;
}

std::vector<LeakageFinding> analyze(const std::vector<RunPair>& pairs, const hdl::DesignHierarchy& h,
                                    const AnalyzeOptions& options) {
    const auto levels = hdl::levelize(h);
    std::vector<LeakageFinding> out;
    std::set<std::tuple<std::string, RunRef, RunRef>> seen;
    for (const auto& p : pairs) {
        const auto& sa = p.a->stimulus;
        const auto& sb = p.b->stimulus;
        if (sa.steps.size() != sb.steps.size() || sa.tags() != sb.tags())
            throw Error(ErrorKind::StructuralMismatch, "runs " + p.ref_a.str() + " and " + p.ref_b.str() +
                                                           " differ in structure (" + sim::stimulus_str(sa) +
                                                           " vs " + sim::stimulus_str(sb) + ")");
        RunRef ra = p.ref_a, rb = p.ref_b;
        const sim::TraceBundle* ba = p.a;
        const sim::TraceBundle* bb = p.b;
        if (rb < ra) {
            std::swap(ra, rb);
            std::swap(ba, bb);
        }
        std::vector<std::string> fired;
        for (const auto& group : levels) {
            for (const auto& path : group) {
                const std::size_t ta = measure(*ba, path).cycles;
                const std::size_t tb = measure(*bb, path).cycles;
                const std::size_t delta = ta > tb ? ta - tb : tb - ta;
                if (delta == 0 || delta < options.min_delta) continue;
                if (!seen.insert({path, ra, rb}).second) continue;
                const auto& info = h.instance(path);
                LeakageFinding f;
                f.instance = path;
                f.module = info.module;
                f.level = info.level;
                f.run_a = ra;
                f.run_b = rb;
                f.time_a = ta;
                f.time_b = tb;
                f.delta = delta;
                f.first_leaky_level = std::none_of(fired.begin(), fired.end(), [&](const std::string& d) {
                    return hdl::is_strict_descendant(d, path);
                });
                fired.push_back(path);
                out.push_back(std::move(f));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const LeakageFinding& x, const LeakageFinding& y) {
        return std::tie(x.run_a, x.run_b, y.level, x.instance) < std::tie(y.run_a, y.run_b, x.level, y.instance);
    });
    return out;
}

double exact_median(std::vector<std::size_t> s) {
    if (s.empty()) throw Error(ErrorKind::EmptyGroup, "median of an empty sample");
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    if (n % 2) return static_cast<double>(s[n / 2]);
    return (static_cast<double>(s[n / 2 - 1]) + static_cast<double>(s[n / 2])) / 2.0;
}

std::vector<TimingDistribution> distributions(const std::vector<const sim::TraceBundle*>& bundles,
                                              const std::string& instance, const GroupFn& group_of,
                                              const std::vector<std::string>& groups) {
    std::map<std::string, std::vector<std::size_t>> samples;
    for (const auto& g : groups) samples[g];
    for (const auto* b : bundles) samples[group_of(b->stimulus)].push_back(measure(*b, instance).cycles);
    std::vector<TimingDistribution> out;
    for (auto& [key, s] : samples) {
        if (s.empty()) throw Error(ErrorKind::EmptyGroup, "group '" + key + "' has no samples");
        TimingDistribution d;
        d.instance = instance;
        d.group = key;
        d.median = exact_median(s);
        for (auto v : s) d.max_deviation = std::max(d.max_deviation, std::fabs(static_cast<double>(v) - d.median));
        d.samples = std::move(s);
        out.push_back(std::move(d));
    }
    return out;
}

Classifier parse_classifier(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0)
        throw Error(ErrorKind::ConfigError, "classifier must look like name:expr, got '" + spec + "'");
    return Classifier{spec.substr(0, colon), hdl::parse_expression(spec.substr(colon + 1), "<classifier>")};
}

GroupFn classify_by(const std::vector<Classifier>& classifiers) {
    return [classifiers](const sim::Stimulus& s) -> std::string {
        std::map<std::string, int> index;
        std::vector<std::uint64_t> slots;
        if (!s.steps.empty())
            for (const auto& [k, v] : s.steps.front().data) {
                index[k] = static_cast<int>(slots.size());
                slots.push_back(v);
            }
        slots.push_back(0);
        const int zero = static_cast<int>(slots.size()) - 1;
        for (const auto& c : classifiers) {
            // Fields absent from the step read as 0, like undriven inputs.
            auto compiled = sim::compile_expr(c.expr, [&](const std::string& n) -> std::optional<sim::SlotRef> {
                auto it = index.find(n);
                return sim::SlotRef{it == index.end() ? zero : it->second, 1, 64, false};
            });
            if (compiled.eval(slots.data())) return c.name;
        }
        return "other";
    };
}

nlohmann::json finding_to_json(const LeakageFinding& f) {
    return {{"instance", f.instance},
            {"module", f.module},
            {"level", f.level},
            {"runA", f.run_a.str()},
            {"runB", f.run_b.str()},
            {"seedA", f.run_a.seed},
            {"mutantA", f.run_a.mutant},
            {"seedB", f.run_b.seed},
            {"mutantB", f.run_b.mutant},
            {"timeA", f.time_a},
            {"timeB", f.time_b},
            {"delta", f.delta},
            {"firstLeakyLevel", f.first_leaky_level}};
}

LeakageFinding finding_from_json(const nlohmann::json& j) {
    LeakageFinding f;
    f.instance = j.at("instance").get<std::string>();
    f.module = j.at("module").get<std::string>();
    f.level = j.at("level").get<int>();
    f.run_a = {j.at("seedA").get<std::string>(), j.at("mutantA").get<std::string>()};
    f.run_b = {j.at("seedB").get<std::string>(), j.at("mutantB").get<std::string>()};
    f.time_a = j.at("timeA").get<std::size_t>();
    f.time_b = j.at("timeB").get<std::size_t>();
    f.delta = j.at("delta").get<std::size_t>();
    f.first_leaky_level = j.at("firstLeakyLevel").get<bool>();
    return f;
}

nlohmann::json distribution_to_json(const TimingDistribution& d) {
    return {{"instance", d.instance},
            {"group", d.group},
            {"samples", d.samples},
            {"median", d.median},
            {"maxDeviation", d.max_deviation}};
}

std::string distributions_csv(const std::vector<TimingDistribution>& ds) {
    std::ostringstream os;
    os << "instance,group,count,median,max_deviation,min,max\n";
    for (const auto& d : ds) {
        const auto [lo, hi] = std::minmax_element(d.samples.begin(), d.samples.end());
        os << d.instance << ',' << d.group << ',' << d.samples.size() << ',' << d.median << ',' << d.max_deviation
           << ',' << *lo << ',' << *hi << '\n';
    }
    return os.str();
}

} // namespace tleak::leakage
