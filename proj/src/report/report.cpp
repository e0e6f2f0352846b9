#include "tleak/report/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tleak/common/error.hpp"
#include "tleak/common/hash.hpp"
#include "tleak/hdl/parser.hpp"

namespace tleak::report {

using nlohmann::json;
namespace fs = std::filesystem;

CampaignSummary summarize(const fuzz::CampaignResult& r) {
    CampaignSummary s;
    s.design = r.design;
    s.duration = r.simulated_cycles;
    s.seeds = r.seeds.size();
    s.mutants = r.mutants_simulated;
    s.findings = r.findings.size();
    s.diagnoses = r.diagnoses.size();
    s.stop_reason = r.stop_reason;
    for (const auto& [name, m] : r.coverage.modules) {
        const double pct = m.total ? 100.0 * static_cast<double>(m.covered) / static_cast<double>(m.total) : 0.0;
        s.coverage.push_back({name, m.total, m.covered, pct, m.truncated});
    }
    for (const auto& rec : r.diagnoses) {
        TimingRow row;
        row.vulnerability = rec.diagnosis.instance;
        row.module = rec.diagnosis.module;
        std::set<int> lines;
        for (const auto& c : rec.diagnosis.culprits)
            for (const auto& loc : c.locs) lines.insert(loc.line);
        row.lines.assign(lines.begin(), lines.end());
        row.phase1 = rec.diagnosis.instigators;
        row.phase2 = rec.diagnosis.culprit_signals();
        row.occurrences = rec.occurrences;
        s.timing.push_back(std::move(row));
    }
    return s;
}

json summary_to_json(const CampaignSummary& s) {
    json cov = json::array();
    for (const auto& c : s.coverage)
        cov.push_back({{"module", c.module},
                       {"totalPaths", c.total},
                       {"coveredPaths", c.covered},
                       {"percent", c.percent},
                       {"truncated", c.truncated}});
    json timing = json::array();
    for (const auto& t : s.timing)
        timing.push_back({{"vulnerability", t.vulnerability},
                          {"module", t.module},
                          {"lines", t.lines},
                          {"phase1", t.phase1},
                          {"phase2", t.phase2},
                          {"occurrences", t.occurrences}});
    return {{"schemaVersion", 1},    {"design", s.design},       {"duration", s.duration},
            {"seeds", s.seeds},      {"mutants", s.mutants},     {"findings", s.findings},
            {"diagnoses", s.diagnoses}, {"stopReason", s.stop_reason}, {"coverage", cov},
            {"timing", timing}};
}

CampaignSummary summary_from_json(const json& j) {
    CampaignSummary s;
    s.design = j.at("design").get<std::string>();
    s.duration = j.at("duration").get<std::size_t>();
    s.seeds = j.at("seeds").get<std::size_t>();
    s.mutants = j.at("mutants").get<std::size_t>();
    s.findings = j.at("findings").get<std::size_t>();
    s.diagnoses = j.at("diagnoses").get<std::size_t>();
    s.stop_reason = j.at("stopReason").get<std::string>();
    for (const auto& c : j.at("coverage"))
        s.coverage.push_back({c.at("module").get<std::string>(), c.at("totalPaths").get<std::size_t>(),
                              c.at("coveredPaths").get<std::size_t>(), c.at("percent").get<double>(),
                              c.at("truncated").get<bool>()});
    for (const auto& t : j.at("timing"))
        s.timing.push_back({t.at("vulnerability").get<std::string>(), t.at("module").get<std::string>(),
                            t.at("lines").get<std::vector<int>>(), t.at("phase1").get<std::vector<std::string>>(),
                            t.at("phase2").get<std::vector<std::string>>(), t.at("occurrences").get<std::size_t>()});
    return s;
}

Format format_from_string(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "dot") return Format::Dot;
    throw Error(ErrorKind::ConfigError, "unknown report format '" + s + "'");
}

std::optional<std::string> quote_line(const std::string& file, int line, const std::vector<hdl::SourceFile>& sources) {
    auto src = std::find_if(sources.begin(), sources.end(), [&](const hdl::SourceFile& f) { return f.path == file; });
    if (src == sources.end() || line < 1) return std::nullopt;
    std::string text;
    try {
        text = hdl::read_file(file);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (fnv1a(text) != src->hash) return std::nullopt;
    std::istringstream in(text);
    std::string l;
    for (int n = 1; std::getline(in, l); ++n)
        if (n == line) return l;
    return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& xs, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::string render_text(const fuzz::CampaignResult& r) {
    const CampaignSummary s = summarize(r);
    std::ostringstream out;
    out << "design: " << s.design << "\n";
    out << "stop: " << s.stop_reason << " after " << r.rounds << " round(s)\n";
    out << "duration: " << s.duration << " simulated cycles\n";
    out << "seeds: " << s.seeds << "  mutants: " << s.mutants << "  findings: " << s.findings
        << "  diagnoses: " << s.diagnoses << "\n";
    if (!r.failed_runs.empty()) out << "failed runs: " << r.failed_runs.size() << "\n";

    out << "\ncoverage\n";
    for (const auto& c : s.coverage)
        out << "  " << c.module << "  " << c.covered << "/" << c.total << "  " << fixed(c.percent, 1) << "%"
            << (c.truncated ? "  (truncated)" : "") << "\n";
    const std::size_t total = r.coverage.total();
    out << "  overall  " << r.coverage.covered() << "/" << total << "  " << fixed(r.coverage.overall_percent(), 1)
        << "%\n";

    std::map<std::string, std::pair<std::size_t, std::size_t>> by_instance;
    for (const auto& f : r.findings) {
        auto& [n, worst] = by_instance[f.instance + " (" + f.module + ", level " + std::to_string(f.level) + ")"];
        ++n;
        worst = std::max(worst, f.delta);
    }
    out << "\nfindings\n";
    if (by_instance.empty()) out << "  none\n";
    for (const auto& [k, v] : by_instance)
        out << "  " << k << ": " << v.first << " pair(s), max delta " << v.second << " cycles\n";

    out << "\ndiagnoses\n";
    if (r.diagnoses.empty()) out << "  none\n";
    for (std::size_t i = 0; i < r.diagnoses.size(); ++i) {
        const auto& rec = r.diagnoses[i];
        const auto& d = rec.diagnosis;
        out << "  [" << i + 1 << "] " << d.instance << " (" << d.module << ")  seen " << rec.occurrences
            << "x  first " << rec.run_a.str() << " vs " << rec.run_b.str() << "\n";
        out << "      divergence at cycle " << d.divergence_cycle << (d.length_mismatch ? " (length mismatch)" : "")
            << "\n";
        out << "      phase 1: " << join(d.instigators) << "\n";
        out << "      phase 2: " << join(d.culprit_signals()) << "\n";
        std::set<SourceLoc> locs;
        for (const auto& c : d.culprits)
            for (const auto& loc : c.locs) locs.insert({loc.file, loc.line, 0});
        for (const auto& loc : locs) {
            auto text = quote_line(loc.file, loc.line, r.sources);
            out << "      " << loc.file << ":" << loc.line << "\n";
            if (text) out << "        " << loc.line << " | " << *text << "\n";
            else out << "        " << loc.line << " | (source unavailable or changed)\n";
        }
    }
    return out.str();
}

std::string findings_csv(const fuzz::CampaignResult& r) {
    std::string out = "instance,module,level,run_a,run_b,time_a,time_b,delta,first_leaky_level\n";
    for (const auto& f : r.findings)
        out += f.instance + "," + f.module + "," + std::to_string(f.level) + "," + f.run_a.str() + "," +
               f.run_b.str() + "," + std::to_string(f.time_a) + "," + std::to_string(f.time_b) + "," +
               std::to_string(f.delta) + "," + (f.first_leaky_level ? "1" : "0") + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::IoError, "cannot write " + path);
    f << content;
    if (!f) throw Error(ErrorKind::IoError, "write failed: " + path);
}

std::vector<std::string> render(const fuzz::CampaignResult& r, const std::set<Format>& formats, const std::string& dir,
                                const std::map<std::string, meg::Meg>* megs) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(dir) / name).string();
        write_file(path, content);
        written.push_back(path);
    };
    if (formats.count(Format::Text)) emit("summary.txt", render_text(r));
    if (formats.count(Format::Json)) {
        emit("campaign.json", fuzz::campaign_to_json(r).dump(2) + "\n");
        emit("summary.json", summary_to_json(summarize(r)).dump(2) + "\n");
        json findings = json::array();
        for (const auto& f : r.findings) findings.push_back(leakage::finding_to_json(f));
        emit("findings.json", json{{"schemaVersion", 1}, {"findings", findings}}.dump(2) + "\n");
        json diags = json::array();
        for (const auto& d : r.diagnoses) diags.push_back(fuzz::diagnosis_record_to_json(d));
        emit("diagnoses.json", json{{"schemaVersion", 1}, {"diagnoses", diags}}.dump(2) + "\n");
        emit("coverage.json", coverage::coverage_to_json(r.coverage).dump(2) + "\n");
        fs::create_directories(fs::path(dir) / "seeds", ec);
        if (ec) throw Error(ErrorKind::IoError, "cannot create seeds directory: " + ec.message());
        for (const auto& s : r.seeds) emit("seeds/" + s.id + ".json", sim::stimulus_to_json(s.stimulus).dump(2) + "\n");
    }
    if (formats.count(Format::Csv)) {
        emit("coverage.csv", coverage::coverage_csv(r.coverage));
        emit("findings.csv", findings_csv(r));
    }
    if (formats.count(Format::Dot)) {
        if (!megs) throw Error(ErrorKind::ConfigError, "DOT output needs the design graphs");
        for (const auto& [name, g] : *megs) emit(name + ".dot", meg::export_dot(g));
    }
    return written;
}

} // namespace tleak::report
