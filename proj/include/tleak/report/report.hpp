#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tleak/fuzz/fuzz.hpp"
#include "tleak/meg/meg.hpp"

namespace tleak::report {

struct CoverageRow {
    std::string module;
    std::size_t total = 0;
    std::size_t covered = 0;
    double percent = 0;
    bool truncated = false;

    friend bool operator==(const CoverageRow&, const CoverageRow&) = default;
};

// One row per distinct diagnosis: the leaking instance, its module, the
// culprit source lines and the signals of both phases.
struct TimingRow {
    std::string vulnerability;
    std::string module;
    std::vector<int> lines;
    std::vector<std::string> phase1;
    std::vector<std::string> phase2;
    std::size_t occurrences = 0;

    friend bool operator==(const TimingRow&, const TimingRow&) = default;
};

struct CampaignSummary {
    std::string design;
    // Simulated clock cycles, so reports do not depend on host speed.
    std::size_t duration = 0;
    std::size_t seeds = 0;
    std::size_t mutants = 0;
    std::size_t findings = 0;
    std::size_t diagnoses = 0;
    std::string stop_reason;
    std::vector<CoverageRow> coverage;
    std::vector<TimingRow> timing;

    friend bool operator==(const CampaignSummary&, const CampaignSummary&) = default;
};

CampaignSummary summarize(const fuzz::CampaignResult& r);
nlohmann::json summary_to_json(const CampaignSummary& s);
CampaignSummary summary_from_json(const nlohmann::json& j);

enum class Format { Text, Json, Csv, Dot };

Format format_from_string(const std::string& s);

// Quotes `file:line` from disk. Returns nullopt when the file is missing, its
// hash differs from the recorded one, or the line is out of range.
std::optional<std::string> quote_line(const std::string& file, int line, const std::vector<hdl::SourceFile>& sources);

std::string render_text(const fuzz::CampaignResult& r);
std::string findings_csv(const fuzz::CampaignResult& r);

// Writes the artifacts of each requested format into `dir` and returns the
// written paths. Dot needs `megs`. Throws Error{IoError}.
std::vector<std::string> render(const fuzz::CampaignResult& r, const std::set<Format>& formats, const std::string& dir,
                                const std::map<std::string, meg::Meg>* megs = nullptr);

void write_file(const std::string& path, const std::string& content);

} // namespace tleak::report
