// tleak: command-line front end for the timing-leak toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "json.hpp"

#include "tleak/common/error.hpp"
#include "tleak/coverage/coverage.hpp"
#include "tleak/diag/diagnose.hpp"
#include "tleak/fuzz/fuzz.hpp"
#include "tleak/hdl/parser.hpp"
#include "tleak/hdl/printer.hpp"
#include "tleak/leakage/leakage.hpp"
#include "tleak/meg/meg.hpp"
#include "tleak/report/report.hpp"
#include "tleak/sim/simulator.hpp"
#include "tleak/sim/vcd.hpp"

using namespace tleak;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAnalysis = 2;
constexpr int kExitFinding = 3;

struct Common {
    std::vector<std::string> files;
    std::string top;
    std::string out;
};

struct SimFlags {
    int reset_cycles = 2;
    int quiescence = 8;
    std::size_t max_cycles = 10000;
    std::string init = "zero";
    std::uint64_t init_seed = 0;

    sim::SimOptions options() const {
        sim::SimOptions o;
        o.reset_cycles = reset_cycles;
        o.quiescence = quiescence;
        o.max_cycles = max_cycles;
        if (init == "random") o.init = sim::InitPolicy::random(init_seed);
        else if (init != "zero") throw Error(ErrorKind::ConfigError, "--init must be zero or random");
        return o;
    }
};

void add_sim_flags(CLI::App* app, SimFlags& f) {
    app->add_option("--reset-cycles", f.reset_cycles, "Reset cycles before the first step")->capture_default_str();
    app->add_option("--quiescence", f.quiescence, "Unchanged cycles that end a step")->capture_default_str();
    app->add_option("--max-cycles", f.max_cycles, "Simulation cycle cap")->capture_default_str();
    app->add_option("--init", f.init, "Register init policy: zero or random")->capture_default_str();
    app->add_option("--init-seed", f.init_seed, "Seed for random register init");
}

hdl::DesignHierarchy load(const Common& c) {
    return hdl::load_design(c.files, c.top.empty() ? std::nullopt : std::optional<std::string>(c.top));
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") std::cout << content;
    else report::write_file(path, content);
}

// "60s", "2m", "500ms", "1h" or plain seconds.
double parse_duration(const std::string& s) {
    static const std::regex re(R"(^\s*([0-9]*\.?[0-9]+)\s*(ms|s|m|h)?\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw Error(ErrorKind::ConfigError, "bad duration '" + s + "'");
    double v = std::stod(m[1].str());
    const std::string unit = m[2].str();
    if (unit == "ms") v /= 1000;
    else if (unit == "m") v *= 60;
    else if (unit == "h") v *= 3600;
    return v;
}

const meg::Meg& module_graph(const std::map<std::string, meg::Meg>& megs, const std::string& module) {
    auto it = megs.find(module);
    if (it == megs.end()) throw Error(ErrorKind::UnknownInstance, "no module named '" + module + "'");
    return it->second;
}

// Bundled design that defines `module`, for commands given only traces.
std::vector<std::string> bundled_design_for(const std::string& module) {
    const std::regex decl("\\bmodule\\s+" + module + "\\b");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(TLEAK_DESIGNS_DIR))
        if (e.path().extension() == ".hdl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        if (std::regex_search(hdl::read_file(f.string()), decl)) return {f.string()};
    throw Error(ErrorKind::ConfigError, "no design given and no bundled design defines '" + module + "'");
}

std::vector<sim::TraceBundle> load_runs(const std::vector<std::string>& vcds, const std::vector<std::string>& stimuli,
                                        const hdl::DesignHierarchy* h, const sim::SimOptions& opts) {
    std::vector<sim::TraceBundle> runs;
    for (const auto& v : vcds) {
        auto r = sim::load_vcd_file(v, {}, h);
        for (const auto& [sig, n] : r.xz_warnings)
            std::cerr << "warning: " << v << ": " << sig << " had " << n << " x/z value(s), read as 0\n";
        runs.push_back(std::move(r.bundle));
    }
    if (!stimuli.empty()) {
        if (!h) throw Error(ErrorKind::ConfigError, "--stimulus needs design files");
        sim::Simulator simulator(*h);
        for (const auto& s : stimuli) {
            sim::Stimulus st = sim::load_stimulus(s);
            sim::validate_stimulus(st, h->top_module());
            sim::SimOptions o = opts;
            o.run_id = fs::path(s).stem().string();
            runs.push_back(simulator.run(st, o).trace);
        }
    }
    return runs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"White-box timing side-channel analysis for RTL designs"};
    app.require_subcommand(1);
    app.allow_extras(false);
    app.fallthrough();

    unsigned jobs = 0;
    std::string config_path;
    bool quiet = false;
    app.add_option("-j,--jobs", jobs, "Worker threads (default: $TLEAK_JOBS, then the config file, then 1)");
    app.add_option("--config", config_path, "Campaign config JSON")->check(CLI::ExistingFile);
    app.add_flag("-q,--quiet", quiet, "Suppress progress messages");

    // parse
    Common parse_c;
    bool parse_print = false;
    bool parse_no_locs = false;
    auto* parse = app.add_subcommand("parse", "Parse and elaborate a design, dump the AST as JSON");
    parse->add_option("files", parse_c.files, "Design sources")->required()->check(CLI::ExistingFile);
    parse->add_option("--top", parse_c.top, "Top module");
    parse->add_option("-o,--out,--dump-ast", parse_c.out, "Output path (default stdout)");
    parse->add_flag("--print", parse_print, "Print canonical source instead of JSON");
    parse->add_flag("--no-locs", parse_no_locs, "Omit source locations from JSON");

    // graph
    Common graph_c;
    std::string graph_module, graph_dot, graph_json, graph_paths;
    std::size_t max_paths = meg::kDefaultMaxPaths, max_len = meg::kDefaultMaxLen;
    auto* graph = app.add_subcommand("graph", "Build micro-event graphs and enumerate micro-event paths");
    graph->add_option("files", graph_c.files, "Design sources")->required()->check(CLI::ExistingFile);
    graph->add_option("--top", graph_c.top, "Top module");
    graph->add_option("--module", graph_module, "Module to export (default: top)");
    graph->add_option("--dot", graph_dot, "Write the module graph as DOT");
    graph->add_option("--json", graph_json, "Write the module graph as JSON");
    graph->add_option("--paths", graph_paths, "Write enumerated paths, one per line");
    graph->add_option("--max-paths", max_paths, "Path enumeration cap")->capture_default_str();
    graph->add_option("--max-len", max_len, "Path length cap")->capture_default_str();

    // sim
    Common sim_c;
    SimFlags sim_f;
    std::string sim_stim, sim_vcd;
    auto* simc = app.add_subcommand("sim", "Simulate a stimulus, emit a VCD and per-instance execution times");
    simc->add_option("files", sim_c.files, "Design sources")->required()->check(CLI::ExistingFile);
    simc->add_option("--top", sim_c.top, "Top module");
    simc->add_option("-s,--stimulus", sim_stim, "Stimulus JSON")->required()->check(CLI::ExistingFile);
    simc->add_option("--vcd", sim_vcd, "Write the waveform here");
    simc->add_option("-o,--out", sim_c.out, "Write traces and times as JSON");
    add_sim_flags(simc, sim_f);

    // analyze
    Common an_c;
    SimFlags an_f;
    std::vector<std::string> an_vcds, an_stimuli, an_classes;
    std::string an_instance;
    std::size_t an_min_delta = 1;
    bool an_fail = false;
    auto* an = app.add_subcommand("analyze", "Compare execution times across runs that differ only in data");
    an->add_option("files", an_c.files, "Design sources")->required()->check(CLI::ExistingFile);
    an->add_option("--top", an_c.top, "Top module");
    an->add_option("--vcd", an_vcds, "Run waveforms")->check(CLI::ExistingFile);
    an->add_option("-s,--stimulus", an_stimuli, "Stimuli to simulate as runs")->check(CLI::ExistingFile);
    an->add_option("--classify", an_classes, "Group runs by name:expr over first-step data");
    an->add_option("--instance", an_instance, "Instance for timing distributions (default: top)");
    an->add_option("--min-delta", an_min_delta, "Smallest reported time difference")->capture_default_str();
    an->add_option("-o,--out", an_c.out, "Write findings JSON");
    an->add_flag("--fail-on-finding", an_fail, "Exit 3 when any finding is reported");
    add_sim_flags(an, an_f);

    // diagnose
    std::vector<std::string> dg_vcds, dg_design;
    std::string dg_module, dg_instance, dg_out, dg_top;
    auto* dg = app.add_subcommand("diagnose", "Localize the first divergence between two runs");
    dg->add_option("vcds", dg_vcds, "Two run waveforms")->required()->expected(2)->check(CLI::ExistingFile);
    dg->add_option("--module", dg_module, "Module whose graph drives the search")->required();
    dg->add_option("--instance", dg_instance, "Instance path (default: the run's instance of --module)");
    dg->add_option("--design", dg_design, "Design sources (default: bundled design defining --module)")
        ->check(CLI::ExistingFile);
    dg->add_option("--top", dg_top, "Top module");
    dg->add_option("-o,--out", dg_out, "Write the diagnosis JSON");

    // coverage
    Common cov_c;
    SimFlags cov_f;
    std::vector<std::string> cov_vcds, cov_stimuli;
    std::string cov_sva, cov_csv;
    std::size_t cov_max_paths = meg::kDefaultMaxPaths, cov_max_len = meg::kDefaultMaxLen;
    auto* cov = app.add_subcommand("coverage", "Emit cover properties per path and match runs against them");
    cov->add_option("files", cov_c.files, "Design sources")->required()->check(CLI::ExistingFile);
    cov->add_option("--top", cov_c.top, "Top module");
    cov->add_option("--sva,--emit-sva", cov_sva, "Write cover properties here");
    cov->add_option("--vcd", cov_vcds, "Run waveforms to match")->check(CLI::ExistingFile);
    cov->add_option("-s,--stimulus", cov_stimuli, "Stimuli to simulate and match")->check(CLI::ExistingFile);
    cov->add_option("-o,--out", cov_c.out, "Write coverage JSON");
    cov->add_option("--csv", cov_csv, "Write coverage CSV");
    cov->add_option("--max-paths", cov_max_paths, "Path enumeration cap")->capture_default_str();
    cov->add_option("--max-len", cov_max_len, "Path length cap")->capture_default_str();
    add_sim_flags(cov, cov_f);

    // fuzz
    Common fz_c;
    std::string fz_budget, fz_metric, fz_corpus;
    std::vector<std::string> fz_ops;
    std::optional<std::uint64_t> fz_seed;
    std::optional<std::size_t> fz_mutants, fz_rounds;
    bool fz_fail = false, fz_all = false;
    auto* fz = app.add_subcommand("fuzz", "Run a dual-mutator fuzzing campaign");
    fz->add_option("files", fz_c.files, "Design sources")->required()->check(CLI::ExistingFile);
    fz->add_option("--top", fz_c.top, "Top module");
    fz->add_option("--budget", fz_budget, "Wall-clock cap, e.g. 60s or 2m");
    fz->add_option("--seed", fz_seed, "RNG seed");
    fz->add_option("--mutants", fz_mutants, "Operand mutants per seed");
    fz->add_option("--max-rounds", fz_rounds, "Exploration rounds cap");
    fz->add_option("--metric", fz_metric, "Code coverage metric: meg-edges, branches, both");
    fz->add_option("--ops", fz_ops, "Structural ops: append, delete, replace-tag, swap");
    fz->add_option("--corpus", fz_corpus, "Directory of seed stimulus JSON files")->check(CLI::ExistingDirectory);
    fz->add_option("-o,--out", fz_c.out, "Campaign output directory");
    fz->add_flag("--all-levels", fz_all, "Keep findings above the first leaky level");
    fz->add_flag("--fail-on-finding", fz_fail, "Exit 3 when any finding is reported");

    // report
    std::string rp_campaign, rp_out;
    std::vector<std::string> rp_formats{"text"}, rp_design;
    auto* rp = app.add_subcommand("report", "Render a saved campaign");
    rp->add_option("campaign", rp_campaign, "campaign.json")->required()->check(CLI::ExistingFile);
    rp->add_option("-o,--out", rp_out, "Output directory (default: text to stdout)");
    rp->add_option("--format", rp_formats, "text, json, csv, dot")->delimiter(',');
    rp->add_option("--design", rp_design, "Design sources, needed for dot")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    fuzz::Logger logger;
    if (!quiet) logger = [](const std::string& m) { std::cerr << m << "\n"; };

    try {
        // Precedence: flags > environment > config file.
        fuzz::FuzzConfig cfg;
        if (!config_path.empty()) {
            try {
                cfg = fuzz::config_from_json(json::parse(hdl::read_file(config_path)));
            } catch (const json::exception& e) {
                throw Error(ErrorKind::ConfigError, config_path + ": " + e.what());
            }
        }
        if (const char* env = std::getenv("TLEAK_JOBS")) {
            try {
                cfg.jobs = static_cast<unsigned>(std::stoul(env));
            } catch (const std::exception&) {
                throw Error(ErrorKind::ConfigError, "TLEAK_JOBS must be a positive integer");
            }
        }
        if (jobs) cfg.jobs = jobs;
        if (cfg.jobs == 0) cfg.jobs = 1;

        if (*parse) {
            auto h = load(parse_c);
            if (parse_print) {
                std::string text;
                for (const auto& [name, m] : h.modules) text += hdl::print_module(m) + "\n";
                emit(parse_c.out, text);
            } else {
                emit(parse_c.out, hdl::design_to_json(h, !parse_no_locs).dump(2) + "\n");
            }
            return kExitOk;
        }

        if (*graph) {
            auto h = load(graph_c);
            auto megs = meg::build_megs(h);
            for (const auto& [name, g] : megs) {
                auto ps = meg::enumerate_meps(g, max_paths, max_len);
                std::cout << name << ": " << g.nodes().size() << " nodes, " << g.edges().size() << " edges, "
                          << ps.paths.size() << " paths" << (ps.truncated ? " (truncated)" : "") << "\n";
            }
            const meg::Meg& g = module_graph(megs, graph_module.empty() ? h.top : graph_module);
            if (!graph_dot.empty()) report::write_file(graph_dot, meg::export_dot(g));
            if (!graph_json.empty()) report::write_file(graph_json, meg::meg_to_json(g).dump(2) + "\n");
            if (!graph_paths.empty()) {
                std::string text;
                for (const auto& p : meg::enumerate_meps(g, max_paths, max_len).paths)
                    text += p.id + " " + p.str() + "\n";
                emit(graph_paths, text);
            }
            return kExitOk;
        }

        if (*simc) {
            auto h = load(sim_c);
            sim::Stimulus st = sim::load_stimulus(sim_stim);
            sim::validate_stimulus(st, h.top_module());
            sim::SimOptions o = sim_f.options();
            o.run_id = fs::path(sim_stim).stem().string();
            auto r = sim::simulate(h, st, o);
            if (r.trace.hit_max_cycles) std::cerr << "warning: run hit the cycle cap\n";
            json times = json::array();
            for (const auto& inst : h.instances) {
                auto t = leakage::measure(r.trace, inst.path);
                std::cout << inst.path << " (" << inst.module << "): " << t.cycles << " cycles\n";
                times.push_back({{"instance", inst.path}, {"cycles", t.cycles}, {"lastToggle", t.last_toggle}});
            }
            if (!sim_vcd.empty()) report::write_file(sim_vcd, sim::write_vcd(r.trace));
            if (!sim_c.out.empty()) {
                json traces = json::array();
                for (const auto& it : r.trace.instances) {
                    json sigs = json::object();
                    for (const auto& s : it.signals) sigs[s.name] = s.values;
                    traces.push_back({{"path", it.path}, {"module", it.module}, {"signals", sigs}});
                }
                report::write_file(sim_c.out, json{{"schemaVersion", 1},
                                                   {"run", r.trace.run_id},
                                                   {"startCycle", r.trace.start_cycle},
                                                   {"cycles", r.trace.cycles},
                                                   {"hitMaxCycles", r.trace.hit_max_cycles},
                                                   {"times", times},
                                                   {"instances", traces}}
                                                  .dump(2) + "\n");
            }
            return kExitOk;
        }

        if (*an) {
            auto h = load(an_c);
            auto runs = load_runs(an_vcds, an_stimuli, &h, an_f.options());
            if (runs.size() < 2) throw Error(ErrorKind::ConfigError, "analyze needs at least two runs");
            std::vector<leakage::RunPair> pairs;
            for (std::size_t i = 0; i < runs.size(); ++i)
                for (std::size_t k = i + 1; k < runs.size(); ++k)
                    pairs.push_back({&runs[i], &runs[k], {runs[i].run_id, ""}, {runs[k].run_id, ""}});
            auto findings = leakage::analyze(pairs, h, {an_min_delta});
            json out = json::array();
            for (const auto& f : findings) {
                std::cout << f.instance << " (level " << f.level << (f.first_leaky_level ? ", first leaky" : "")
                          << "): " << f.run_a.str() << "=" << f.time_a << " " << f.run_b.str() << "=" << f.time_b
                          << " delta " << f.delta << "\n";
                out.push_back(leakage::finding_to_json(f));
            }
            if (findings.empty()) std::cout << "no findings\n";
            json doc{{"schemaVersion", 1}, {"findings", out}};
            if (!an_classes.empty()) {
                std::vector<leakage::Classifier> cls;
                for (const auto& c : an_classes) cls.push_back(leakage::parse_classifier(c));
                std::vector<const sim::TraceBundle*> ptrs;
                for (const auto& r : runs) ptrs.push_back(&r);
                const std::string inst = an_instance.empty() ? h.top : an_instance;
                auto ds = leakage::distributions(ptrs, inst, leakage::classify_by(cls));
                json dj = json::array();
                for (const auto& d : ds) {
                    std::cout << inst << " group " << d.group << ": n=" << d.samples.size() << " median " << d.median
                              << " max deviation " << d.max_deviation << "\n";
                    dj.push_back(leakage::distribution_to_json(d));
                }
                doc["distributions"] = dj;
            }
            if (!an_c.out.empty()) report::write_file(an_c.out, doc.dump(2) + "\n");
            return an_fail && !findings.empty() ? kExitFinding : kExitOk;
        }

        if (*dg) {
            const auto files = dg_design.empty() ? bundled_design_for(dg_module) : dg_design;
            auto h = hdl::load_design(files, dg_top.empty() ? std::nullopt : std::optional<std::string>(dg_top));
            auto megs = meg::build_megs(h);
            const meg::Meg& g = module_graph(megs, dg_module);
            auto a = sim::load_vcd_file(dg_vcds[0]).bundle;
            auto b = sim::load_vcd_file(dg_vcds[1]).bundle;
            std::string inst = dg_instance;
            if (inst.empty()) {
                for (const auto& it : a.instances)
                    if (it.module == dg_module) {
                        inst = it.path;
                        break;
                    }
                if (inst.empty() && a.instances.size() == 1) inst = a.instances.front().path;
                if (inst.empty())
                    throw Error(ErrorKind::UnknownInstance, "no instance of '" + dg_module + "'; use --instance");
            }
            auto d = diag::diagnose(a.at(inst), b.at(inst), g);
            std::cout << "instance " << d.instance << "\n";
            std::cout << "divergence at cycle " << d.divergence_cycle << (d.length_mismatch ? " (length mismatch)" : "")
                      << "\n";
            std::cout << "phase 1:";
            for (const auto& s : d.instigators) std::cout << " " << s;
            std::cout << "\nphase 2:";
            for (const auto& s : d.culprit_signals()) std::cout << " " << s;
            std::cout << "\n";
            for (const auto& c : d.culprits)
                for (const auto& loc : c.locs) {
                    auto text = report::quote_line(loc.file, loc.line, h.sources);
                    std::cout << "  " << c.signal << " " << loc.file << ":" << loc.line;
                    if (text) std::cout << " | " << *text;
                    std::cout << "\n";
                }
            if (!dg_out.empty()) report::write_file(dg_out, diag::diagnosis_to_json(d).dump(2) + "\n");
            return kExitOk;
        }

        if (*cov) {
            auto h = load(cov_c);
            auto megs = meg::build_megs(h);
            coverage::CoverageTracker tracker(h, megs, cov_max_paths, cov_max_len);
            if (!cov_sva.empty()) {
                std::string text;
                for (const auto& [module, conds] : tracker.paths()) {
                    (void)conds;
                    for (const auto& pc : tracker.conditions(module)) {
                        std::string warning;
                        text += coverage::emit_sva(pc, module, &warning);
                        if (!warning.empty() && !quiet) std::cerr << "warning: " << warning << "\n";
                    }
                }
                report::write_file(cov_sva, text);
            }
            auto runs = load_runs(cov_vcds, cov_stimuli, &h, cov_f.options());
            for (const auto& r : runs) tracker.add(r);
            const auto& rep = tracker.report();
            for (const auto& [name, m] : rep.modules)
                std::cout << name << ": " << m.covered << "/" << m.total << " paths"
                          << (m.truncated ? " (truncated)" : "") << "\n";
            if (!cov_c.out.empty()) report::write_file(cov_c.out, coverage::coverage_to_json(rep).dump(2) + "\n");
            if (!cov_csv.empty()) report::write_file(cov_csv, coverage::coverage_csv(rep));
            return kExitOk;
        }

        if (*fz) {
            auto h = load(fz_c);
            auto megs = meg::build_megs(h);
            if (!fz_budget.empty()) cfg.time_budget = parse_duration(fz_budget);
            if (fz_seed) cfg.rng_seed = *fz_seed;
            if (fz_mutants) cfg.mutants_per_seed = *fz_mutants;
            if (fz_rounds) cfg.max_rounds = *fz_rounds;
            if (!fz_metric.empty()) cfg.metric = fuzz::metric_from_string(fz_metric);
            if (!fz_ops.empty()) {
                cfg.ops.clear();
                for (const auto& op : fz_ops) cfg.ops.insert(fuzz::struct_op_from_string(op));
            }
            if (!fz_corpus.empty()) cfg.corpus_dir = fz_corpus;
            if (fz_all) cfg.all_levels = true;
            if (cfg.mutants_per_seed < 1) throw Error(ErrorKind::ConfigError, "--mutants must be >= 1");
            auto result = fuzz::fuzz_loop(h, megs, cfg, logger);
            if (!fz_c.out.empty())
                report::render(result,
                               {report::Format::Text, report::Format::Json, report::Format::Csv, report::Format::Dot},
                               fz_c.out, &megs);
            std::cout << report::render_text(result);
            return fz_fail && !result.findings.empty() ? kExitFinding : kExitOk;
        }

        if (*rp) {
            fuzz::CampaignResult result;
            try {
                result = fuzz::campaign_from_json(json::parse(hdl::read_file(rp_campaign)));
            } catch (const json::exception& e) {
                throw Error(ErrorKind::ConfigError, rp_campaign + ": " + e.what());
            }
            std::set<report::Format> formats;
            for (const auto& f : rp_formats) formats.insert(report::format_from_string(f));
            if (rp_out.empty()) {
                if (formats != std::set<report::Format>{report::Format::Text})
                    throw Error(ErrorKind::ConfigError, "formats other than text need --out");
                std::cout << report::render_text(result);
                return kExitOk;
            }
            std::optional<std::map<std::string, meg::Meg>> megs;
            if (formats.count(report::Format::Dot)) {
                if (rp_design.empty()) throw Error(ErrorKind::ConfigError, "dot output needs --design");
                megs = meg::build_megs(hdl::load_design(rp_design));
            }
            for (const auto& p : report::render(result, formats, rp_out, megs ? &*megs : nullptr))
                std::cout << p << "\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::ConfigError ? kExitUsage : kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    }
    return kExitUsage;
}
