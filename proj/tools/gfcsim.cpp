#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gfcsim/analysis/log_analysis.hpp"
#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/simulation.hpp"
#include "gfcsim/sim/sweep.hpp"

namespace fs = std::filesystem;
using namespace gfcsim;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path default_out() {
    if (const char* env = std::getenv("GFCSIM_OUT"); env && *env) return env;
    return "gfcsim-out";
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + p.string());
}

std::string header_text(const scenario::Scenario& s) {
    std::ostringstream os;
    os << "# gfcsim " << GFCSIM_VERSION << "\n";
    os << "# seed " << s.meta.seed << "\n";
    os << "# duration-s " << s.meta.duration << "\n";
    os << scenario::echo_scenario(s);
    return os.str();
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto dash = part.find('-');
        try {
            if (dash == std::string::npos) {
                seeds.push_back(std::stoull(part));
            } else {
                const auto lo = std::stoull(part.substr(0, dash));
                const auto hi = std::stoull(part.substr(dash + 1));
                if (hi < lo) throw UsageError("empty seed range " + part);
                for (auto v = lo; v <= hi; ++v) seeds.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw UsageError("bad seed list '" + spec + "'");
        }
    }
    if (seeds.empty()) throw UsageError("empty seed list");
    return seeds;
}

void write_run(const sim::Simulation& run, scenario::Scenario s, const fs::path& dir) {
    fs::create_directories(dir);
    s.meta.seed = run.seed();
    s.meta.duration = run.duration();
    write_file(dir / "header.txt", header_text(s));
    write_file(dir / "events.log", run.log().to_string());
    std::ostringstream sum;
    for (const auto& [k, v] : run.summary()) sum << k << " = " << v << '\n';
    write_file(dir / "summary.txt", sum.str());
}

struct RunArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string seeds;
    std::optional<Seconds> duration;
    std::string out;
};

int cmd_run(const RunArgs& a) {
    const auto s = scenario::load_scenario_file(a.scenario);
    const fs::path out = a.out.empty() ? default_out() : fs::path(a.out);
    if (a.seeds.empty()) {
        sim::Simulation run(s, sim::RunOptions{a.seed, a.duration});
        run.run();
        write_run(run, s, out);
        std::cout << "wrote " << run.log().size() << " records to " << (out / "events.log").string() << '\n';
        return kOk;
    }
    if (a.seed) throw UsageError("use either --seed or --seeds");
    const auto seeds = parse_seeds(a.seeds);
    auto runs_scenario = s;
    if (a.duration) runs_scenario.meta.duration = *a.duration;
    sim::sweep_parallel(runs_scenario, seeds, [&](const sim::Simulation& run, sim::SweepResult&) {
        write_run(run, runs_scenario, out / ("seed-" + std::to_string(run.seed())));
    });
    std::cout << "wrote " << seeds.size() << " runs under " << out.string() << '\n';
    return kOk;
}

struct ReportArgs {
    std::string log;
    std::string name;
    double alpha = 0.05;
    Seconds bucket = 3600;
    std::optional<Seconds> horizon;
    std::string region;
    std::string client;
    std::string out;
};

/// Scenario name and seed from the header.txt written next to a log, if any.
void read_header(const fs::path& log, analysis::ExperimentReport& rep) {
    std::ifstream in(log.parent_path() / "header.txt");
    std::string line;
    bool in_meta = false;
    while (std::getline(in, line)) {
        if (line.rfind("# seed ", 0) == 0) rep.seed = std::stoull(line.substr(7));
        if (line == "meta:") in_meta = true;
        else if (!line.empty() && line[0] != ' ') in_meta = false;
        if (in_meta && line.rfind("  name: ", 0) == 0) rep.scenario = line.substr(8);
    }
}

int cmd_report(const ReportArgs& a) {
    static const std::vector<std::string> names{"timing", "reachability", "scanner-stats", "usage", "usage-curve",
                                                "smooth"};
    if (std::find(names.begin(), names.end(), a.name) == names.end())
        throw UsageError("unknown report '" + a.name + "'");
    std::ifstream in(a.log, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + a.log);
    const auto records = EventLog::parse(in);

    analysis::ExperimentReport rep;
    if (a.name == "timing") {
        rep = analysis::timing_report(records);
    } else if (a.name == "smooth") {
        if (!(a.alpha >= 0 && a.alpha <= 1)) throw UsageError("--alpha must be in [0, 1]");
        rep = analysis::smooth_report(records, analysis::SmoothingParams{a.alpha});
    } else if (a.name == "reachability") {
        analysis::ReachabilityFilter f;
        if (!a.region.empty()) f.region = a.region;
        if (!a.client.empty()) f.client = a.client;
        rep = analysis::reachability_report(records, f);
    } else if (a.name == "scanner-stats") {
        rep = analysis::scanner_stats_report(records);
    } else {
        if (a.bucket <= 0) throw UsageError("--bucket must be positive");
        rep = analysis::usage_report(records, a.bucket, a.horizon);
    }
    rep.scenario = fs::path(a.log).filename().string();
    read_header(a.log, rep);
    const fs::path out = a.out.empty() ? fs::path(a.log).parent_path() : fs::path(a.out);
    rep.write_to(out.empty() ? fs::path(".") : out);
    rep.write_summary(std::cout);
    return kOk;
}

int cmd_validate(const std::string& path, bool echo) {
    const auto s = scenario::load_scenario_file(path);
    if (echo) std::cout << header_text(s);
    else std::cout << path << ": ok (" << s.meta.name << ")\n";
    return kOk;
}

int cmd_list(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && (e.path().extension() == ".yaml" || e.path().extension() == ".yml"))
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        try {
            const auto s = scenario::load_scenario_file(f.string());
            std::cout << f.filename().string() << "\t" << s.meta.name << "\t" << s.meta.description << '\n';
        } catch (const scenario::ScenarioError& e) {
            std::cout << f.filename().string() << "\tinvalid\t" << e.what() << '\n';
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event model of bridge fingerprinting, active scanning and blocking"};
    app.set_version_flag("--version", std::string(GFCSIM_VERSION));
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write events.log, header.txt, summary.txt");
    run_cmd->add_option("scenario", run.scenario, "Scenario file")->required();
    run_cmd->add_option("--seed", run.seed, "Override the scenario seed");
    run_cmd->add_option("--seeds", run.seeds, "Seed sweep, e.g. 1-10 or 1,5,9; one subdirectory per seed");
    run_cmd->add_option("--duration-s", run.duration, "Override the run length")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--out", run.out, "Output directory (default $GFCSIM_OUT or ./gfcsim-out)");

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Analyse an event log");
    rep_cmd->add_option("log", rep.log, "events.log path")->required();
    rep_cmd->add_option("name", rep.name, "timing | smooth | reachability | scanner-stats | usage")->required();
    rep_cmd->add_option("--alpha", rep.alpha, "Smoothing factor for 'smooth'");
    rep_cmd->add_option("--bucket", rep.bucket, "Bucket width in seconds for 'usage'");
    rep_cmd->add_option("--horizon-s", rep.horizon, "Series end for 'usage'");
    rep_cmd->add_option("--region", rep.region, "Client region filter for 'reachability'");
    rep_cmd->add_option("--client", rep.client, "Client label filter for 'reachability'");
    rep_cmd->add_option("--out", rep.out, "Output directory (default: next to the log)");

    std::string validate_path;
    bool echo = false;
    auto* val_cmd = app.add_subcommand("validate", "Load and validate a scenario");
    val_cmd->add_option("scenario", validate_path, "Scenario file")->required();
    val_cmd->add_flag("--echo", echo, "Print the effective configuration");

    std::string list_dir = GFCSIM_SCENARIO_DIR;
    if (const char* env = std::getenv("GFCSIM_SCENARIOS"); env && *env) list_dir = env;
    auto* list_cmd = app.add_subcommand("list-scenarios", "List bundled scenarios");
    list_cmd->add_option("--dir", list_dir, "Scenario directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*rep_cmd) return cmd_report(rep);
        if (*val_cmd) return cmd_validate(validate_path, echo);
        if (*list_cmd) return cmd_list(list_dir);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const scenario::ScenarioError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}
