// ciser-dtn: compartment-model analysis and DTN epidemic-routing experiments.
//
// Subcommands: integrate, analyze, spline-fit, simulate, trace, metrics,
// compare. Diagnostics go to stderr; CSV data goes to files or stdout.
// Exit codes: 0 success, 1 validation/usage error, 2 runtime error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ciser/analysis.hpp"
#include "ciser/metrics.hpp"
#include "ciser/model.hpp"
#include "ciser/sim/engine.hpp"
#include "ciser/spline.hpp"
#include "ciser/trace.hpp"

namespace {

using namespace ciser;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << data;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// ---------------------------------------------------------------------------
// Model scenario files: key = value text carrying the ODE parameters, the
// initial fractions and the integration window.

struct ModelScenario {
    ModelParams params;
    StateVector initial{1.0, 0.0, 0.0, 0.0, 0.0};
    double t0 = 0.0;
    double t1 = 730.0;
    double step = 0.1;
};

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad numeric value for '" + key + "': '" + value + "'");
    }
}

ModelScenario parse_model_scenario(const std::string& text) {
    ModelScenario sc;
    const std::map<std::string, double*> fields = {
        {"beta", &sc.params.beta},   {"epsilon", &sc.params.epsilon},
        {"sigma", &sc.params.sigma}, {"gamma", &sc.params.gamma},
        {"tau", &sc.params.tau},     {"omega", &sc.params.omega},
        {"mu", &sc.params.mu},       {"rho", &sc.params.rho},
        {"s0", &sc.initial.s},       {"e0", &sc.initial.e},
        {"i0", &sc.initial.i},       {"c0", &sc.initial.c},
        {"r0", &sc.initial.r},       {"t0", &sc.t0},
        {"t1", &sc.t1},              {"step", &sc.step},
    };
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw UsageError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "time_unit") {
            sc.params.time_unit = value;
        } else if (auto it = fields.find(key); it != fields.end()) {
            *it->second = to_double(key, value);
        } else {
            throw UsageError("unknown model key '" + key + "'");
        }
    }
    return sc;
}

// ---------------------------------------------------------------------------
// integrate

int cmd_integrate(const std::string& params_path, std::optional<double> t0,
                  std::optional<double> t1, std::optional<double> step,
                  const std::string& initial_csv, const std::string& out) {
    ModelScenario sc = parse_model_scenario(read_file(params_path));
    if (t0) sc.t0 = *t0;
    if (t1) sc.t1 = *t1;
    if (step) sc.step = *step;
    if (!initial_csv.empty()) {
        const auto cells = split_csv(initial_csv);
        if (cells.size() != 5)
            throw UsageError("--initial expects five comma-separated fractions");
        sc.initial = {to_double("initial", cells[0]), to_double("initial", cells[1]),
                      to_double("initial", cells[2]), to_double("initial", cells[3]),
                      to_double("initial", cells[4])};
    }
    const Trajectory traj = integrate_ciser(sc.initial, sc.params, sc.t0, sc.t1, sc.step);
    write_output(out, trajectory_csv(traj));
    return 0;
}

// ---------------------------------------------------------------------------
// analyze

std::string bool_cell(bool v) { return v ? "true" : "false"; }

int cmd_analyze(const std::vector<std::string>& params_paths, const std::string& out) {
    std::string csv =
        "beta,epsilon,sigma,gamma,tau,omega,mu,rho,R0_closed,R0_spectral,"
        "mpe_stable,has_endemic,S_bar,E_bar,I_bar,C_bar,R_bar,"
        "endemic_cond1,endemic_cond2,endemic_cond3,endemic_cond4\n";
    for (const auto& path : params_paths) {
        const ModelParams p = parse_model_scenario(read_file(path)).params;
        const auto rn = r0(p);
        const auto mpe = mpe_stability(p);
        const auto eq = endemic_equilibrium(p);

        csv += fmt(p.beta) + "," + fmt(p.epsilon) + "," + fmt(p.sigma) + "," +
               fmt(p.gamma) + "," + fmt(p.tau) + "," + fmt(p.omega) + "," + fmt(p.mu) +
               "," + fmt(p.rho) + "," + fmt(rn.closed_form) + "," + fmt(rn.spectral) +
               "," + bool_cell(mpe.verdict_closed && mpe.verdict_numeric) + "," +
               bool_cell(eq.has_value());
        if (eq) {
            const auto cond = endemic_stability_conditions(p, *eq);
            csv += "," + fmt(eq->s_bar) + "," + fmt(eq->e_bar) + "," + fmt(eq->i_bar) +
                   "," + fmt(eq->c_bar) + "," + fmt(eq->r_bar);
            for (bool c : cond.conditions) csv += "," + bool_cell(c);
        } else {
            csv += ",,,,,,,,,";
        }
        csv += "\n";
    }
    write_output(out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// spline-fit

struct TrajectoryTable {
    std::vector<double> t;
    std::array<std::vector<double>, 5> cols;  // S, E, I, C, R
};

TrajectoryTable parse_trajectory_csv(const std::string& text) {
    TrajectoryTable tab;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (!header_seen) {
            if (stripped != "t,S,E,I,C,R")
                throw UsageError("line " + std::to_string(lineno) +
                                 ": expected header t,S,E,I,C,R");
            header_seen = true;
            continue;
        }
        const auto cells = split_csv(stripped);
        if (cells.size() != 6)
            throw UsageError("line " + std::to_string(lineno) + ": expected 6 fields");
        tab.t.push_back(to_double("t", cells[0]));
        for (int k = 0; k < 5; ++k)
            tab.cols[k].push_back(to_double("value", cells[k + 1]));
    }
    if (tab.t.size() < 4) throw UsageError("trajectory needs at least 4 rows");
    return tab;
}

// Estimate max |f''''| from the jump of the piecewise-constant third
// derivative across interior knots.
double estimate_f4(const CubicSpline& s) {
    const auto& pieces = s.pieces();
    const auto& knots = s.knots();
    double worst = 0.0;
    for (std::size_t k = 1; k < pieces.size(); ++k) {
        const double jump = 6.0 * (pieces[k].p3 - pieces[k - 1].p3);
        const double h = knots[k + 1] - knots[k - 1];
        worst = std::max(worst, std::fabs(jump) / (h / 2.0));
    }
    return worst;
}

int cmd_spline_fit(const std::string& in_path, const std::string& out,
                   bool global_frame) {
    const TrajectoryTable tab = parse_trajectory_csv(read_file(in_path));
    const char* names[5] = {"S", "E", "I", "C", "R"};

    std::string csv = "compartment,interval_lo,interval_hi,p0,p1,p2,p3\n";
    std::string report = "compartment,mse,error_bound,h\n";
    for (int k = 0; k < 5; ++k) {
        const auto s = CubicSpline::fit_not_a_knot(tab.t, tab.cols[k]);
        const auto& knots = s.knots();
        for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
            const SplinePiece p = global_frame ? s.global_piece(j) : s.pieces()[j];
            csv += std::string(names[k]) + "," + fmt(knots[j]) + "," + fmt(knots[j + 1]) +
                   "," + fmt(p.p0) + "," + fmt(p.p1) + "," + fmt(p.p2) + "," +
                   fmt(p.p3) + "\n";
        }
        double h = 0.0;
        for (std::size_t j = 0; j + 1 < knots.size(); ++j)
            h = std::max(h, knots[j + 1] - knots[j]);
        report += std::string(names[k]) + "," + fmt(spline_mse(s, tab.t, tab.cols[k])) +
                  "," + fmt(spline_error_bound(h, estimate_f4(s))) + "," + fmt(h) + "\n";
    }
    write_output(out, csv + report);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

SimConfig load_sim_config(const std::string& path,
                          const std::vector<std::string>& overrides) {
    SimConfig cfg = SimConfig::parse_file(path);
    for (const auto& kv : overrides) {  // flags take precedence over the file
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw UsageError("--set expects key=value, got '" + kv + "'");
        cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    return cfg;
}

int cmd_simulate(const std::string& config_path, const std::string& policy,
                 std::optional<std::uint64_t> seed, const std::string& out_dir,
                 bool events, const std::vector<std::string>& overrides) {
    SimConfig cfg = load_sim_config(config_path, overrides);
    if (!policy.empty()) cfg.policy = parse_policy(policy);
    if (seed) cfg.seed = *seed;
    cfg.validate();

    RunOptions opts;
    opts.log_events = events;
    const SimResult res = run_simulation(cfg, opts);

    std::filesystem::create_directories(out_dir);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    write_output(path("summary.csv"), res.summary_csv());
    write_output(path("census.csv"), res.census_csv());
    if (events) write_output(path("events.csv"), res.events_csv());
    std::cerr << "wrote " << out_dir << ": created=" << res.created
              << " delivered=" << res.delivered << " relayed=" << res.relayed << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// trace

TraceFormat parse_format(const std::string& name) {
    if (name == "csv") return TraceFormat::Csv;
    if (name == "whitespace") return TraceFormat::Whitespace;
    throw UsageError("format must be 'csv' or 'whitespace'");
}

TraceDataset load_trace(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_contact_trace(in, parse_format(format), path);
}

int cmd_trace_parse(const std::string& in_path, const std::string& format,
                    const std::string& out) {
    write_output(out, export_contact_trace(load_trace(in_path, format)));
    return 0;
}

int cmd_trace_stats(const std::string& in_path, const std::string& format,
                    const std::string& out) {
    write_output(out, trace_stats_csv(trace_stats(load_trace(in_path, format))));
    return 0;
}

// ---------------------------------------------------------------------------
// metrics merge

struct PolicySamples {
    std::vector<double> dr, or_, dd;
    std::size_t runs = 0;
};

std::string quartile_cells(const std::vector<double>& xs) {
    if (xs.empty()) return ",,";
    const auto q = quartiles(xs);
    return fmt(q.median) + "," + fmt(q.q1) + "," + fmt(q.q3);
}

int cmd_metrics_merge(const std::vector<std::string>& files, const std::string& out) {
    std::map<std::string, PolicySamples> per_policy;
    for (const auto& file : files) {
        std::istringstream in(read_file(file));
        std::string line;
        bool header_seen = false;
        while (std::getline(in, line)) {
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped[0] == '#') continue;
            if (!header_seen) {
                if (stripped.rfind("config_hash,", 0) != 0)
                    throw UsageError(file + ": not a summary.csv file");
                header_seen = true;
                continue;
            }
            const auto cells = split_csv(stripped);
            if (cells.size() != 9)
                throw UsageError(file + ": malformed summary row");
            auto& agg = per_policy[cells[2]];
            ++agg.runs;
            agg.dr.push_back(to_double("delivery_ratio", cells[6]));
            if (!cells[7].empty()) agg.or_.push_back(to_double("overhead_ratio", cells[7]));
            if (!cells[8].empty())
                agg.dd.push_back(to_double("mean_delivery_delay", cells[8]));
        }
    }
    if (per_policy.empty()) throw UsageError("no summary rows found");

    std::string csv =
        "policy,runs,dr_median,dr_q1,dr_q3,or_median,or_q1,or_q3,"
        "dd_median,dd_q1,dd_q3\n";
    for (const auto& [policy, agg] : per_policy)
        csv += policy + "," + std::to_string(agg.runs) + "," + quartile_cells(agg.dr) +
               "," + quartile_cells(agg.or_) + "," + quartile_cells(agg.dd) + "\n";
    write_output(out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// compare

int thread_cap(std::size_t tasks) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("CISER_DTN_THREADS")) {
        try {
            cap = std::min(cap, std::max(1, std::stoi(env)));
        } catch (const std::exception&) {
            throw UsageError("CISER_DTN_THREADS must be a positive integer");
        }
    }
    return std::min<std::size_t>(cap, tasks);
}

/// CISER parameters adapted to a mobility scenario: the contact rate comes
/// from the RWP approximation and the companion rates are tied to it, all
/// per second.
ModelParams adapt_params(const SimConfig& cfg, double mean_rel_speed) {
    ModelParams p;
    const double side = std::sqrt(cfg.area_width * cfg.area_height);
    p.beta = contact_rate_rwp(side, cfg.tx_range, mean_rel_speed);
    p.sigma = p.gamma = p.omega = p.beta;
    p.epsilon = 0.084;
    p.tau = 5.4795e-4 / 86400.0;
    p.mu = 6.8493e-5 / 86400.0;
    p.rho = cfg.rho;
    p.time_unit = "second";
    return p;
}

int cmd_compare(const std::string& scenario_path, int seeds, std::uint64_t seed_base,
                const std::string& horizons_csv, double mean_rel_speed,
                const std::string& out, const std::vector<std::string>& overrides) {
    if (seeds < 1) throw UsageError("--seeds must be at least 1");
    SimConfig base = load_sim_config(scenario_path, overrides);
    base.validate();

    std::vector<double> horizons;
    if (horizons_csv.empty()) {
        for (int k = 1; k <= 6; ++k) horizons.push_back(base.sim_duration * k / 6.0);
    } else {
        for (const auto& cell : split_csv(horizons_csv))
            horizons.push_back(to_double("horizons", cell));
        std::sort(horizons.begin(), horizons.end());
    }

    // Both policies run the same seed list; tasks are indexed so collection
    // order (and the report bytes) cannot depend on scheduling.
    struct Task {
        Policy policy;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Policy policy : {Policy::Ciser, Policy::Sir})
        for (int k = 0; k < seeds; ++k)
            tasks.push_back({policy, seed_base + static_cast<std::uint64_t>(k)});

    std::vector<SimResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int workers = thread_cap(tasks.size());
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < tasks.size();
             k = next.fetch_add(1)) {
            SimConfig cfg = base;
            cfg.policy = tasks[k].policy;
            cfg.seed = tasks[k].seed;
            results[k] = run_simulation(cfg);
        }
    };
    for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    char head[160];
    std::snprintf(head, sizeof(head),
                  "# ciser-dtn 1.0\n# config_hash=%016llx\n# seeds=%llu..%llu\n",
                  static_cast<unsigned long long>(base.hash()),
                  static_cast<unsigned long long>(seed_base),
                  static_cast<unsigned long long>(seed_base + seeds - 1));
    std::string csv = head;
    csv +=
        "kind,policy,seed,t,delivery_ratio,overhead_ratio,mean_delivery_delay,"
        "S,E,I,C,R,infected\n";

    std::map<std::pair<std::string, double>, PolicySamples> medians;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const std::string policy = policy_name(tasks[k].policy);
        for (double h : horizons) {
            const auto rep = results[k].metrics_at(h);
            csv += "sim," + policy + "," + std::to_string(tasks[k].seed) + "," +
                   fmt(h) + "," + fmt(rep.delivery_ratio) + "," +
                   metric_cell(rep.overhead_ratio) + "," +
                   metric_cell(rep.mean_delivery_delay) + ",,,,,,\n";
            auto& agg = medians[{policy, h}];
            agg.dr.push_back(rep.delivery_ratio);
            if (rep.overhead_ratio) agg.or_.push_back(*rep.overhead_ratio);
            if (rep.mean_delivery_delay) agg.dd.push_back(*rep.mean_delivery_delay);
        }
    }
    auto median_cell = [](const std::vector<double>& xs) {
        return xs.empty() ? std::string() : fmt(quartiles(xs).median);
    };
    for (const auto& [key, agg] : medians)
        csv += "median," + key.first + ",," + fmt(key.second) + "," +
               median_cell(agg.dr) + "," + median_cell(agg.or_) + "," +
               median_cell(agg.dd) + ",,,,,,\n";

    // ODE approximation of the CISER dynamics on the same horizon grid,
    // seeded with one infected node.
    const ModelParams ode = adapt_params(base, mean_rel_speed);
    const double n = base.n_nodes;
    const StateVector x0{(n - 1.0) / n, 0.0, 1.0 / n, 0.0, 0.0};
    const double step = std::min(base.scan_interval, horizons.back() / 1000.0);
    const Trajectory traj = integrate_ciser(x0, ode, 0.0, horizons.back(), step);
    for (double h : horizons) {
        // closest sample at or before the horizon
        const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), h);
        const std::size_t idx = (it == traj.times.begin())
                                    ? 0
                                    : static_cast<std::size_t>(it - traj.times.begin()) - 1;
        const StateVector& x = traj.states[idx];
        csv += "ode,ciser-approximation,," + fmt(traj.times[idx]) + ",,,," + fmt(x.s) +
               "," + fmt(x.e) + "," + fmt(x.i) + "," + fmt(x.c) + "," + fmt(x.r) + "," +
               fmt(n * (x.i + x.c)) + "\n";
    }
    write_output(out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CISER compartment-model analysis and DTN routing experiments"};
    app.require_subcommand(1);

    // integrate
    auto* integrate = app.add_subcommand("integrate", "Integrate the CISER equations");
    std::string params_path, initial_csv, out;
    std::optional<double> t0, t1, step;
    integrate->add_option("--params", params_path, "model parameter file")->required();
    integrate->add_option("--t0", t0, "start time (overrides file)");
    integrate->add_option("--t1", t1, "end time (overrides file)");
    integrate->add_option("--step", step, "integration step (overrides file)");
    integrate->add_option("--initial", initial_csv, "S,E,I,C,R initial fractions");
    integrate->add_option("--out", out, "output file (default stdout)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Reproduction number and stability");
    std::vector<std::string> analyze_paths;
    std::string analyze_out;
    analyze->add_option("--params", analyze_paths, "model parameter file(s)")
        ->required();
    analyze->add_option("--out", analyze_out, "output file (default stdout)");

    // spline-fit
    auto* spline = app.add_subcommand("spline-fit", "Fit not-a-knot cubic splines");
    std::string spline_in, spline_out;
    bool spline_global = false;
    spline->add_option("--in", spline_in, "trajectory CSV (t,S,E,I,C,R)")->required();
    spline->add_option("--out", spline_out, "output file (default stdout)");
    spline->add_flag("--global", spline_global,
                     "emit coefficients in global coordinates");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run one DTN simulation");
    std::string sim_config, sim_policy, sim_out;
    std::optional<std::uint64_t> sim_seed;
    bool sim_events = false;
    std::vector<std::string> sim_sets;
    simulate->add_option("--config", sim_config, "scenario config file")->required();
    simulate->add_option("--policy", sim_policy, "sir or ciser (overrides file)");
    simulate->add_option("--seed", sim_seed, "seed (overrides file)");
    simulate->add_option("--out", sim_out, "output directory")->required();
    simulate->add_flag("--events", sim_events, "also write events.csv");
    simulate->add_option("--set", sim_sets, "key=value config override (repeatable)");

    // trace
    auto* trace = app.add_subcommand("trace", "Contact-trace utilities");
    trace->require_subcommand(1);
    auto* tparse = trace->add_subcommand("parse", "Normalize a trace to canonical CSV");
    std::string tin, tformat = "csv", tout;
    tparse->add_option("input", tin, "trace file")->required();
    tparse->add_option("--format", tformat, "csv or whitespace");
    tparse->add_option("--out", tout, "output file (default stdout)");
    auto* tstats = trace->add_subcommand("stats", "Contact statistics as CSV");
    std::string sin, sformat = "csv", sout;
    tstats->add_option("input", sin, "trace file")->required();
    tstats->add_option("--format", sformat, "csv or whitespace");
    tstats->add_option("--out", sout, "output file (default stdout)");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Metric post-processing");
    metrics->require_subcommand(1);
    auto* merge = metrics->add_subcommand("merge", "Merge multi-seed summary files");
    std::vector<std::string> merge_files;
    std::string merge_out;
    merge->add_option("files", merge_files, "summary.csv files")->required();
    merge->add_option("--out", merge_out, "output file (default stdout)");

    // compare
    auto* compare = app.add_subcommand("compare", "SIR vs CISER on shared seeds");
    std::string cmp_scenario, cmp_horizons, cmp_out;
    int cmp_seeds = 1;
    std::uint64_t cmp_seed_base = 1;
    double cmp_speed = 2.417;
    std::vector<std::string> cmp_sets;
    compare->add_option("--scenario", cmp_scenario, "scenario config file")->required();
    compare->add_option("--seeds", cmp_seeds, "number of seeds per policy");
    compare->add_option("--seed-base", cmp_seed_base, "first seed value");
    compare->add_option("--horizons", cmp_horizons, "comma-separated horizons (s)");
    compare->add_option("--mean-rel-speed", cmp_speed,
                        "mean relative node speed for the contact-rate fit (m/s)");
    compare->add_option("--out", cmp_out, "output file (default stdout)");
    compare->add_option("--set", cmp_sets, "key=value config override (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*integrate)
            return cmd_integrate(params_path, t0, t1, step, initial_csv, out);
        if (*analyze) return cmd_analyze(analyze_paths, analyze_out);
        if (*spline) return cmd_spline_fit(spline_in, spline_out, spline_global);
        if (*simulate)
            return cmd_simulate(sim_config, sim_policy, sim_seed, sim_out, sim_events,
                                sim_sets);
        if (*tparse) return cmd_trace_parse(tin, tformat, tout);
        if (*tstats) return cmd_trace_stats(sin, sformat, sout);
        if (*merge) return cmd_metrics_merge(merge_files, merge_out);
        if (*compare)
            return cmd_compare(cmp_scenario, cmp_seeds, cmp_seed_base, cmp_horizons,
                               cmp_speed, cmp_out, cmp_sets);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
