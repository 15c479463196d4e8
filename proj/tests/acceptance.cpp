// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each check is independent; an exception fails only its
// own criterion.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ciser/analysis.hpp"
#include "ciser/metrics.hpp"
#include "ciser/model.hpp"
#include "ciser/sim/engine.hpp"
#include "ciser/spline.hpp"
#include "ciser/trace.hpp"
#include "common.hpp"

using namespace ciser;
using namespace ciser::testing;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    if (!pass) ++failures;
}

void criterion(int number, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(number, pass, detail);
    } catch (const std::exception& e) {
        report(number, false, std::string("exception: ") + e.what());
    }
}

ModelParams random_params(Rng& rng) {
    auto log_uniform = [&] { return std::pow(10.0, rng.uniform(-5.0, 1.0)); };
    ModelParams p;
    p.beta = log_uniform();
    p.sigma = log_uniform();
    p.gamma = log_uniform();
    p.tau = log_uniform();
    p.omega = log_uniform();
    p.mu = log_uniform();
    p.epsilon = rng.uniform(1e-6, 1.0 - 1e-6);
    p.rho = rng.uniform01();
    return p;
}

SimConfig desk_config() {
    SimConfig cfg;
    cfg.n_nodes = 40;
    cfg.area_width = cfg.area_height = 2000.0;
    cfg.sim_duration = 10800.0;
    cfg.scan_interval = 10.0;
    cfg.message_interval_min = 100.0;
    cfg.message_interval_max = 120.0;
    cfg.message_size_min = 512000.0;
    cfg.message_size_max = 1048576.0;
    cfg.ttl = 3600.0;
    cfg.energy_initial = 1200.0;
    return cfg;
}

double median_of(std::vector<double> xs) { return quartiles(std::move(xs)).median; }

std::string fmtd(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;

    // 1: conservation of the tracked totals over the two-year window
    criterion(1, [] {
        const auto start = clock::now();
        const auto traj = integrate_ciser(reference_initial(), reference_params(), 0.0,
                                          730.0, 0.1);
        const double secs =
            std::chrono::duration<double>(clock::now() - start).count();
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.states.size(); ++k)
            worst = std::max(worst,
                             std::fabs(traj.states[k].sum() + traj.dead[k] - 1.0));
        const bool pass = worst <= 1e-9 && secs < 1.0;
        return std::pair{pass, "conservation residual " + fmtd(worst) + " in " +
                                   fmtd(secs) + " s"};
    });

    // 2: three independent reproduction-number computations agree
    criterion(2, [] {
        const auto start = clock::now();
        Rng rng(20240817, 0);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const ModelParams p = random_params(rng);
            const auto rn = r0(p);
            worst = std::max(worst,
                             std::fabs(rn.closed_form - rn.spectral) / rn.closed_form);
            worst = std::max(worst,
                             std::fabs(rn.closed_form - ngm_trace(p)) / rn.closed_form);
        }
        const double secs =
            std::chrono::duration<double>(clock::now() - start).count();
        return std::pair{worst <= 1e-10 && secs < 5.0,
                         "max relative spread " + fmtd(worst) + " over 1000 draws in " +
                             fmtd(secs) + " s"};
    });

    // 3: the endemic susceptible fraction inverts the reproduction number
    criterion(3, [] {
        Rng rng(99, 7);
        double worst = 0.0;
        int supercritical = 0;
        for (int k = 0; k < 1000; ++k) {
            const ModelParams p = random_params(rng);
            if (r0(p).closed_form <= 1.0) continue;
            ++supercritical;
            worst = std::max(worst, theorem1_residual(p));
        }
        return std::pair{worst <= 1e-10 && supercritical > 0,
                         "max |S_bar R0 - 1| = " + fmtd(worst) + " over " +
                             std::to_string(supercritical) + " supercritical draws"};
    });

    // 4: endemic point exists iff R0 > 1 and satisfies the equilibrium system
    criterion(4, [] {
        Rng rng(31337, 2);
        double worst = 0.0;
        bool dichotomy = true;
        for (int k = 0; k < 1000; ++k) {
            const ModelParams p = random_params(rng);
            const auto eq = endemic_equilibrium(p);
            dichotomy &= (eq.has_value() == (r0(p).closed_form > 1.0));
            if (!eq) continue;
            for (double r : equilibrium_residuals(p, *eq))
                worst = std::max(worst, std::fabs(r));
        }
        return std::pair{dichotomy && worst <= 1e-9,
                         std::string(dichotomy ? "dichotomy holds" : "dichotomy broken") +
                             ", max residual " + fmtd(worst)};
    });

    // 5: algebraic and numeric stability verdicts agree off the threshold
    criterion(5, [] {
        Rng rng(4242, 3);
        int agreements = 0, checked = 0;
        bool root_found = true;
        for (int k = 0; k < 1000; ++k) {
            const ModelParams p = random_params(rng);
            const auto rep = mpe_stability(p);
            const double c4 = p.omega + p.mu;
            double best = 1e18;
            for (const auto& ev : rep.eigenvalues)
                best = std::min(best, std::abs(ev - std::complex<double>(-c4, 0.0)));
            root_found &= best <= 1e-10 * std::max(1.0, c4);
            if (std::fabs(r0(p).closed_form - 1.0) <= 1e-3) continue;
            ++checked;
            agreements += (rep.verdict_closed == rep.verdict_numeric);
        }
        const bool pass = root_found && checked > 0 &&
                          agreements * 1000 >= 999 * checked;
        return std::pair{pass, std::to_string(agreements) + "/" +
                                   std::to_string(checked) +
                                   " verdicts agree; -(omega+mu) root " +
                                   (root_found ? "found" : "missing")};
    });

    // 6: headline behavior of the reference parameter set
    criterion(6, [] {
        const ModelParams p = reference_params();
        const auto rn = r0(p);
        const auto rep = mpe_stability(p);
        const auto traj = integrate_ciser(reference_initial(), p, 0.0, 730.0, 0.1);
        const bool pass = rn.closed_form < 1.0 &&
                          std::fabs(rn.closed_form - 1.48e-3) / 1.48e-3 < 0.01 &&
                          rep.verdict_closed && rep.verdict_numeric &&
                          traj.states.back().i < traj.states.front().i;
        return std::pair{pass, "R0 = " + fmtd(rn.closed_form) + ", stable MPE, I(730) = " +
                                   fmtd(traj.states.back().i) + " < I(0)"};
    });

    // 7: spline interpolation quality and fourth-order convergence
    criterion(7, [] {
        const auto traj = integrate_ciser(reference_initial(), reference_params(), 0.0,
                                          730.0, 1.0);
        std::vector<double> xs, ys;
        for (std::size_t k = 0; k < traj.times.size(); k += 10) {
            xs.push_back(traj.times[k]);
            ys.push_back(traj.states[k].i);
        }
        const auto s = CubicSpline::fit_not_a_knot(xs, ys);
        double knot_err = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k)
            knot_err = std::max(knot_err, std::fabs(s.evaluate(xs[k]) - ys[k]));

        auto sin_err = [](int n) {
            std::vector<double> kx(n), ky(n);
            for (int k = 0; k < n; ++k) {
                kx[k] = 2.0 * M_PI * k / (n - 1);
                ky[k] = std::sin(kx[k]);
            }
            const auto sp = CubicSpline::fit_not_a_knot(kx, ky);
            double worst = 0.0;
            for (int j = 0; j <= 10000; ++j) {
                const double x = 2.0 * M_PI * j / 10000;
                worst = std::max(worst, std::fabs(sp.evaluate(x) - std::sin(x)));
            }
            return worst;
        };
        const double coarse = sin_err(17);
        const double ratio = sin_err(129) / sin_err(257);
        const double bound = spline_error_bound(2.0 * M_PI / 16.0, 1.0);
        const bool pass = knot_err <= 1e-12 && ratio >= 12.0 && ratio <= 20.0 &&
                          coarse <= bound;
        return std::pair{pass, "knot residual " + fmtd(knot_err) + ", halving ratio " +
                                   fmtd(ratio) + ", sin error " + fmtd(coarse) +
                                   " <= bound " + fmtd(bound)};
    });

    // 8: determinism of the simulator outputs
    criterion(8, [] {
        SimConfig cfg = desk_config();
        cfg.sim_duration = 1800.0;
        cfg.seed = 11;
        const SimResult a = run_simulation(cfg);
        const SimResult b = run_simulation(cfg);
        const bool pass =
            a.summary_csv() == b.summary_csv() && a.census_csv() == b.census_csv();
        return std::pair{pass, pass ? std::string("summary and census byte-identical")
                                    : std::string("outputs differ between runs")};
    });

    // 9: comparative behavior of the two policies at desk scale
    criterion(9, [] {
        const auto start = clock::now();
        const int seeds = 10;
        struct Task {
            Policy policy;
            std::uint64_t seed;
        };
        std::vector<Task> tasks;
        for (Policy policy : {Policy::Ciser, Policy::Sir})
            for (int k = 0; k < seeds; ++k)
                tasks.push_back({policy, static_cast<std::uint64_t>(1 + k)});
        std::vector<MetricsReport> reports(tasks.size());
        std::atomic<std::size_t> next{0};
        unsigned workers = std::thread::hardware_concurrency();
        if (workers < 1) workers = 1;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(workers, tasks.size()); ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < tasks.size();
                     k = next.fetch_add(1)) {
                    SimConfig cfg = desk_config();
                    cfg.policy = tasks[k].policy;
                    cfg.seed = tasks[k].seed;
                    const SimResult res = run_simulation(cfg);
                    reports[k] = res.metrics_at(cfg.sim_duration);
                }
            });
        for (auto& th : pool) th.join();

        std::vector<double> dr_c, dr_s, or_c, or_s, dd_c, dd_s;
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            const bool is_ciser = tasks[k].policy == Policy::Ciser;
            (is_ciser ? dr_c : dr_s).push_back(reports[k].delivery_ratio);
            if (reports[k].overhead_ratio)
                (is_ciser ? or_c : or_s).push_back(*reports[k].overhead_ratio);
            if (reports[k].mean_delivery_delay)
                (is_ciser ? dd_c : dd_s).push_back(*reports[k].mean_delivery_delay);
        }
        const double secs =
            std::chrono::duration<double>(clock::now() - start).count();
        const double or_ratio = median_of(or_c) / median_of(or_s);
        const double dd_ratio = median_of(dd_c) / median_of(dd_s);
        const bool pass = or_ratio <= 0.7 && dd_ratio <= 0.9 &&
                          median_of(dr_c) >= median_of(dr_s) && secs < 300.0;
        return std::pair{pass, "OR ratio " + fmtd(or_ratio) + " (<= 0.7), DD ratio " +
                                   fmtd(dd_ratio) + " (<= 0.9), DR " +
                                   fmtd(median_of(dr_c)) + " vs " +
                                   fmtd(median_of(dr_s)) + ", " + fmtd(secs) + " s"};
    });

    // 10: trace round trip and replay fidelity
    criterion(10, [] {
        // 3 nodes, 20 hand-specified intervals with deliberate overlaps
        const std::string raw =
            "0 15 0 1\n5 25 1 2\n10 12 0 2\n20 40 0 1\n30 55 0 2\n"
            "35 60 1 2\n50 70 0 1\n65 66 0 2\n70 95 1 2\n80 100 0 1\n"
            "90 130 0 2\n110 140 1 2\n120 121 0 1\n135 180 0 1\n150 170 0 2\n"
            "160 200 1 2\n185 230 0 1\n210 260 0 2\n240 280 1 2\n270 300 0 1\n";
        std::istringstream in1(raw);
        const auto ds = parse_contact_trace(in1, TraceFormat::Whitespace);
        std::istringstream in2(export_contact_trace(ds));
        const auto again = parse_contact_trace(in2, TraceFormat::Csv);
        const bool round_trip =
            again == ds && export_contact_trace(again) == export_contact_trace(ds);

        bool replay = true;
        for (double t = 0.0; t <= 300.0; t += 10.0) {
            std::vector<std::pair<int, int>> brute;
            for (const auto& rec : ds.records)
                if (rec.start <= t && t < rec.end)
                    brute.emplace_back(rec.node_a, rec.node_b);
            std::sort(brute.begin(), brute.end());
            brute.erase(std::unique(brute.begin(), brute.end()), brute.end());
            replay &= (active_links(ds, t) == brute);
        }
        return std::pair{round_trip && replay,
                         std::string(round_trip ? "round trip identical" : "round trip broken") +
                             std::string(replay ? ", replay matches brute force"
                                                : ", replay mismatch")};
    });

    // 11: metric identities
    criterion(11, [] {
        const bool pass =
            overhead_ratio(10, 5).value() == 1.0 && overhead_ratio(5, 5).value() == 0.0 &&
            !overhead_ratio(7, 0).has_value() && delivery_ratio(0, 10) == 0.0 &&
            delivery_ratio(10, 10) == 1.0 && delivery_ratio(7, 20) == 0.35 &&
            mean_delivery_delay({{0.0, 10.0}}).value() == 10.0 &&
            mean_delivery_delay({{0.0, 10.0}, {0.0, 30.0}}).value() == 20.0 &&
            !mean_delivery_delay({}).has_value();
        return std::pair{pass, std::string("overhead, delivery and delay identities")};
    });

    if (failures == 0)
        std::printf("all 11 criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
