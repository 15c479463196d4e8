#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "ciser/analysis.hpp"
#include "ciser/sim/rng.hpp"
#include "common.hpp"

using namespace ciser;
using namespace ciser::testing;

namespace {

// Reproducible random parameter draws: rates log-uniform in [1e-5, 10],
// epsilon in (0,1), rho in [0,1].
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

}  // namespace

TEST_CASE("next generation matrices at the MPE") {
    const auto m = build_ngm(reference_params());
    CHECK(m.v[0][0] == doctest::Approx(0.0714 + 6.8493e-5).epsilon(1e-12));
    CHECK(m.v[1][1] == doctest::Approx(0.0714685).epsilon(1e-6));
    CHECK(m.v[2][2] == doctest::Approx(6.16443e-4).epsilon(1e-5));
    CHECK(m.v[1][0] == doctest::Approx(-0.0714));
    CHECK(m.f[0][1] == doctest::Approx(1.0335e-5));
    CHECK(m.f[0][2] == doctest::Approx(0.084 * 1.0335e-5));

    ModelParams no_beta = reference_params();
    no_beta.beta = 0.0;
    const auto z = build_ngm(no_beta);
    for (const auto& row : z.f)
        for (double v : row) CHECK(v == 0.0);

    ModelParams no_rho = reference_params();
    no_rho.rho = 0.0;
    CHECK(build_ngm(no_rho).v[2][1] == 0.0);
}

TEST_CASE("reproduction number closed form vs spectral radius") {
    const auto rn = r0(reference_params());
    CHECK(rn.closed_form == doctest::Approx(1.48e-3).epsilon(0.01));
    CHECK(rn.closed_form < 1.0);
    CHECK(std::fabs(rn.closed_form - rn.spectral) / rn.closed_form <= 1e-10);
    CHECK(std::fabs(rn.closed_form - ngm_trace(reference_params())) /
              rn.closed_form <=
          1e-10);

    // R0 -> 0 as beta -> 0, and monotone in beta
    ModelParams p = reference_params();
    double prev = rn.closed_form;
    for (double scale : {0.5, 0.1, 0.01, 1e-6}) {
        ModelParams q = reference_params();
        q.beta *= scale;
        const double v = r0(q).closed_form;
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-8);

    // carrier branch removed: R0 = beta/gamma at epsilon->0, mu=0
    p = reference_params();
    p.epsilon = 1e-300;
    p.mu = 0.0;
    CHECK(r0(p).closed_form == doctest::Approx(p.beta / p.gamma).epsilon(1e-10));
}

TEST_CASE("reproduction number equivalence over random draws") {
    Rng rng(20240817, 0);
    for (int k = 0; k < 1000; ++k) {
        const ModelParams p = random_params(rng);
        const auto rn = r0(p);
        CHECK(std::fabs(rn.closed_form - rn.spectral) / rn.closed_form <= 1e-10);
        CHECK(std::fabs(rn.closed_form - ngm_trace(p)) / rn.closed_form <= 1e-10);
    }
}

TEST_CASE("endemic equilibrium threshold dichotomy") {
    CHECK_FALSE(endemic_equilibrium(reference_params()).has_value());

    const auto eq = endemic_equilibrium(endemic_params());
    REQUIRE(eq.has_value());
    CHECK(eq->s_bar == doctest::Approx(1.0 / eq->r0).epsilon(1e-14));
    const double total = eq->s_bar + eq->e_bar + eq->i_bar + eq->c_bar + eq->r_bar;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : {eq->s_bar, eq->e_bar, eq->i_bar, eq->c_bar, eq->r_bar}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (double r : equilibrium_residuals(endemic_params(), *eq))
        CHECK(std::fabs(r) <= 1e-9);
}

TEST_CASE("endemic equilibrium scaled to R0 = 4 has S_bar = 1/4") {
    ModelParams p = reference_params();
    p.beta *= 4.0 / r0(p).closed_form;
    const auto rn = r0(p);
    CHECK(rn.closed_form == doctest::Approx(4.0).epsilon(1e-12));
    const auto eq = endemic_equilibrium(p);
    REQUIRE(eq.has_value());
    CHECK(eq->s_bar == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("theorem-1 residual") {
    ModelParams p = reference_params();
    p.beta *= 2.0 / r0(p).closed_form;
    CHECK(theorem1_residual(p) <= 1e-12);

    Rng rng(99, 7);
    double worst = 0.0;
    int hits = 0;
    for (int k = 0; k < 1000; ++k) {
        const ModelParams q = random_params(rng);
        if (r0(q).closed_form <= 1.0) continue;
        worst = std::max(worst, theorem1_residual(q));
        ++hits;
    }
    CHECK(hits > 50);
    CHECK(worst <= 1e-10);

    ModelParams sub = reference_params();
    CHECK_THROWS_AS(theorem1_residual(sub), NoEndemicEquilibrium);
}

TEST_CASE("mpe stability on the tabulated parameters") {
    const auto rep = mpe_stability(reference_params());
    CHECK(rep.verdict_closed);
    CHECK(rep.verdict_numeric);

    // -(omega+mu) is always an eigenvalue of A
    const double c4 = reference_params().omega + reference_params().mu;
    double best = 1e9;
    for (const auto& ev : rep.eigenvalues)
        best = std::min(best, std::abs(ev - std::complex<double>(-c4, 0.0)));
    CHECK(best <= 1e-10);
}

TEST_CASE("mpe instability above threshold") {
    ModelParams p = reference_params();
    p.beta *= 2.0 / r0(p).closed_form;  // R0 = 2
    const auto rep = mpe_stability(p);
    CHECK(rep.a3 < 0.0);
    CHECK_FALSE(rep.conditions[2]);
    CHECK_FALSE(rep.verdict_closed);
    CHECK_FALSE(rep.verdict_numeric);
}

TEST_CASE("closed-form and numeric stability verdicts agree over draws") {
    Rng rng(4242, 3);
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
        const ModelParams p = random_params(rng);
        if (std::fabs(r0(p).closed_form - 1.0) <= 1e-3) continue;
        const auto rep = mpe_stability(p);
        CHECK(rep.verdict_closed == rep.verdict_numeric);

        const double c4 = p.omega + p.mu;
        double best = 1e9;
        for (const auto& ev : rep.eigenvalues)
            best = std::min(best, std::abs(ev - std::complex<double>(-c4, 0.0)));
        CHECK(best <= 1e-10 * std::max(1.0, c4));
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("endemic stability conditions") {
    ModelParams p = endemic_params();
    const auto eq = endemic_equilibrium(p);
    REQUIRE(eq.has_value());
    const auto rep = endemic_stability_conditions(p, *eq);
    // condition 1 is a sum of non-negative terms plus 2w - mu, positive here
    CHECK(rep.conditions[0]);

    // with rho = 0 and sigma = 0 conditions 3 and 4 reduce to sums of
    // non-negative rates
    ModelParams weak = endemic_params();
    weak.rho = 0.0;
    weak.sigma = 0.0;
    const auto rep2 = endemic_stability_conditions(weak, *eq);
    CHECK(rep2.conditions[2]);
    CHECK(rep2.conditions[3]);
}

TEST_CASE("long-horizon integration approaches the endemic point") {
    const ModelParams p = endemic_params();
    const auto eq = endemic_equilibrium(p);
    REQUIRE(eq.has_value());

    // Test-only RK4 on the equilibrium-system dynamics (the variant with
    // the constant mu inflow that the endemic point satisfies).
    auto rhs = [&](const std::array<double, 5>& y) -> std::array<double, 5> {
        const double lam = p.beta * y[2] + p.epsilon * p.beta * y[3];
        return {p.mu - lam * y[0] - p.mu * y[0] + p.omega * y[4],
                lam * y[0] - (p.sigma + p.mu) * y[1],
                p.sigma * y[1] - (p.gamma + p.mu) * y[2],
                p.rho * p.gamma * y[2] - (p.tau + p.mu) * y[3],
                (1.0 - p.rho) * p.gamma * y[2] + p.tau * y[3] -
                    (p.omega + p.mu) * y[4]};
    };
    std::array<double, 5> y = {0.86, 0.01, 0.02, 0.03, 0.08};
    const double h = 0.01;
    auto step = [&]() {
        auto axpy = [&](const std::array<double, 5>& a, double f,
                        const std::array<double, 5>& b) {
            std::array<double, 5> out;
            for (int j = 0; j < 5; ++j) out[j] = a[j] + f * b[j];
            return out;
        };
        const auto k1 = rhs(y);
        const auto k2 = rhs(axpy(y, h / 2, k1));
        const auto k3 = rhs(axpy(y, h / 2, k2));
        const auto k4 = rhs(axpy(y, h, k3));
        for (int j = 0; j < 5; ++j)
            y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    };
    auto dist = [&]() {
        return std::fabs(y[0] - eq->s_bar) + std::fabs(y[1] - eq->e_bar) +
               std::fabs(y[2] - eq->i_bar) + std::fabs(y[3] - eq->c_bar) +
               std::fabs(y[4] - eq->r_bar);
    };
    const double initial = dist();
    for (int k = 0; k < 50000; ++k) step();  // t = 500
    CHECK(endemic_stability_conditions(p, *eq).all_hold ==
          (dist() < 1e-3 * initial));
    CHECK(dist() < initial);
}
