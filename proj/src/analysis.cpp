#include "ciser/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ciser {

NextGenMatrices build_ngm(const ModelParams& p) {
    p.validate();
    const double c1 = p.sigma + p.mu;
    const double c2 = p.gamma + p.mu;
    const double c3 = p.tau + p.mu;
    if (c1 == 0.0 || c2 == 0.0 || c3 == 0.0)
        throw SingularV("transfer matrix V has a zero diagonal entry");
    NextGenMatrices m{};
    m.f = {{{0.0, p.beta, p.epsilon * p.beta}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
    m.v = {{{c1, 0.0, 0.0}, {-p.sigma, c2, 0.0}, {0.0, -p.rho * p.gamma, c3}}};
    return m;
}

ReproductionNumber r0(const ModelParams& p) {
    const auto ngm = build_ngm(p);
    const double c1 = p.sigma + p.mu;
    const double c2 = p.gamma + p.mu;
    const double c3 = p.tau + p.mu;

    ReproductionNumber out;
    out.params = p;
    out.closed_form =
        p.beta * p.sigma / (c1 * c2) * (1.0 + p.epsilon * p.rho * p.gamma / c3);

    Eigen::Matrix3d f, v;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            f(a, b) = ngm.f[a][b];
            v(a, b) = ngm.v[a][b];
        }
    const Eigen::Matrix3d k = f * v.inverse();
    out.spectral = k.eigenvalues().cwiseAbs().maxCoeff();
    return out;
}

std::array<double, 4> equilibrium_residuals(const ModelParams& p,
                                            const EndemicEquilibrium& eq) {
    const double lambda = p.beta * eq.i_bar + p.epsilon * p.beta * eq.c_bar;
    return {
        p.mu - lambda * eq.s_bar - p.mu * eq.s_bar + p.omega * eq.r_bar,
        lambda * eq.s_bar - (p.sigma + p.mu) * eq.e_bar,
        p.sigma * eq.e_bar - (p.gamma + p.mu) * eq.i_bar,
        p.rho * p.gamma * eq.i_bar - (p.tau + p.mu) * eq.c_bar,
    };
}

std::optional<EndemicEquilibrium> endemic_equilibrium(const ModelParams& p) {
    const double rn = r0(p).closed_form;
    if (rn <= 1.0) return std::nullopt;

    const double c1 = p.sigma + p.mu;
    const double c2 = p.gamma + p.mu;
    const double c3 = p.tau + p.mu;
    const double d = c1 * c2 * c3 + p.omega * c2 * c3 + p.omega * p.sigma * c3 +
                     p.omega * p.sigma * p.rho * p.gamma;
    if (d == 0.0) throw DegenerateD("equilibrium constant D vanished");

    // The susceptible-balance equation fixes I_bar as
    // sigma (tau+mu)(omega+mu)(1 - 1/R0) / D; the other coordinates follow
    // from the transfer relations and the unit-sum closure.
    const double k = 1.0 - 1.0 / rn;
    EndemicEquilibrium eq;
    eq.r0 = rn;
    eq.d_constant = d;
    eq.i_bar = p.sigma * c3 * (p.omega + p.mu) * k / d;
    eq.e_bar = c2 / p.sigma * eq.i_bar;
    eq.c_bar = p.rho * p.gamma / c3 * eq.i_bar;
    eq.s_bar = 1.0 / rn;
    eq.r_bar = 1.0 - (eq.s_bar + eq.e_bar + eq.i_bar + eq.c_bar);
    return eq;
}

std::array<std::array<double, 4>, 4> mpe_jacobian(const ModelParams& p) {
    const double c1 = p.sigma + p.mu;
    const double c2 = p.gamma + p.mu;
    const double c3 = p.tau + p.mu;
    const double c4 = p.omega + p.mu;
    return {{
        {-c4, -p.omega, -(p.beta + p.omega), -(p.epsilon * p.beta + p.omega)},
        {0.0, -c1, p.beta, p.epsilon * p.beta},
        {0.0, p.sigma, -c2, 0.0},
        {0.0, 0.0, p.rho * p.gamma, -c3},
    }};
}

MpeStabilityReport mpe_stability(const ModelParams& p) {
    p.validate();
    const double c1 = p.sigma + p.mu;
    const double c2 = p.gamma + p.mu;
    const double c3 = p.tau + p.mu;
    const double rn = r0(p).closed_form;

    MpeStabilityReport rep;
    rep.a1 = c1 + c2 + c3;
    rep.a2 = c1 * c2 + c1 * c3 + c2 * c3 - p.sigma * p.beta;
    rep.a3 = c1 * c2 * c3 * (1.0 - rn);
    rep.conditions = {rep.a1 > 0.0, rep.a2 > 0.0, rep.a3 > 0.0,
                      rep.a1 * rep.a2 - rep.a3 > 0.0};
    rep.verdict_closed =
        rep.conditions[0] && rep.conditions[1] && rep.conditions[2] && rep.conditions[3];

    const auto a = mpe_jacobian(p);
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = a[r][c];
    const auto ev = m.eigenvalues();
    rep.verdict_numeric = true;
    for (int k = 0; k < 4; ++k) {
        rep.eigenvalues[k] = ev(k);
        if (ev(k).real() >= 0.0) rep.verdict_numeric = false;
    }
    return rep;
}

EndemicStabilityReport endemic_stability_conditions(const ModelParams& p,
                                                    const EndemicEquilibrium& eq) {
    const double b = p.beta, eb = p.epsilon * p.beta;
    EndemicStabilityReport rep;
    rep.conditions = {
        b * (eq.s_bar + eq.i_bar) + eb * (eq.s_bar + 2.0 * eq.c_bar) + 2.0 * p.omega -
                p.mu >= 0.0,
        p.omega - b * (eq.s_bar + eq.i_bar) - eb * (eq.s_bar + eq.c_bar) + p.sigma +
                2.0 * p.mu >= 0.0,
        p.omega - p.sigma + 2.0 * (p.gamma + p.mu) - p.rho * p.gamma >= 0.0,
        p.omega - p.rho * p.gamma + 2.0 * (p.tau + p.mu) >= 0.0,
    };
    rep.all_hold =
        rep.conditions[0] && rep.conditions[1] && rep.conditions[2] && rep.conditions[3];
    return rep;
}

double ngm_trace(const ModelParams& p) {
    const auto ngm = build_ngm(p);
    Eigen::Matrix3d f, v;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            f(a, b) = ngm.f[a][b];
            v(a, b) = ngm.v[a][b];
        }
    return (f * v.inverse()).trace();
}

double theorem1_residual(const ModelParams& p) {
    const auto eq = endemic_equilibrium(p);
    if (!eq) throw NoEndemicEquilibrium("no endemic equilibrium when R0 <= 1");
    return std::fabs(eq->s_bar * eq->r0 - 1.0);
}

}  // namespace ciser
