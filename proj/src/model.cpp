#include "ciser/model.hpp"

#include <cmath>
#include <cstdio>

namespace ciser {

void ModelParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidParams(std::string(name) + " must be a finite non-negative rate");
    };
    nonneg(beta, "beta");
    nonneg(sigma, "sigma");
    nonneg(gamma, "gamma");
    nonneg(tau, "tau");
    nonneg(omega, "omega");
    nonneg(mu, "mu");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidParams("epsilon must lie in (0,1)");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw InvalidParams("rho must lie in [0,1]");
}

void StateVector::validate(double sum_tol) const {
    for (double v : {s, e, i, c, r}) {
        if (!std::isfinite(v)) throw NonFiniteState("state component is not finite");
        if (v < 0.0) throw InvalidParams("state component is negative");
    }
    if (std::fabs(sum() - 1.0) > sum_tol)
        throw InvalidParams("compartments must sum to 1");
}

double force_of_infection(const StateVector& state, const ModelParams& p) {
    return p.beta * (state.i + p.epsilon * state.c);
}

std::array<double, 5> ciser_rhs(const StateVector& x, const ModelParams& p) {
    const double lambda = p.beta * x.i + p.epsilon * p.beta * x.c;
    return {
        -lambda * x.s - p.mu * x.s + p.omega * x.r,
        lambda * x.s - (p.sigma + p.mu) * x.e,
        p.sigma * x.e - (p.gamma + p.mu) * x.i,
        p.rho * p.gamma * x.i - (p.tau + p.mu) * x.c,
        (1.0 - p.rho) * p.gamma * x.i + p.tau * x.c - (p.omega + p.mu) * x.r,
    };
}

std::array<double, 3> sir_rhs(const SirState& x, const ModelParams& p) {
    const double inf = p.beta * x.i * x.s;
    return {-inf, inf - p.gamma * x.i, p.gamma * x.i};
}

namespace {

// Negative round-off within this band is clamped to zero; anything below
// it means the integration itself failed.
constexpr double kNegClamp = -1e-12;

template <std::size_t N, typename Rhs>
std::array<double, N> rk4_step(const std::array<double, N>& y, double h, Rhs rhs) {
    auto axpy = [](const std::array<double, N>& a, double f,
                   const std::array<double, N>& b) {
        std::array<double, N> out;
        for (std::size_t j = 0; j < N; ++j) out[j] = a[j] + f * b[j];
        return out;
    };
    const auto k1 = rhs(y);
    const auto k2 = rhs(axpy(y, 0.5 * h, k1));
    const auto k3 = rhs(axpy(y, 0.5 * h, k2));
    const auto k4 = rhs(axpy(y, h, k3));
    std::array<double, N> out;
    for (std::size_t j = 0; j < N; ++j)
        out[j] = y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
}

template <std::size_t N>
void clamp_and_check(std::array<double, N>& y) {
    for (std::size_t j = 0; j < N; ++j) {
        if (!std::isfinite(y[j]))
            throw NonFiniteState("integration produced a non-finite component; reduce the step");
        if (y[j] < 0.0) {
            if (y[j] < kNegClamp)
                throw NonFiniteState("integration produced a negative component beyond round-off");
            y[j] = 0.0;
        }
    }
}

}  // namespace

Trajectory integrate_ciser(const StateVector& initial, const ModelParams& p,
                           double t0, double t1, double step) {
    p.validate();
    initial.validate();
    if (!(t1 > t0) || !(step > 0.0))
        throw InvalidParams("require t1 > t0 and step > 0");

    // The mortality leak is integrated as a sixth component so that the
    // linear invariant sum(y) = const is preserved exactly by RK4.
    auto rhs = [&p](const std::array<double, 6>& y) -> std::array<double, 6> {
        StateVector x{y[0], y[1], y[2], y[3], y[4]};
        const auto d = ciser_rhs(x, p);
        const double total = y[0] + y[1] + y[2] + y[3] + y[4];
        return {d[0], d[1], d[2], d[3], d[4], p.mu * total};
    };

    Trajectory traj;
    traj.params = p;
    traj.step = step;
    std::array<double, 6> y = {initial.s, initial.e, initial.i, initial.c, initial.r, 0.0};
    double t = t0;
    traj.times.push_back(t);
    traj.states.push_back(initial);
    traj.dead.push_back(0.0);
    while (t < t1) {
        const double h = std::min(step, t1 - t);
        y = rk4_step(y, h, rhs);
        clamp_and_check(y);
        t = (t + h >= t1) ? t1 : t + h;
        traj.times.push_back(t);
        traj.states.push_back({y[0], y[1], y[2], y[3], y[4]});
        traj.dead.push_back(y[5]);
    }
    return traj;
}

SirTrajectory integrate_sir(const SirState& initial, const ModelParams& p,
                            double t0, double t1, double step) {
    p.validate();
    if (!(t1 > t0) || !(step > 0.0))
        throw InvalidParams("require t1 > t0 and step > 0");

    auto rhs = [&p](const std::array<double, 3>& y) {
        return sir_rhs(SirState{y[0], y[1], y[2]}, p);
    };

    SirTrajectory traj;
    traj.params = p;
    traj.step = step;
    std::array<double, 3> y = {initial.s, initial.i, initial.r};
    double t = t0;
    traj.times.push_back(t);
    traj.states.push_back(initial);
    while (t < t1) {
        const double h = std::min(step, t1 - t);
        y = rk4_step(y, h, rhs);
        clamp_and_check(y);
        t = (t + h >= t1) ? t1 : t + h;
        traj.times.push_back(t);
        traj.states.push_back({y[0], y[1], y[2]});
    }
    return traj;
}

double dead_population(double t, double d0, const ModelParams& p) {
    if (t < 0.0) throw InvalidParams("t must be non-negative");
    return d0 + p.mu * t;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,S,E,I,C,R\n";
    char buf[160];
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& x = traj.states[k];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      traj.times[k], x.s, x.e, x.i, x.c, x.r);
        out += buf;
    }
    return out;
}

}  // namespace ciser
