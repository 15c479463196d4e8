#ifndef CISER_MODEL_HPP
#define CISER_MODEL_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace ciser {

struct InvalidParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rate/probability parameters of the CISER compartment model.
/// Rates are per time_unit; epsilon and rho are dimensionless.
struct ModelParams {
    double beta = 0.0;     // contact rate
    double epsilon = 0.0;  // transmission reducing factor, in (0,1)
    double sigma = 0.0;    // exposed -> infected rate
    double gamma = 0.0;    // infected exit rate
    double tau = 0.0;      // carrier -> recovered rate
    double omega = 0.0;    // immunity decay (recovered -> susceptible) rate
    double mu = 0.0;       // node death rate
    double rho = 0.0;      // P(infected becomes carrier), in [0,1]
    std::string time_unit = "day";

    void validate() const;
};

/// Compartment fractions at one instant.
struct StateVector {
    double s = 0.0;
    double e = 0.0;
    double i = 0.0;
    double c = 0.0;
    double r = 0.0;

    double sum() const { return s + e + i + c + r; }
    void validate(double sum_tol = 1e-9) const;
};

struct SirState {
    double s = 0.0;
    double i = 0.0;
    double r = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<double> dead;  // accumulated mortality leak D(t) - D(0)
    ModelParams params;
    double step = 0.0;
};

struct SirTrajectory {
    std::vector<double> times;
    std::vector<SirState> states;
    ModelParams params;
    double step = 0.0;
};

/// lambda = beta * (I + epsilon C)
double force_of_infection(const StateVector& state, const ModelParams& p);

/// Right-hand side of the five CISER equations, ordered (dS,dE,dI,dC,dR).
std::array<double, 5> ciser_rhs(const StateVector& state, const ModelParams& p);

/// Mass-action SIR baseline: dS = -bIS, dI = bIS - gI, dR = gI.
std::array<double, 3> sir_rhs(const SirState& state, const ModelParams& p);

/// Fixed-step classical RK4 over [t0, t1]; the final step is shortened to
/// land exactly on t1. Throws NonFiniteState if the state leaves the
/// representable range (step too large).
Trajectory integrate_ciser(const StateVector& initial, const ModelParams& p,
                           double t0, double t1, double step);

SirTrajectory integrate_sir(const SirState& initial, const ModelParams& p,
                            double t0, double t1, double step);

/// D(t) = D0 + mu t
double dead_population(double t, double d0, const ModelParams& p);

/// CSV with header t,S,E,I,C,R, one row per step, 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace ciser

#endif
