#ifndef CISER_TESTS_COMMON_HPP
#define CISER_TESTS_COMMON_HPP

#include "ciser/model.hpp"

namespace ciser::testing {

// Reference parameter set for the numerical-analysis workflows (rates per day).
inline ModelParams reference_params() {
    ModelParams p;
    p.beta = 1.0335e-5;
    p.epsilon = 0.084;
    p.rho = 0.95;
    p.gamma = 0.0714;
    p.sigma = 0.0714;
    p.omega = 0.0588;
    p.tau = 5.4795e-4;
    p.mu = 6.8493e-5;
    p.time_unit = "day";
    return p;
}

inline StateVector reference_initial() { return {0.86, 0.01, 0.02, 0.03, 0.08}; }

// Parameter set with a clearly supercritical reproduction number.
inline ModelParams endemic_params() {
    ModelParams p;
    p.beta = 2.0;
    p.epsilon = 0.5;
    p.sigma = 1.0;
    p.gamma = 1.0;
    p.tau = 0.5;
    p.omega = 0.5;
    p.mu = 0.01;
    p.rho = 0.5;
    return p;
}

}  // namespace ciser::testing

#endif
