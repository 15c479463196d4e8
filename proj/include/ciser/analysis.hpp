#ifndef CISER_ANALYSIS_HPP
#define CISER_ANALYSIS_HPP

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>

#include "ciser/model.hpp"

namespace ciser {

struct SingularV : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateD : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoEndemicEquilibrium : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// New-infection (F) and transfer (V) linearizations at the message
/// propagation equilibrium, infected ordering X = (E, I, C).
struct NextGenMatrices {
    Matrix3 f;
    Matrix3 v;
};

struct ReproductionNumber {
    double closed_form;  // beta sigma/((sigma+mu)(gamma+mu)) [1 + eps rho gamma/(tau+mu)]
    double spectral;     // spectral radius of F V^-1
    ModelParams params;
};

struct EndemicEquilibrium {
    double s_bar, e_bar, i_bar, c_bar, r_bar;
    double d_constant;
    double r0;
};

struct MpeStabilityReport {
    double a1, a2, a3;                           // cubic coefficients
    std::array<bool, 4> conditions;              // Routh-Hurwitz conditions
    std::array<std::complex<double>, 4> eigenvalues;  // of the Jacobian A
    bool verdict_closed;
    bool verdict_numeric;
};

struct EndemicStabilityReport {
    std::array<bool, 4> conditions;
    bool all_hold;
};

NextGenMatrices build_ngm(const ModelParams& p);

ReproductionNumber r0(const ModelParams& p);

/// Returns the endemic point when R0 > 1, otherwise nothing. The returned
/// point satisfies the equilibrium system (with its constant mu inflow)
/// to residuals below 1e-9 per component.
std::optional<EndemicEquilibrium> endemic_equilibrium(const ModelParams& p);

/// Residuals of the four equilibrium equations at a candidate point.
std::array<double, 4> equilibrium_residuals(const ModelParams& p,
                                            const EndemicEquilibrium& eq);

MpeStabilityReport mpe_stability(const ModelParams& p);

/// The four sufficient stability conditions at the endemic point.
EndemicStabilityReport endemic_stability_conditions(const ModelParams& p,
                                                    const EndemicEquilibrium& eq);

/// |S_bar R0 - 1|; throws NoEndemicEquilibrium when R0 <= 1.
double theorem1_residual(const ModelParams& p);

/// 4x4 Jacobian of the reduced (S,E,I,C) system at the MPE, row-major.
std::array<std::array<double, 4>, 4> mpe_jacobian(const ModelParams& p);

/// trace(F V^-1); equals the spectral radius since F V^-1 has rank 1.
double ngm_trace(const ModelParams& p);

}  // namespace ciser

#endif
