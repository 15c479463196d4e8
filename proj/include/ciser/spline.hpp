#ifndef CISER_SPLINE_HPP
#define CISER_SPLINE_HPP

#include <stdexcept>
#include <vector>

namespace ciser {

struct TooFewPoints : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonMonotonicKnots : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Piecewise cubic p0 + p1 t + p2 t^2 + p3 t^3 in local coordinates
/// t = x - knot[k].
struct SplinePiece {
    double p0, p1, p2, p3;
};

/// Not-a-knot cubic interpolant. Immutable after fit; safe for concurrent
/// evaluation.
class CubicSpline {
  public:
    static CubicSpline fit_not_a_knot(const std::vector<double>& xs,
                                      const std::vector<double>& ys);

    /// Throws OutOfDomain outside [first knot, last knot].
    double evaluate(double x) const;
    double derivative(double x, int order) const;  // order in {1, 2}

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<SplinePiece>& pieces() const { return pieces_; }

    /// Coefficients of piece k rebased to global x (expanded shift).
    SplinePiece global_piece(std::size_t k) const;

  private:
    std::size_t locate(double x) const;
    std::vector<double> knots_;
    std::vector<SplinePiece> pieces_;
};

/// (5/384) h^4 max|f''''|, the not-a-knot interpolation error bound.
double spline_error_bound(double h, double f4_max);

struct FitReport {
    double mse;
    double error_bound;
    double h;  // max knot spacing
};

/// Mean squared residual of the spline against (xs, ys).
double spline_mse(const CubicSpline& spline, const std::vector<double>& xs,
                  const std::vector<double>& ys);

}  // namespace ciser

#endif
