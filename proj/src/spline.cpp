#include "ciser/spline.hpp"

#include <algorithm>
#include <cmath>

namespace ciser {

CubicSpline CubicSpline::fit_not_a_knot(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 4) throw TooFewPoints("need at least 4 knots");
    if (ys.size() != n) throw NonFiniteInput("xs and ys lengths differ");
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(xs[k]) || !std::isfinite(ys[k]))
            throw NonFiniteInput("non-finite knot data");
        if (k > 0 && !(xs[k] > xs[k - 1]))
            throw NonMonotonicKnots("knots must be strictly increasing");
    }

    std::vector<double> h(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) h[k] = xs[k + 1] - xs[k];

    // Solve for second derivatives M_k. Interior knots give the standard
    // continuity equations; third-derivative continuity across the second
    // and penultimate knots supplies the two boundary relations
    //   M_0     = ((h0 + h1) M_1 - h0 M_2) / h1
    //   M_{n-1} = ((h_{n-3} + h_{n-2}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}.
    // Substituting them into the first and last interior equations leaves a
    // strictly tridiagonal system in M_1 .. M_{n-2} for the Thomas algorithm
    // (the corner-folded form can place a zero pivot on a uniform grid).
    const std::size_t m_cnt = n - 2;  // interior unknowns
    std::vector<double> lower(m_cnt, 0.0), diag(m_cnt, 0.0), upper(m_cnt, 0.0),
        rhs(m_cnt, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const std::size_t j = k - 1;
        lower[j] = h[k - 1];
        diag[j] = 2.0 * (h[k - 1] + h[k]);
        upper[j] = h[k];
        rhs[j] = 6.0 * ((ys[k + 1] - ys[k]) / h[k] - (ys[k] - ys[k - 1]) / h[k - 1]);
    }
    diag[0] += h[0] * (h[0] + h[1]) / h[1];
    upper[0] -= h[0] * h[0] / h[1];
    lower[0] = 0.0;
    diag[m_cnt - 1] += h[n - 2] * (h[n - 3] + h[n - 2]) / h[n - 3];
    lower[m_cnt - 1] -= h[n - 2] * h[n - 2] / h[n - 3];
    upper[m_cnt - 1] = 0.0;

    // Thomas elimination.
    for (std::size_t j = 1; j < m_cnt; ++j) {
        const double f = lower[j] / diag[j - 1];
        diag[j] -= f * upper[j - 1];
        rhs[j] -= f * rhs[j - 1];
    }
    std::vector<double> m(n);
    m[n - 2] = rhs[m_cnt - 1] / diag[m_cnt - 1];
    for (std::size_t j = m_cnt - 1; j-- > 0;)
        m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
    m[0] = ((h[0] + h[1]) * m[1] - h[0] * m[2]) / h[1];
    m[n - 1] = ((h[n - 3] + h[n - 2]) * m[n - 2] - h[n - 2] * m[n - 3]) / h[n - 3];

    CubicSpline s;
    s.knots_ = xs;
    s.pieces_.resize(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double hk = h[k];
        s.pieces_[k] = {
            ys[k],
            (ys[k + 1] - ys[k]) / hk - hk * (2.0 * m[k] + m[k + 1]) / 6.0,
            m[k] / 2.0,
            (m[k + 1] - m[k]) / (6.0 * hk),
        };
    }
    return s;
}

std::size_t CubicSpline::locate(double x) const {
    if (x < knots_.front() || x > knots_.back())
        throw OutOfDomain("evaluation point outside the knot range");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    if (k > 0) --k;
    if (k >= pieces_.size()) k = pieces_.size() - 1;
    return k;
}

double CubicSpline::evaluate(double x) const {
    const std::size_t k = locate(x);
    const auto& p = pieces_[k];
    const double t = x - knots_[k];
    return p.p0 + t * (p.p1 + t * (p.p2 + t * p.p3));
}

double CubicSpline::derivative(double x, int order) const {
    const std::size_t k = locate(x);
    const auto& p = pieces_[k];
    const double t = x - knots_[k];
    if (order == 1) return p.p1 + t * (2.0 * p.p2 + 3.0 * t * p.p3);
    if (order == 2) return 2.0 * p.p2 + 6.0 * t * p.p3;
    throw OutOfDomain("derivative order must be 1 or 2");
}

SplinePiece CubicSpline::global_piece(std::size_t k) const {
    const auto& p = pieces_[k];
    const double a = knots_[k];
    // Expand p(x - a) in powers of x.
    return {
        p.p0 - p.p1 * a + p.p2 * a * a - p.p3 * a * a * a,
        p.p1 - 2.0 * p.p2 * a + 3.0 * p.p3 * a * a,
        p.p2 - 3.0 * p.p3 * a,
        p.p3,
    };
}

double spline_error_bound(double h, double f4_max) {
    if (!(h > 0.0)) throw OutOfDomain("h must be positive");
    if (f4_max < 0.0) throw OutOfDomain("f4_max must be non-negative");
    return 5.0 / 384.0 * h * h * h * h * f4_max;
}

double spline_mse(const CubicSpline& spline, const std::vector<double>& xs,
                  const std::vector<double>& ys) {
    double acc = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double d = spline.evaluate(xs[k]) - ys[k];
        acc += d * d;
    }
    return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

}  // namespace ciser
