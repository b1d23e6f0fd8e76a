#pragma once

// Spline interpolation in the random variable: the shape-preserving rational
// quartic spline with local tension parameters, and the interpolating cubic
// spline with not-a-knot end conditions.
//
// Rational quartic on [xi_l, xi_{l+1}], tau = (xi - xi_l) / h_l:
//
//   S = (1-tau) U_l + tau U_{l+1}
//       - h_l (1-tau) tau [(1-tau)^2 A_l + lambda_l (1-tau) tau A_l B_l + tau^2 B_l] / Q_l
//   Q_l = 1 + (1-tau) tau [(1-tau)(B_l lambda_l + mu_l) + tau (A_l lambda_l + mu_{l+1})]
//
// lambda is per interval, mu is per knot. The knot slopes are
//   S'(xi_l+) = d_l - A_l,  S'(xi_{l+1}-) = d_l + B_l   (d_l the secant),
// independent of lambda and mu, and the one-sided second derivatives are
//   S''(xi_l+) = 2 A_l (3 + mu_l) / h_l,  S''(xi_{l+1}-) = 2 B_l (3 + mu_{l+1}) / h_l.
// With the default A, B below the spline is therefore C^2 for any tension.
//
// Note: the lambda term multiplies the product A_l B_l. Whether a sum was
// intended is unknown; the product form is implemented and the shape audit
// decides whether a parameter choice is acceptable.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scuq/core_types.hpp"

namespace scuq::spline {

/// Knots, values and the derived quantities (0-based: knots 0..L-1,
/// intervals 0..L-2). `delta[k]` is defined for interior knots only.
struct KnotData {
    std::vector<double> knots;
    std::vector<double> values;
    std::vector<double> h;       // interval widths
    std::vector<double> secant;  // (U_{l+1} - U_l) / h_l
    std::vector<double> delta;   // size L, zero at the end knots
    std::vector<double> A;       // per interval
    std::vector<double> B;       // per interval

    std::size_t knot_count() const { return knots.size(); }
    std::size_t interval_count() const { return knots.size() - 1; }
};

inline void check_knots(std::span<const double> knots, std::span<const double> values, std::size_t min_count) {
    if (knots.size() != values.size()) throw std::invalid_argument("spline: knot/value count mismatch");
    if (knots.size() < min_count) {
        throw std::invalid_argument("spline: need at least " + std::to_string(min_count) + " knots");
    }
    for (std::size_t l = 0; l < knots.size(); ++l) {
        if (!std::isfinite(knots[l]) || !std::isfinite(values[l])) {
            throw std::invalid_argument("spline: non-finite knot or value");
        }
        if (l > 0 && !(knots[l] > knots[l - 1])) {
            throw std::invalid_argument("spline: knots must be strictly increasing");
        }
    }
}

inline KnotData make_knot_data(std::span<const double> knots, std::span<const double> values) {
    check_knots(knots, values, 3);
    const std::size_t L = knots.size();
    KnotData k;
    k.knots.assign(knots.begin(), knots.end());
    k.values.assign(values.begin(), values.end());
    k.h.resize(L - 1);
    k.secant.resize(L - 1);
    for (std::size_t l = 0; l + 1 < L; ++l) {
        k.h[l] = knots[l + 1] - knots[l];
        k.secant[l] = (values[l + 1] - values[l]) / k.h[l];
    }
    k.delta.assign(L, 0.0);
    for (std::size_t l = 1; l + 1 < L; ++l) {
        k.delta[l] = (k.secant[l] - k.secant[l - 1]) / (k.h[l] + k.h[l - 1]);
    }
    k.A.resize(L - 1);
    k.B.resize(L - 1);
    k.A[0] = k.h[0] * k.delta[1];
    for (std::size_t l = 1; l + 1 < L; ++l) k.A[l] = k.h[l] * k.delta[l];
    for (std::size_t l = 0; l + 2 < L; ++l) k.B[l] = k.h[l] * k.delta[l + 1];
    k.B[L - 2] = k.h[L - 2] * k.delta[L - 2];
    return k;
}

/// Per-interval A, B and lambda; per-knot mu.
struct ShapeParameters {
    std::vector<double> A;
    std::vector<double> B;
    std::vector<double> lambda;
    std::vector<double> mu;
};

/// Default coefficients with lambda = mu = 0.
inline ShapeParameters default_parameters(const KnotData& k) {
    return {k.A, k.B, std::vector<double>(k.interval_count(), 0.0), std::vector<double>(k.knot_count(), 0.0)};
}

class SPSpline {
public:
    SPSpline(KnotData data, ShapeParameters params, ShapeGoal goal = ShapeGoal::C2)
        : data_(std::move(data)), params_(std::move(params)), goal_(goal) {
        const std::size_t n = data_.interval_count();
        if (params_.A.size() != n || params_.B.size() != n || params_.lambda.size() != n ||
            params_.mu.size() != data_.knot_count()) {
            throw std::invalid_argument("SPSpline: parameter sizes do not match the knots");
        }
        for (double v : params_.lambda) {
            if (!(v >= 0.0)) throw std::invalid_argument("SPSpline: lambda must be nonnegative");
        }
        for (double v : params_.mu) {
            if (!(v >= 0.0)) throw std::invalid_argument("SPSpline: mu must be nonnegative");
        }
    }

    const KnotData& data() const { return data_; }
    const ShapeParameters& parameters() const { return params_; }
    ShapeGoal goal() const { return goal_; }
    double lower() const { return data_.knots.front(); }
    double upper() const { return data_.knots.back(); }

    double q(std::size_t l, double tau) const {
        const double s = 1.0 - tau;
        const double lam = params_.lambda[l];
        return 1.0 + s * tau *
                         (s * (params_.B[l] * lam + params_.mu[l]) + tau * (params_.A[l] * lam + params_.mu[l + 1]));
    }

    /// S on interval l at local coordinate tau in [0, 1].
    double evaluate_local(std::size_t l, double tau) const {
        const double s = 1.0 - tau;
        const double a = params_.A[l];
        const double b = params_.B[l];
        const double num = s * s * a + params_.lambda[l] * s * tau * a * b + tau * tau * b;
        const double d = data_.values[l + 1] - data_.values[l];
        const double chord = tau < 0.5 ? data_.values[l] + tau * d : data_.values[l + 1] - s * d;
        return chord - data_.h[l] * s * tau * num / q(l, tau);
    }

    /// Interval index and tau for xi. Knot hits resolve to tau = 0 of the
    /// interval on the right, except the last knot (tau = 1 of the last
    /// interval).
    std::pair<std::size_t, double> locate(double xi) const {
        if (!(xi >= lower() && xi <= upper())) {
            std::ostringstream msg;
            msg << "SPSpline: xi=" << xi << " outside [" << lower() << ", " << upper() << "]";
            throw std::out_of_range(msg.str());
        }
        const auto& kn = data_.knots;
        if (xi == kn.back()) return {kn.size() - 2, 1.0};
        const auto it = std::upper_bound(kn.begin(), kn.end(), xi);
        const auto l = static_cast<std::size_t>(it - kn.begin()) - 1;
        return {l, (xi - kn[l]) / data_.h[l]};
    }

    double operator()(double xi) const {
        const auto [l, tau] = locate(xi);
        return evaluate_local(l, tau);
    }

    /// One-sided second derivatives at the ends of interval l.
    double second_derivative_left_end(std::size_t l) const {
        return 2.0 * params_.A[l] * (3.0 + params_.mu[l]) / data_.h[l];
    }
    double second_derivative_right_end(std::size_t l) const {
        return 2.0 * params_.B[l] * (3.0 + params_.mu[l + 1]) / data_.h[l];
    }

private:
    KnotData data_;
    ShapeParameters params_;
    ShapeGoal goal_;
};

// ---------------------------------------------------------------------------
// Shape audit
// ---------------------------------------------------------------------------

struct AuditResult {
    bool passed = true;
    std::size_t interval = 0;
    double xi = 0.0;
    std::string reason;

    explicit operator bool() const { return passed; }
};

namespace detail {

inline double audit_tolerance(const KnotData& k) {
    double scale = 0.0;
    for (double v : k.values) scale = std::max(scale, std::abs(v));
    return 1e-12 * (1.0 + scale);
}

inline AuditResult fail(std::size_t l, double xi, std::string reason) { return {false, l, xi, std::move(reason)}; }

}  // namespace detail

/// Samples `points` equally spaced values per interval (ends included) and
/// checks the property named by `goal`:
///  - monotonicity: each interval is monotone in the direction of its data
///    (constant for flat data), so monotone data give a monotone interpolant;
///  - positivity: S >= 0;
///  - convexity: sample slopes never decrease across the whole span;
///  - c2: one-sided second derivatives agree at interior knots (1e-6 rel).
/// Q > 0 is checked for every goal.
inline AuditResult audit(const SPSpline& s, ShapeGoal goal, int points = 101) {
    if (points < 3) throw std::invalid_argument("audit: need at least 3 points per interval");
    const KnotData& k = s.data();
    const double tol = detail::audit_tolerance(k);
    double prev_slope = -INFINITY;
    for (std::size_t l = 0; l < k.interval_count(); ++l) {
        const double dir = k.values[l + 1] - k.values[l];
        double prev = k.values[l];
        double prev_xi = k.knots[l];
        for (int p = 0; p < points; ++p) {
            const double tau = static_cast<double>(p) / (points - 1);
            const double xi = k.knots[l] + tau * k.h[l];
            if (!(s.q(l, tau) > 0.0)) return detail::fail(l, xi, "Q <= 0");
            const double v = s.evaluate_local(l, tau);
            if (!std::isfinite(v)) return detail::fail(l, xi, "non-finite value");
            switch (goal) {
                case ShapeGoal::Positivity:
                    if (v < -tol) return detail::fail(l, xi, "negative value");
                    break;
                case ShapeGoal::Monotonicity:
                    if (p > 0) {
                        const double step = v - prev;
                        if (dir > 0.0 && step < -tol) return detail::fail(l, xi, "decreasing on increasing data");
                        if (dir < 0.0 && step > tol) return detail::fail(l, xi, "increasing on decreasing data");
                        if (dir == 0.0 && std::abs(v - k.values[l]) > tol) {
                            return detail::fail(l, xi, "non-constant on flat data");
                        }
                    }
                    break;
                case ShapeGoal::Convexity:
                    if (p > 0) {
                        const double slope = (v - prev) / (xi - prev_xi);
                        if (slope < prev_slope - tol / (xi - prev_xi)) return detail::fail(l, xi, "slope decreases");
                        prev_slope = slope;
                    }
                    break;
                case ShapeGoal::C2:
                    break;
            }
            prev = v;
            prev_xi = xi;
        }
    }
    if (goal == ShapeGoal::C2) {
        for (std::size_t l = 0; l + 1 < k.interval_count(); ++l) {
            const double left = s.second_derivative_right_end(l);
            const double right = s.second_derivative_left_end(l + 1);
            if (std::abs(left - right) > 1e-6 * std::max({1.0, std::abs(left), std::abs(right)})) {
                return detail::fail(l + 1, k.knots[l + 1], "second derivative jump");
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Tension selection
// ---------------------------------------------------------------------------

namespace detail {

/// Knot slope implied by (A, B): S'(xi_k).
inline double knot_slope(const KnotData& k, const ShapeParameters& p, std::size_t knot) {
    if (knot == 0) return k.secant[0] - p.A[0];
    return k.secant[knot - 1] + p.B[knot - 1];
}

inline void set_knot_slope(const KnotData& k, ShapeParameters& p, std::size_t knot, double m) {
    if (knot > 0) p.B[knot - 1] = m - k.secant[knot - 1];
    if (knot < k.interval_count()) p.A[knot] = k.secant[knot] - m;
}

/// Slope that keeps both neighbouring intervals monotone: zero at a sign
/// change or flat secant, otherwise same sign and |m| <= 3 min |secant|.
inline double comonotone_slope(const KnotData& k, double m, std::size_t knot) {
    const std::size_t last = k.knot_count() - 1;
    double lo_abs;
    if (knot == 0) {
        const double d = k.secant[0];
        if (d == 0.0 || m * d <= 0.0) return 0.0;
        lo_abs = std::abs(d);
    } else if (knot == last) {
        const double d = k.secant[last - 1];
        if (d == 0.0 || m * d <= 0.0) return 0.0;
        lo_abs = std::abs(d);
    } else {
        const double dl = k.secant[knot - 1];
        const double dr = k.secant[knot];
        if (dl * dr <= 0.0 || m * dl <= 0.0) return 0.0;
        lo_abs = std::min(std::abs(dl), std::abs(dr));
    }
    const double cap = 3.0 * lo_abs;
    return std::clamp(m, -cap, cap);
}

inline void limit_knot(const KnotData& k, ShapeParameters& p, std::size_t knot) {
    const double m = knot_slope(k, p, knot);
    const double limited = comonotone_slope(k, m, knot);
    if (limited != m) set_knot_slope(k, p, knot, limited);
}

}  // namespace detail

/// Closed-form shape parameters for `goal`, before any audit.
///  - monotonicity: knot slopes passed through the comonotone limiter,
///    lambda = mu = 0;
///  - positivity (nonnegative data): default A, B; per-knot
///    mu >= h max(|A|,|B|) / min(U_l, U_{l+1}) - 4; intervals touching zero
///    use comonotone slopes;
///  - convexity (convex data): default A, B, intervals with exactly one of
///    A, B zero are made linear, lambda = max(A,B) / min(A,B)^2;
///  - c2: default A, B, lambda = mu = 0.
inline ShapeParameters closed_form_parameters(const KnotData& k, ShapeGoal goal) {
    ShapeParameters p = default_parameters(k);
    const std::size_t n = k.interval_count();
    switch (goal) {
        case ShapeGoal::Monotonicity:
            for (std::size_t knot = 0; knot < k.knot_count(); ++knot) detail::limit_knot(k, p, knot);
            break;
        case ShapeGoal::Positivity: {
            for (double v : k.values) {
                if (v < 0.0) throw std::invalid_argument("select_tension: positivity requires nonnegative data");
            }
            for (std::size_t l = 0; l < n; ++l) {
                if (std::min(k.values[l], k.values[l + 1]) == 0.0) {
                    detail::limit_knot(k, p, l);
                    detail::limit_knot(k, p, l + 1);
                }
            }
            for (std::size_t l = 0; l < n; ++l) {
                const double u_min = std::min(k.values[l], k.values[l + 1]);
                if (u_min == 0.0) continue;
                const double bound = k.h[l] * std::max(std::abs(p.A[l]), std::abs(p.B[l])) / u_min - 4.0;
                if (bound > 0.0) {
                    p.mu[l] = std::max(p.mu[l], bound);
                    p.mu[l + 1] = std::max(p.mu[l + 1], bound);
                }
            }
            break;
        }
        case ShapeGoal::Convexity: {
            const double tol = detail::audit_tolerance(k);
            for (std::size_t l = 1; l + 1 < k.knot_count(); ++l) {
                if (k.delta[l] * (k.h[l] + k.h[l - 1]) < -tol) {
                    throw std::invalid_argument("select_tension: convexity requires convex data");
                }
            }
            for (std::size_t l = 0; l < n; ++l) {
                double& a = p.A[l];
                double& b = p.B[l];
                a = std::max(a, 0.0);
                b = std::max(b, 0.0);
                if ((a > 0.0) != (b > 0.0)) {
                    a = 0.0;
                    b = 0.0;
                }
                if (a > 0.0 && a != b) {
                    const double lo = std::min(a, b);
                    p.lambda[l] = std::max(a, b) / (lo * lo);
                }
            }
            break;
        }
        case ShapeGoal::C2:
            break;
    }
    return p;
}

inline constexpr int kMaxTensionDoublings = 60;

/// Closed-form parameters, verified by the audit. On failure the tension is
/// escalated (mu <- 2 mu + 1 for positivity/monotonicity/c2, lambda <-
/// 2 lambda + 1 for convexity) up to kMaxTensionDoublings times before
/// throwing.
inline ShapeParameters select_tension(const KnotData& k, ShapeGoal goal, int audit_points = 101) {
    ShapeParameters p = closed_form_parameters(k, goal);
    for (int round = 0; round <= kMaxTensionDoublings; ++round) {
        const AuditResult r = audit(SPSpline(k, p, goal), goal, audit_points);
        if (r) return p;
        if (round == kMaxTensionDoublings) {
            std::ostringstream msg;
            msg << "select_tension: audit failed after " << kMaxTensionDoublings << " escalations (" << r.reason
                << " at xi=" << r.xi << ")";
            throw std::runtime_error(msg.str());
        }
        if (goal == ShapeGoal::Convexity) {
            for (double& v : p.lambda) v = 2.0 * v + 1.0;
        } else {
            for (double& v : p.mu) v = 2.0 * v + 1.0;
        }
    }
    return p;  // unreachable
}

inline SPSpline build_sp_spline(std::span<const double> knots, std::span<const double> values,
                                ShapeGoal goal = ShapeGoal::Monotonicity, int audit_points = 101) {
    KnotData k = make_knot_data(knots, values);
    ShapeParameters p = select_tension(k, goal, audit_points);
    return SPSpline(std::move(k), std::move(p), goal);
}

// ---------------------------------------------------------------------------
// Cubic spline
// ---------------------------------------------------------------------------

namespace detail {

/// Solves a small dense system in place (Gaussian elimination, partial
/// pivoting). `a` is row-major n x n.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        }
        if (a[piv * n + col] == 0.0) throw std::runtime_error("cubic spline: singular system");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
        x[i] = s / a[i * n + i];
    }
    return x;
}

}  // namespace detail

/// Interpolating C^2 cubic spline with not-a-knot end conditions. Each piece
/// is stored as U_l + t (b_l + t (c_l + t e_l)), t = xi - xi_l.
class CubicSpline {
public:
    CubicSpline(std::span<const double> knots, std::span<const double> values) {
        check_knots(knots, values, 4);
        knots_.assign(knots.begin(), knots.end());
        values_.assign(values.begin(), values.end());
        const std::size_t L = knots_.size();
        std::vector<double> h(L - 1), d(L - 1);
        for (std::size_t l = 0; l + 1 < L; ++l) {
            h[l] = knots_[l + 1] - knots_[l];
            d[l] = (values_[l + 1] - values_[l]) / h[l];
        }
        // Unknowns: second derivatives M_0..M_{L-1}.
        std::vector<double> a(L * L, 0.0), rhs(L, 0.0);
        a[0 * L + 0] = h[1];
        a[0 * L + 1] = -(h[0] + h[1]);
        a[0 * L + 2] = h[0];
        for (std::size_t i = 1; i + 1 < L; ++i) {
            a[i * L + i - 1] = h[i - 1];
            a[i * L + i] = 2.0 * (h[i - 1] + h[i]);
            a[i * L + i + 1] = h[i];
            rhs[i] = 6.0 * (d[i] - d[i - 1]);
        }
        const std::size_t r = L - 1;
        a[r * L + L - 3] = h[L - 2];
        a[r * L + L - 2] = -(h[L - 3] + h[L - 2]);
        a[r * L + L - 1] = h[L - 3];
        const std::vector<double> M = detail::solve_dense(std::move(a), std::move(rhs));

        b_.resize(L - 1);
        c_.resize(L - 1);
        e_.resize(L - 1);
        for (std::size_t l = 0; l + 1 < L; ++l) {
            b_[l] = d[l] - h[l] * (2.0 * M[l] + M[l + 1]) / 6.0;
            c_[l] = 0.5 * M[l];
            e_[l] = (M[l + 1] - M[l]) / (6.0 * h[l]);
        }
    }

    double lower() const { return knots_.front(); }
    double upper() const { return knots_.back(); }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

    double operator()(double xi) const {
        if (!(xi >= lower() && xi <= upper())) {
            std::ostringstream msg;
            msg << "CubicSpline: xi=" << xi << " outside [" << lower() << ", " << upper() << "]";
            throw std::out_of_range(msg.str());
        }
        if (xi == knots_.back()) return values_.back();
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), xi);
        const auto l = static_cast<std::size_t>(it - knots_.begin()) - 1;
        const double t = xi - knots_[l];
        return values_[l] + t * (b_[l] + t * (c_[l] + t * e_[l]));
    }

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> b_, c_, e_;
};

inline CubicSpline build_cubic_spline(std::span<const double> knots, std::span<const double> values) {
    return CubicSpline(knots, values);
}

}  // namespace scuq::spline
