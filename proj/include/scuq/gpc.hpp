#pragma once

// Generalized polynomial chaos for a uniform random variable on [-1, 1]:
// orthonormal Legendre basis, Gauss-Legendre collocation, discrete transform,
// evaluation and moments.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scuq::gpc {

/// Classical Legendre P_n(x) and its derivative by the three-term recurrence.
struct LegendreValue {
    double p;
    double dp;
};

inline LegendreValue legendre(int n, double x) {
    if (n == 0) return {1.0, 0.0};
    double p_prev = 1.0;
    double p = x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
        p_prev = p;
        p = next;
    }
    double dp;
    if (std::abs(x) < 1.0) {
        dp = n * (x * p - p_prev) / (x * x - 1.0);
    } else {
        // P_n'(+-1) = (+-1)^{n+1} n (n+1) / 2
        dp = 0.5 * n * (n + 1.0) * ((x > 0.0 || n % 2 == 1) ? 1.0 : -1.0);
    }
    return {p, dp};
}

/// Phi_i = sqrt(2i + 1) P_i, orthonormal against the density 1/2 on [-1, 1].
class OrthonormalBasis {
public:
    explicit OrthonormalBasis(int degree) : degree_(degree) {
        if (degree < 0) throw std::invalid_argument("OrthonormalBasis: negative degree");
    }

    int degree() const { return degree_; }
    std::size_t size() const { return static_cast<std::size_t>(degree_ + 1); }

    double phi(int i, double xi) const { return std::sqrt(2.0 * i + 1.0) * legendre(i, xi).p; }

    /// Phi_0..Phi_N at xi via one recurrence sweep.
    std::vector<double> evaluate_all(double xi) const {
        std::vector<double> out(size());
        double p_prev = 1.0;
        double p = xi;
        out[0] = 1.0;
        if (degree_ >= 1) out[1] = std::sqrt(3.0) * xi;
        for (int k = 1; k < degree_; ++k) {
            const double next = ((2.0 * k + 1.0) * xi * p - k * p_prev) / (k + 1.0);
            p_prev = p;
            p = next;
            out[static_cast<std::size_t>(k + 1)] = std::sqrt(2.0 * k + 3.0) * p;
        }
        return out;
    }

private:
    int degree_;
};

struct QuadratureRule {
    std::vector<double> nodes;    // increasing
    std::vector<double> weights;  // sum to 1 (density included)
};

/// L-point Gauss-Legendre rule against the uniform density on [-1, 1].
/// Roots of P_L by Newton iteration from Chebyshev-type guesses; weights
/// 2 / ((1 - x^2) P_L'(x)^2), scaled by 1/2.
inline QuadratureRule gauss_legendre_rule(int L) {
    if (L < 1) throw std::invalid_argument("gauss_legendre_rule: L must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(L));
    rule.weights.resize(static_cast<std::size_t>(L));
    const int half = (L + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (L + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const LegendreValue v = legendre(L, x);
            const double dx = v.p / v.dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double dp = legendre(L, x).dp;
        const double w = 1.0 / ((1.0 - x * x) * dp * dp);  // (2 / ...) * 1/2
        // Descending guesses; store mirrored so nodes increase.
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(L - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(L - 1 - i)] = w;
    }
    if (L % 2 == 1) rule.nodes[static_cast<std::size_t>(L / 2)] = 0.0;
    return rule;
}

/// Coefficients U_hat_i (i = 0..N) of one scalar quantity.
struct Expansion {
    std::vector<double> coefficients;

    std::size_t size() const { return coefficients.size(); }
};

/// U_hat_i = sum_l U_l Phi_i(xi_l) w_l with L = N + 1 Gauss nodes.
inline Expansion transform(std::span<const double> values, const QuadratureRule& rule, const OrthonormalBasis& basis) {
    if (values.size() != rule.nodes.size() || rule.nodes.size() != basis.size()) {
        throw std::invalid_argument("gpc::transform: need L = N + 1 nodal values (got L=" +
                                    std::to_string(values.size()) + ", N=" + std::to_string(basis.degree()) + ")");
    }
    Expansion e{std::vector<double>(basis.size(), 0.0)};
    for (std::size_t l = 0; l < values.size(); ++l) {
        const std::vector<double> phi = basis.evaluate_all(rule.nodes[l]);
        const double uw = values[l] * rule.weights[l];
        for (std::size_t i = 0; i < phi.size(); ++i) e.coefficients[i] += uw * phi[i];
    }
    return e;
}

inline double evaluate(const Expansion& e, double xi) {
    if (!(xi >= -1.0 && xi <= 1.0)) throw std::out_of_range("gpc::evaluate: xi outside [-1, 1]");
    if (e.coefficients.empty()) return 0.0;
    const OrthonormalBasis basis(static_cast<int>(e.size()) - 1);
    const std::vector<double> phi = basis.evaluate_all(xi);
    double s = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) s += e.coefficients[i] * phi[i];
    return s;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double stddev = 0.0;
};

/// Mean = U_hat_0, variance = sum_{i >= 1} U_hat_i^2 (clamped at zero).
inline Moments moments(const Expansion& e) {
    Moments m;
    if (e.coefficients.empty()) return m;
    m.mean = e.coefficients[0];
    double v = 0.0;
    for (std::size_t i = 1; i < e.size(); ++i) v += e.coefficients[i] * e.coefficients[i];
    m.variance = std::max(v, 0.0);
    m.stddev = std::sqrt(m.variance);
    return m;
}

}  // namespace scuq::gpc
