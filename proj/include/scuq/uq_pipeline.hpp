#pragma once

// Stochastic collocation pipeline: solve at every collocation node, slice
// the final states per spatial cell, interpolate in xi and compute moments.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "scuq/core_types.hpp"
#include "scuq/fv_solver.hpp"
#include "scuq/gpc.hpp"
#include "scuq/splines.hpp"

namespace scuq {

enum class Method { Gpc, Cubic, SpSpline };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::Gpc: return "gpc";
        case Method::Cubic: return "cubic";
        case Method::SpSpline: return "sp_spline";
    }
    return "?";
}

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Exceptions are
/// collected per index; the one with the lowest index is rethrown.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = count;
    std::exception_ptr err;
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------
// Collocation nodes and ensembles
// ---------------------------------------------------------------------------

struct CollocationNodes {
    std::vector<double> nodes;
    std::optional<std::vector<double>> weights;
};

/// Gauss-Legendre nodes with weights, or L equally spaced nodes on [-1, 1]
/// including both endpoints (no weights).
inline CollocationNodes collocation_nodes(NodeRule rule, int L) {
    if (L < 2) throw std::invalid_argument("collocation_nodes: L must be >= 2");
    if (rule == NodeRule::Gauss) {
        gpc::QuadratureRule q = gpc::gauss_legendre_rule(L);
        return {std::move(q.nodes), std::move(q.weights)};
    }
    std::vector<double> nodes(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) nodes[static_cast<std::size_t>(l)] = -1.0 + 2.0 * l / (L - 1);
    nodes.back() = 1.0;
    return {std::move(nodes), std::nullopt};
}

/// A deterministic problem instance: the model and the initial cell averages.
template <class M>
struct Realization {
    M model;
    StateField initial;
};

template <class Factory>
using RealizationModel = decltype(std::declval<Factory&>()(0.0).model);

/// Solves the realization produced by `factory(xi)` up to the final time.
template <class Factory>
StateField solve_realization(const SolverSettings& settings, Factory&& factory, double xi,
                             const StepObserver& observer = {}) {
    auto r = factory(xi);
    return solve(settings, r.model, std::move(r.initial), observer);
}

/// L independent deterministic solves. States are stored in node order
/// regardless of scheduling; any failure aborts with the offending node.
template <class Factory>
CollocationEnsemble run_ensemble(const SolverSettings& settings, const CollocationNodes& nodes, Factory&& factory,
                                 int jobs = 1) {
    const std::size_t L = nodes.nodes.size();
    std::vector<std::optional<StateField>> states(L);
    parallel_for(L, jobs, [&](std::size_t l) {
        const double xi = nodes.nodes[l];
        try {
            states[l] = solve_realization(settings, factory, xi);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "realization " << l << " (xi=" << xi << ") failed: " << e.what();
            throw SolverError(msg.str());
        }
    });
    std::vector<StateField> out;
    out.reserve(L);
    for (auto& s : states) out.push_back(std::move(*s));
    return CollocationEnsemble(nodes.nodes, nodes.weights, std::move(out));
}

// ---------------------------------------------------------------------------
// Slices
// ---------------------------------------------------------------------------

/// Nodal values at one spatial cell and component, in node order.
struct XiSlice {
    int cell = 0;
    int component = 0;
    std::vector<double> values;
};

inline XiSlice slice(const CollocationEnsemble& e, int cell, int component) {
    if (cell < 0 || cell >= e.grid().n_cells()) throw std::out_of_range("slice: cell index out of range");
    if (component < 0 || component >= e.components()) throw std::out_of_range("slice: component out of range");
    XiSlice s{cell, component, std::vector<double>(e.size())};
    for (std::size_t l = 0; l < e.size(); ++l) s.values[l] = e.states()[l](cell, component);
    return s;
}

// ---------------------------------------------------------------------------
// Interpolants
// ---------------------------------------------------------------------------

/// Interpolant of one slice in xi: gPC expansion, cubic spline or
/// shape-preserving spline.
class SliceInterpolant {
public:
    explicit SliceInterpolant(gpc::Expansion e) : impl_(std::move(e)) {}
    explicit SliceInterpolant(spline::CubicSpline s) : impl_(std::move(s)) {}
    explicit SliceInterpolant(spline::SPSpline s) : impl_(std::move(s)) {}

    double operator()(double xi) const {
        return std::visit(
            [xi](const auto& f) -> double {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, gpc::Expansion>) {
                    return gpc::evaluate(f, xi);
                } else {
                    return f(xi);
                }
            },
            impl_);
    }

    const gpc::Expansion* expansion() const { return std::get_if<gpc::Expansion>(&impl_); }
    const spline::SPSpline* sp_spline() const { return std::get_if<spline::SPSpline>(&impl_); }
    const spline::CubicSpline* cubic() const { return std::get_if<spline::CubicSpline>(&impl_); }

private:
    std::variant<gpc::Expansion, spline::CubicSpline, spline::SPSpline> impl_;
};

struct InterpolationOptions {
    ShapeGoal shape_goal = ShapeGoal::Monotonicity;
    int audit_points = 101;
    int quadrature_points = 10;
};

inline SliceInterpolant interpolate(const std::vector<double>& nodes, const std::optional<std::vector<double>>& weights,
                                    std::span<const double> values, Method method,
                                    const InterpolationOptions& opt = {}) {
    switch (method) {
        case Method::Gpc: {
            if (!weights) throw std::invalid_argument("gpc interpolation needs Gauss weights");
            const gpc::QuadratureRule rule{nodes, *weights};
            return SliceInterpolant(
                gpc::transform(values, rule, gpc::OrthonormalBasis(static_cast<int>(nodes.size()) - 1)));
        }
        case Method::Cubic:
            return SliceInterpolant(spline::build_cubic_spline(nodes, values));
        case Method::SpSpline:
            return SliceInterpolant(spline::build_sp_spline(nodes, values, opt.shape_goal, opt.audit_points));
    }
    throw std::logic_error("interpolate: unknown method");
}

inline SliceInterpolant interpolate(const CollocationEnsemble& e, const XiSlice& s, Method method,
                                    const InterpolationOptions& opt = {}) {
    return interpolate(e.nodes(), e.weights(), s.values, method, opt);
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

/// Per-cell, per-component mean / variance / standard deviation.
struct MomentField {
    Method method = Method::Gpc;
    int n_cells = 0;
    int components = 0;
    std::string quadrature;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> stddev;

    MomentField(Method m, int cells, int comps, std::string quad)
        : method(m),
          n_cells(cells),
          components(comps),
          quadrature(std::move(quad)),
          mean(static_cast<std::size_t>(cells) * comps),
          variance(mean.size()),
          stddev(mean.size()) {}

    std::size_t index(int cell, int k) const {
        return static_cast<std::size_t>(cell) * static_cast<std::size_t>(components) + static_cast<std::size_t>(k);
    }

    void set(int cell, int k, double mu, double var) {
        const std::size_t i = index(cell, k);
        mean[i] = mu;
        variance[i] = std::max(var, 0.0);
        stddev[i] = std::sqrt(variance[i]);
    }

    std::vector<double> mean_of(int k) const { return extract(mean, k); }
    std::vector<double> stddev_of(int k) const { return extract(stddev, k); }

private:
    std::vector<double> extract(const std::vector<double>& v, int k) const {
        std::vector<double> out(static_cast<std::size_t>(n_cells));
        for (int j = 0; j < n_cells; ++j) out[static_cast<std::size_t>(j)] = v[index(j, k)];
        return out;
    }
};

/// gPC moments: per cell transform with the ensemble's Gauss rule, then
/// mean = U_hat_0 and variance = sum of the remaining squared coefficients.
inline MomentField moments_from_gpc(const CollocationEnsemble& e, int jobs = 1) {
    if (!e.weights()) throw std::invalid_argument("moments_from_gpc: ensemble has no quadrature weights");
    const int n = e.grid().n_cells();
    const int m = e.components();
    MomentField out(Method::Gpc, n, m, "gauss-legendre L=" + std::to_string(e.size()));
    const gpc::QuadratureRule rule{e.nodes(), *e.weights()};
    const gpc::OrthonormalBasis basis(static_cast<int>(e.size()) - 1);
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t j) {
        for (int k = 0; k < m; ++k) {
            const XiSlice s = slice(e, static_cast<int>(j), k);
            const gpc::Moments mom = gpc::moments(gpc::transform(s.values, rule, basis));
            out.set(static_cast<int>(j), k, mom.mean, mom.variance);
        }
    });
    return out;
}

/// Mean and variance of a spline interpolant against the uniform density,
/// with a fixed Gauss-Legendre rule on every knot interval. The variance is
/// accumulated about the mean so nearly constant slices do not cancel.
inline std::pair<double, double> spline_moments(const SliceInterpolant& f, const std::vector<double>& knots,
                                                const gpc::QuadratureRule& rule) {
    const std::size_t nq = rule.nodes.size();
    std::vector<double> values((knots.size() - 1) * nq);
    double mean = 0.0;
    for (std::size_t l = 0; l + 1 < knots.size(); ++l) {
        const double half = 0.5 * (knots[l + 1] - knots[l]);
        const double mid = 0.5 * (knots[l + 1] + knots[l]);
        double s = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            double v;
            if (const auto* sp = f.sp_spline()) {
                v = sp->evaluate_local(l, 0.5 * (rule.nodes[q] + 1.0));
            } else {
                v = f(mid + half * rule.nodes[q]);
            }
            values[l * nq + q] = v;
            s += rule.weights[q] * v;
        }
        // Weights already carry the 1/2 density, so int_a^b f / 2 = half * sum.
        mean += half * s;
    }
    double variance = 0.0;
    for (std::size_t l = 0; l + 1 < knots.size(); ++l) {
        const double half = 0.5 * (knots[l + 1] - knots[l]);
        double s = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            const double d = values[l * nq + q] - mean;
            s += rule.weights[q] * d * d;
        }
        variance += half * s;
    }
    return {mean, variance};
}

/// Spline moments: mean = int S nu, variance = int (S - mean)^2 nu.
inline MomentField moments_from_spline(const CollocationEnsemble& e, Method kind, const InterpolationOptions& opt = {},
                                       int jobs = 1) {
    if (kind == Method::Gpc) throw std::invalid_argument("moments_from_spline: not a spline method");
    if (e.nodes().front() != e.random_space().lower() || e.nodes().back() != e.random_space().upper()) {
        throw std::invalid_argument("moments_from_spline: nodes must span the support [-1, 1]");
    }
    const int n = e.grid().n_cells();
    const int m = e.components();
    const gpc::QuadratureRule rule = gpc::gauss_legendre_rule(opt.quadrature_points);
    MomentField out(kind, n, m, "gauss-legendre " + std::to_string(opt.quadrature_points) + " per interval");
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t j) {
        for (int k = 0; k < m; ++k) {
            const XiSlice s = slice(e, static_cast<int>(j), k);
            try {
                const SliceInterpolant f = interpolate(e, s, kind, opt);
                const auto [mean, var] = spline_moments(f, e.nodes(), rule);
                out.set(static_cast<int>(j), k, mean, var);
            } catch (const std::exception& ex) {
                throw std::runtime_error("moments_from_spline: cell " + std::to_string(j) + ", component " +
                                         std::to_string(k) + ": " + ex.what());
            }
        }
    });
    return out;
}

/// Interpolated values on a (cell, xi) grid, row-major over cells then xi.
/// Only every `cell_stride`-th cell is included.
inline std::vector<double> evaluate_surface(const CollocationEnsemble& e, int component, Method method,
                                            const std::vector<double>& xi_grid, const InterpolationOptions& opt = {},
                                            int jobs = 1, int cell_stride = 1) {
    const int n = e.grid().n_cells();
    const int stride = std::max(cell_stride, 1);
    const std::size_t rows = static_cast<std::size_t>((n + stride - 1) / stride);
    std::vector<double> out(rows * xi_grid.size());
    parallel_for(rows, jobs, [&](std::size_t r) {
        const int j = static_cast<int>(r) * stride;
        const SliceInterpolant f = interpolate(e, slice(e, j, component), method, opt);
        for (std::size_t q = 0; q < xi_grid.size(); ++q) out[r * xi_grid.size() + q] = f(xi_grid[q]);
    });
    return out;
}

inline std::vector<double> uniform_points(double a, double b, int count) {
    if (count < 2) throw std::invalid_argument("uniform_points: need at least two points");
    std::vector<double> p(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) p[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
    p.back() = b;
    return p;
}

}  // namespace scuq
