#pragma once

// Semi-discrete second-order central-upwind finite-volume scheme with
// generalized minmod reconstruction and SSP-RK3 time stepping. The scheme is
// model-agnostic; models plug in through the HyperbolicModel concept.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "scuq/core_types.hpp"

namespace scuq {

/// Three-argument minmod: min if all positive, max if all negative, else 0.
inline double minmod3(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
    if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
    return 0.0;
}

/// Generalized minmod slope (per unit length) from three consecutive averages.
inline double limited_slope(double left, double center, double right, double theta, double dx) {
    return minmod3(theta * (center - left), 0.5 * (right - left), theta * (right - center)) / dx;
}

/// One-sided interface values of a piecewise-linear reconstruction.
///
/// Interface i (0..n_cells) is the left face of interior cell i. `minus` holds
/// the value reconstructed from cell i-1, `plus` the value from cell i. Slopes
/// are stored for every cell (ghost cells included) and are zero where the
/// stencil does not reach.
struct Reconstruction {
    Reconstruction(const Grid1D& g, int components)
        : grid(g),
          m(components),
          minus(static_cast<std::size_t>(g.n_cells() + 1) * components, 0.0),
          plus(static_cast<std::size_t>(g.n_cells() + 1) * components, 0.0),
          slopes(static_cast<std::size_t>(g.n_total()) * components, 0.0) {}

    std::size_t interfaces() const { return static_cast<std::size_t>(grid.n_cells() + 1); }

    std::span<double> minus_at(int i) { return {minus.data() + offset(i), static_cast<std::size_t>(m)}; }
    std::span<const double> minus_at(int i) const {
        return {minus.data() + offset(i), static_cast<std::size_t>(m)};
    }
    std::span<double> plus_at(int i) { return {plus.data() + offset(i), static_cast<std::size_t>(m)}; }
    std::span<const double> plus_at(int i) const { return {plus.data() + offset(i), static_cast<std::size_t>(m)}; }

    double& slope(int j, int k) { return slopes[slope_index(j, k)]; }
    double slope(int j, int k) const { return slopes[slope_index(j, k)]; }

    Grid1D grid;
    int m;
    std::vector<double> minus;
    std::vector<double> plus;
    std::vector<double> slopes;

private:
    std::size_t offset(int i) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(m); }
    std::size_t slope_index(int j, int k) const {
        return static_cast<std::size_t>(j + grid.n_ghost()) * static_cast<std::size_t>(m) + static_cast<std::size_t>(k);
    }
};

/// Componentwise generalized-minmod reconstruction. Requires populated ghost
/// cells (at least two layers).
inline Reconstruction reconstruct(const StateField& field, double theta) {
    const Grid1D& g = field.grid();
    const int n = g.n_cells();
    const int m = field.components();
    if (g.n_ghost() < 2) throw std::invalid_argument("reconstruct: need two ghost layers");
    if (!field.all_finite()) throw SolverError("reconstruct: non-finite cell average");

    Reconstruction r(g, m);
    const double dx = g.dx();
    for (int j = -1; j <= n; ++j) {
        for (int k = 0; k < m; ++k) {
            r.slope(j, k) = limited_slope(field(j - 1, k), field(j, k), field(j + 1, k), theta, dx);
        }
    }
    for (int i = 0; i <= n; ++i) {
        for (int k = 0; k < m; ++k) {
            r.minus_at(i)[static_cast<std::size_t>(k)] = field(i - 1, k) + 0.5 * dx * r.slope(i - 1, k);
            r.plus_at(i)[static_cast<std::size_t>(k)] = field(i, k) - 0.5 * dx * r.slope(i, k);
        }
    }
    return r;
}

/// One-sided local speeds at an interface: a_plus >= 0 >= a_minus.
struct LocalSpeeds {
    double a_plus = 0.0;
    double a_minus = 0.0;

    double max_abs() const { return std::max(a_plus, -a_minus); }
};

/// Interface of a hyperbolic model consumed by the solver.
///
/// `reconstruct` produces interface values; `flux` evaluates the physical
/// flux of an interface value at interface i; `local_speeds` bounds the wave
/// speeds there; `add_source` adds the cell source to the right-hand side;
/// `check_admissible` throws SolverError on an inadmissible state.
template <class M>
concept HyperbolicModel = requires(const M& model, const StateField& u, StateField& rhs, const Reconstruction& r,
                                   std::span<const double> U, std::span<double> F, int iface, double theta) {
    { model.components() } -> std::convertible_to<int>;
    { model.reconstruct(u, theta) } -> std::same_as<Reconstruction>;
    model.flux(U, iface, F);
    { model.local_speeds(U, U, iface) } -> std::same_as<LocalSpeeds>;
    model.add_source(u, r, rhs);
    model.check_admissible(u);
};

/// Central-upwind numerical flux from evaluated one-sided fluxes.
///   H = [a+ F(U-) - a- F(U+)] / (a+ - a-) + a+ a- (U+ - U-) / (a+ - a-)
/// Falls back to the arithmetic mean of the fluxes when a+ - a- < 1e-14.
inline void central_upwind_flux(std::span<const double> u_minus, std::span<const double> u_plus,
                                std::span<const double> f_minus, std::span<const double> f_plus,
                                const LocalSpeeds& s, std::span<double> out) {
    const double spread = s.a_plus - s.a_minus;
    if (spread < 1e-14) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (f_minus[k] + f_plus[k]);
        return;
    }
    const double inv = 1.0 / spread;
    const double diffusion = s.a_plus * s.a_minus * inv;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = (s.a_plus * f_minus[k] - s.a_minus * f_plus[k]) * inv + diffusion * (u_plus[k] - u_minus[k]);
    }
}

template <HyperbolicModel M>
std::vector<double> central_upwind_flux(std::span<const double> u_minus, std::span<const double> u_plus,
                                        const M& model, int iface = 0) {
    for (std::size_t k = 0; k < u_minus.size(); ++k) {
        if (!std::isfinite(u_minus[k]) || !std::isfinite(u_plus[k])) {
            throw SolverError("central_upwind_flux: non-finite interface value");
        }
    }
    const auto m = static_cast<std::size_t>(model.components());
    std::vector<double> fm(m), fp(m), out(m);
    model.flux(u_minus, iface, fm);
    model.flux(u_plus, iface, fp);
    central_upwind_flux(u_minus, u_plus, fm, fp, model.local_speeds(u_minus, u_plus, iface), out);
    return out;
}

/// Zero-order extrapolation ("free") or periodic ghost cells.
inline void fill_ghosts(StateField& u, Boundary bc) {
    const int n = u.grid().n_cells();
    const int ng = u.grid().n_ghost();
    const int m = u.components();
    for (int g = 1; g <= ng; ++g) {
        for (int k = 0; k < m; ++k) {
            if (bc == Boundary::Free) {
                u(-g, k) = u(0, k);
                u(n - 1 + g, k) = u(n - 1, k);
            } else {
                u(-g, k) = u(n - g, k);
                u(n - 1 + g, k) = u(g - 1, k);
            }
        }
    }
}

/// Largest one-sided speed over all interior interfaces. Ghost cells must be
/// populated.
template <HyperbolicModel M>
double max_wave_speed(const StateField& field, const M& model, double theta = 1.3) {
    const Reconstruction r = model.reconstruct(field, theta);
    double a = 0.0;
    for (int i = 0; i <= field.grid().n_cells(); ++i) {
        a = std::max(a, model.local_speeds(r.minus_at(i), r.plus_at(i), i).max_abs());
    }
    return a;
}

/// Semi-discrete right-hand side L(U) = -(H_{j+1/2} - H_{j-1/2})/dx + S_j on
/// interior cells. Ghost cells of `u` must be populated; ghost entries of the
/// result are zero.
template <HyperbolicModel M>
StateField spatial_operator(const StateField& u, const M& model, double theta, double* max_speed = nullptr) {
    const Grid1D& g = u.grid();
    const int n = g.n_cells();
    const auto m = static_cast<std::size_t>(model.components());
    const Reconstruction r = model.reconstruct(u, theta);

    std::vector<double> fluxes((static_cast<std::size_t>(n) + 1) * m);
    std::vector<double> fm(m), fp(m);
    double a = 0.0;
    for (int i = 0; i <= n; ++i) {
        const auto um = r.minus_at(i);
        const auto up = r.plus_at(i);
        model.flux(um, i, fm);
        model.flux(up, i, fp);
        const LocalSpeeds s = model.local_speeds(um, up, i);
        a = std::max(a, s.max_abs());
        central_upwind_flux(um, up, fm, fp, s, std::span<double>(fluxes.data() + static_cast<std::size_t>(i) * m, m));
    }
    if (max_speed != nullptr) *max_speed = a;

    StateField rhs(g, static_cast<int>(m));
    const double inv_dx = 1.0 / g.dx();
    for (int j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            rhs(j, static_cast<int>(k)) =
                -(fluxes[(static_cast<std::size_t>(j) + 1) * m + k] - fluxes[static_cast<std::size_t>(j) * m + k]) *
                inv_dx;
        }
    }
    model.add_source(u, r, rhs);
    return rhs;
}

/// Three-stage third-order SSP Runge-Kutta step. `post_stage` is applied to
/// every stage value (boundary conditions, admissibility checks).
template <class State, class Rhs, class PostStage>
State ssp_rk3_step(const State& u, double dt, Rhs&& rhs, PostStage&& post_stage) {
    if (!(dt > 0.0)) throw std::invalid_argument("ssp_rk3_step: dt must be positive");
    State u1 = u + dt * rhs(u);
    post_stage(u1);
    State u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1));
    post_stage(u2);
    State u3 = (1.0 / 3.0) * u + (2.0 / 3.0) * (u2 + dt * rhs(u2));
    post_stage(u3);
    return u3;
}

template <class State, class Rhs>
State ssp_rk3_step(const State& u, double dt, Rhs&& rhs) {
    return ssp_rk3_step(u, dt, std::forward<Rhs>(rhs), [](State&) {});
}

struct SolverSettings {
    double final_time = 0.5;
    double cfl = 0.45;
    double theta = 1.3;
    Boundary boundary = Boundary::Free;

    static SolverSettings from(const RunConfig& c) { return {c.final_time, c.cfl, c.minmod_theta, c.boundary}; }
};

struct StepInfo {
    int step = 0;
    double t = 0.0;  // time after the step
    double dt = 0.0;
    double max_speed = 0.0;
};

using StepObserver = std::function<void(const StepInfo&, const StateField&)>;

/// Advances `initial` (interior cells) from t = 0 to settings.final_time and
/// returns the final state. The observer, if any, sees every accepted step.
template <HyperbolicModel M>
StateField solve(const SolverSettings& settings, const M& model, StateField initial,
                 const StepObserver& observer = {}) {
    if (!(settings.final_time > 0.0)) throw std::invalid_argument("solve: final_time must be positive");
    if (!(settings.cfl > 0.0 && settings.cfl < 1.0)) throw std::invalid_argument("solve: cfl must lie in (0, 1)");
    if (initial.components() != model.components()) throw std::invalid_argument("solve: component mismatch");

    const double dx = initial.grid().dx();
    const double T = settings.final_time;
    auto apply_bc = [&](StateField& s) {
        fill_ghosts(s, settings.boundary);
        model.check_admissible(s);
    };
    auto rhs = [&](const StateField& s) { return spatial_operator(s, model, settings.theta); };

    StateField u = std::move(initial);
    apply_bc(u);
    double t = 0.0;
    int step = 0;
    while (t < T) {
        const double a = max_wave_speed(u, model, settings.theta);
        double dt = a > 0.0 ? settings.cfl * dx / a : T - t;
        bool last = false;
        if (t + dt >= T) {
            dt = T - t;
            last = true;
        }
        if (!last && dt < 1e-12 * dx) {
            std::ostringstream msg;
            msg << "solve: time step underflow (dt=" << dt << ") at t=" << t;
            throw SolverError(msg.str());
        }
        u = ssp_rk3_step(u, dt, rhs, apply_bc);
        if (!u.interior_finite()) {
            std::ostringstream msg;
            msg << "solve: non-finite state at t=" << t + dt;
            throw SolverError(msg.str());
        }
        t = last ? T : t + dt;
        ++step;
        if (observer) observer(StepInfo{step, t, dt, a}, u);
    }
    return u;
}

}  // namespace scuq
