#pragma once

// Concrete hyperbolic models: inviscid Burgers and the Saint-Venant system
// with bottom topography. The shallow-water state is stored as (w, hu) with
// w = h + Z the water surface.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "scuq/core_types.hpp"
#include "scuq/fv_solver.hpp"

namespace scuq {

// ---------------------------------------------------------------------------
// Burgers
// ---------------------------------------------------------------------------

inline double burgers_flux(double u) { return 0.5 * u * u; }

class BurgersModel {
public:
    int components() const { return 1; }
    std::vector<std::string> component_names() const { return {"u"}; }

    Reconstruction reconstruct(const StateField& u, double theta) const { return scuq::reconstruct(u, theta); }

    void flux(std::span<const double> U, int /*iface*/, std::span<double> F) const { F[0] = burgers_flux(U[0]); }

    LocalSpeeds local_speeds(std::span<const double> um, std::span<const double> up, int /*iface*/) const {
        return {std::max({um[0], up[0], 0.0}), std::min({um[0], up[0], 0.0})};
    }

    void add_source(const StateField&, const Reconstruction&, StateField&) const {}
    void check_admissible(const StateField&) const {}
};

// ---------------------------------------------------------------------------
// Topography
// ---------------------------------------------------------------------------

/// Bottom elevation sampled at cell interfaces (ghost cells included) and
/// treated as continuous piecewise linear. Cell values are interface
/// averages.
class Topography {
public:
    Topography(const Grid1D& grid, const std::function<double(double)>& bottom) : grid_(grid) {
        const int ng = grid.n_ghost();
        faces_.resize(static_cast<std::size_t>(grid.n_total() + 1));
        for (int i = -ng; i <= grid.n_cells() + ng; ++i) {
            faces_[static_cast<std::size_t>(i + ng)] = bottom(grid.face(i));
        }
    }

    static Topography flat(const Grid1D& grid, double level = 0.0) {
        return Topography(grid, [level](double) { return level; });
    }

    const Grid1D& grid() const { return grid_; }

    /// Z at face i (left face of cell i); ghost faces allowed.
    double at_face(int i) const { return faces_[static_cast<std::size_t>(i + grid_.n_ghost())]; }
    double at_cell(int j) const { return 0.5 * (at_face(j) + at_face(j + 1)); }

    Topography shifted(double c) const {
        Topography t = *this;
        for (double& z : t.faces_) z += c;
        return t;
    }

private:
    Grid1D grid_;
    std::vector<double> faces_;
};

/// Bottom of the dam-break-over-a-bump problem:
/// 0.125 xi + 0.125 (cos(5 pi x) + 2) for |x| < 0.2, else 0.125 xi + 0.125.
inline double example2_bottom(double x, double xi) {
    if (std::abs(x) < 0.2) return 0.125 * xi + 0.125 * (std::cos(5.0 * std::numbers::pi * x) + 2.0);
    return 0.125 * xi + 0.125;
}

// ---------------------------------------------------------------------------
// Shallow water
// ---------------------------------------------------------------------------

inline constexpr double kDryDepth = 1e-14;

/// u = sqrt(2) h (hu) / sqrt(h^4 + max(h^4, eps)); zero for dry depths.
inline double desingularized_velocity(double h, double hu, double eps) {
    if (h < kDryDepth) return 0.0;
    const double h4 = h * h * h * h;
    return std::numbers::sqrt2 * h * hu / std::sqrt(h4 + std::max(h4, eps));
}

/// Physical flux (hu, h u^2 + g h^2 / 2) with the desingularized velocity and
/// hu recomputed as h u.
inline std::array<double, 2> sw_flux(double h, double hu, double g, double eps) {
    if (h < 0.0) throw std::invalid_argument("sw_flux: negative depth");
    const double u = desingularized_velocity(h, hu, eps);
    const double q = h * u;
    return {q, q * u + 0.5 * g * h * h};
}

/// Well-balanced reconstruction of (w, hu): minmod on w and hu, then the
/// slope of w in a cell is reset wherever an interface value would fall below
/// the bottom. Interface hu values are recomputed as h u with the
/// desingularized velocity.
inline Reconstruction sw_reconstruct_equilibrium(const StateField& field, const Topography& topo, double theta,
                                                 double eps) {
    const Grid1D& g = field.grid();
    const int n = g.n_cells();
    const double dx = g.dx();
    Reconstruction r = scuq::reconstruct(field, theta);

    for (int j = -1; j <= n; ++j) {
        const double w = field(j, 0);
        const double z_west = topo.at_face(j);
        const double z_east = topo.at_face(j + 1);
        if (w < topo.at_cell(j)) {
            std::ostringstream msg;
            msg << "sw_reconstruct_equilibrium: water surface below bottom in cell " << j << " (w=" << w
                << ", Z=" << topo.at_cell(j) << ")";
            throw SolverError(msg.str());
        }
        double slope = r.slope(j, 0);
        double east = w + 0.5 * dx * slope;
        double west = w - 0.5 * dx * slope;
        if (east < z_east) {
            slope = 2.0 * (z_east - w) / dx;
            east = z_east;
            west = std::max(2.0 * w - z_east, z_west);
        } else if (west < z_west) {
            slope = 2.0 * (w - z_west) / dx;
            west = z_west;
            east = std::max(2.0 * w - z_west, z_east);
        }
        r.slope(j, 0) = slope;
        if (j + 1 <= n) r.minus_at(j + 1)[0] = east;
        if (j >= 0) r.plus_at(j)[0] = west;
    }

    for (int i = 0; i <= n; ++i) {
        const double z = topo.at_face(i);
        for (auto side : {r.minus_at(i), r.plus_at(i)}) {
            const double h = std::max(side[0] - z, 0.0);
            side[1] = h * desingularized_velocity(h, side[1], eps);
        }
    }
    return r;
}

/// Well-balanced cell source: (0, -g (w_j - Z_j) (Z_{j+1/2} - Z_{j-1/2}) / dx).
inline std::vector<std::array<double, 2>> sw_source(const StateField& field, const Topography& topo, double g) {
    const Grid1D& grid = field.grid();
    std::vector<std::array<double, 2>> s(static_cast<std::size_t>(grid.n_cells()));
    for (int j = 0; j < grid.n_cells(); ++j) {
        const double h = field(j, 0) - topo.at_cell(j);
        s[static_cast<std::size_t>(j)] = {0.0, -g * h * (topo.at_face(j + 1) - topo.at_face(j)) / grid.dx()};
    }
    return s;
}

class ShallowWaterModel {
public:
    explicit ShallowWaterModel(Topography topo, double g = 1.0)
        : ShallowWaterModel(topo, g, std::pow(topo.grid().dx(), 4)) {}

    ShallowWaterModel(Topography topo, double g, double eps) : topo_(std::move(topo)), g_(g), eps_(eps) {
        if (!(g > 0.0)) throw std::invalid_argument("ShallowWaterModel: g must be positive");
    }

    int components() const { return 2; }
    std::vector<std::string> component_names() const { return {"w", "hu"}; }

    const Topography& topography() const { return topo_; }
    double gravity() const { return g_; }
    double eps() const { return eps_; }

    Reconstruction reconstruct(const StateField& u, double theta) const {
        return sw_reconstruct_equilibrium(u, topo_, theta, eps_);
    }

    void flux(std::span<const double> U, int iface, std::span<double> F) const {
        const auto f = sw_flux(std::max(U[0] - topo_.at_face(iface), 0.0), U[1], g_, eps_);
        F[0] = f[0];
        F[1] = f[1];
    }

    LocalSpeeds local_speeds(std::span<const double> um, std::span<const double> up, int iface) const {
        const double z = topo_.at_face(iface);
        const double hm = std::max(um[0] - z, 0.0);
        const double hp = std::max(up[0] - z, 0.0);
        const double vm = desingularized_velocity(hm, um[1], eps_);
        const double vp = desingularized_velocity(hp, up[1], eps_);
        const double cm = std::sqrt(g_ * hm);
        const double cp = std::sqrt(g_ * hp);
        return {std::max({vm + cm, vp + cp, 0.0}), std::min({vm - cm, vp - cp, 0.0})};
    }

    void add_source(const StateField& u, const Reconstruction&, StateField& rhs) const {
        const auto s = sw_source(u, topo_, g_);
        for (int j = 0; j < u.grid().n_cells(); ++j) rhs(j, 1) += s[static_cast<std::size_t>(j)][1];
    }

    void check_admissible(const StateField& u) const {
        for (int j = 0; j < u.grid().n_cells(); ++j) {
            const double h = u(j, 0) - topo_.at_cell(j);
            if (h < 0.0) {
                std::ostringstream msg;
                msg << "shallow water: negative depth " << h << " in cell " << j;
                throw SolverError(msg.str());
            }
        }
    }

    /// Interior water depths h = w - Z.
    std::vector<double> depth(const StateField& u) const {
        std::vector<double> h(static_cast<std::size_t>(u.grid().n_cells()));
        for (int j = 0; j < u.grid().n_cells(); ++j) h[static_cast<std::size_t>(j)] = u(j, 0) - topo_.at_cell(j);
        return h;
    }

private:
    Topography topo_;
    double g_;
    double eps_;
};

static_assert(HyperbolicModel<BurgersModel>);
static_assert(HyperbolicModel<ShallowWaterModel>);

}  // namespace scuq
