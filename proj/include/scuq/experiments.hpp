#pragma once

// Experiment presets, realization factories and the Burgers Riemann oracle,
// plus the drivers that run the two reference experiments end to end and
// write their CSV artifacts.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "scuq/config_io.hpp"
#include "scuq/core_types.hpp"
#include "scuq/csv.hpp"
#include "scuq/fv_solver.hpp"
#include "scuq/gpc.hpp"
#include "scuq/models.hpp"
#include "scuq/uq_pipeline.hpp"

namespace scuq::experiments {

// ---------------------------------------------------------------------------
// Burgers Riemann oracle
// ---------------------------------------------------------------------------

/// Exact entropy solution of Burgers' equation for Riemann data with the jump
/// at x0 = 0.1 xi.
struct BurgersRiemannOracle {
    double u_left = 2.0;
    double u_right = 1.0;

    static BurgersRiemannOracle for_orientation(Orientation o) {
        return o == Orientation::Shock ? BurgersRiemannOracle{2.0, 1.0} : BurgersRiemannOracle{1.0, 2.0};
    }

    static double jump_location(double xi) { return 0.1 * xi; }

    double operator()(double x, double t, double xi) const {
        if (t < 0.0) throw std::invalid_argument("burgers_exact: t must be nonnegative");
        const double x0 = jump_location(xi);
        if (t == 0.0) return x < x0 ? u_left : u_right;
        if (u_left > u_right) {
            return x < x0 + 0.5 * (u_left + u_right) * t ? u_left : u_right;
        }
        if (x <= x0 + u_left * t) return u_left;
        if (x >= x0 + u_right * t) return u_right;
        return (x - x0) / t;
    }

    /// Mean and standard deviation over xi ~ U[-1, 1] at (x, t).
    gpc::Moments moments(double x, double t) const {
        gpc::Moments m;
        if (u_left > u_right && t > 0.0) {
            // u = u_left iff xi > (x - s t) / 0.1
            const double s = 0.5 * (u_left + u_right);
            const double p = std::clamp(0.5 * (1.0 - (x - s * t) / 0.1), 0.0, 1.0);
            m.mean = u_right + (u_left - u_right) * p;
            m.variance = (u_left - u_right) * (u_left - u_right) * p * (1.0 - p);
        } else {
            // Piecewise polynomial in xi: integrate exactly between breakpoints.
            std::vector<double> cuts{-1.0, 1.0};
            if (t > 0.0) {
                cuts.push_back(std::clamp((x - u_left * t) / 0.1, -1.0, 1.0));
                cuts.push_back(std::clamp((x - u_right * t) / 0.1, -1.0, 1.0));
            } else {
                cuts.push_back(std::clamp(x / 0.1, -1.0, 1.0));
            }
            std::sort(cuts.begin(), cuts.end());
            const gpc::QuadratureRule rule = gpc::gauss_legendre_rule(4);
            double m1 = 0.0, m2 = 0.0;
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double half = 0.5 * (cuts[c + 1] - cuts[c]);
                const double mid = 0.5 * (cuts[c + 1] + cuts[c]);
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    const double v = (*this)(x, t, mid + half * rule.nodes[q]);
                    m1 += half * rule.weights[q] * v;
                    m2 += half * rule.weights[q] * v * v;
                }
            }
            m.mean = m1;
            m.variance = std::max(m2 - m1 * m1, 0.0);
        }
        m.stddev = std::sqrt(m.variance);
        return m;
    }
};

inline double burgers_exact(double x, double t, double xi, Orientation o) {
    return BurgersRiemannOracle::for_orientation(o)(x, t, xi);
}

// ---------------------------------------------------------------------------
// Realization factories
// ---------------------------------------------------------------------------

/// Riemann data with the jump at 0.1 xi; the cell containing the jump gets
/// its exact average.
inline Realization<BurgersModel> burgers_riemann_realization(const Grid1D& grid, Orientation o, double xi) {
    const auto oracle = BurgersRiemannOracle::for_orientation(o);
    const double x0 = BurgersRiemannOracle::jump_location(xi);
    StateField u(grid, 1);
    for (int j = 0; j < grid.n_cells(); ++j) {
        const double a = grid.face(j);
        const double b = grid.face(j + 1);
        const double left_fraction = std::clamp((x0 - a) / (b - a), 0.0, 1.0);
        u(j, 0) = left_fraction * oracle.u_left + (1.0 - left_fraction) * oracle.u_right;
    }
    return {BurgersModel{}, std::move(u)};
}

/// u0 = 0.5 + 0.25 sin(pi (x - 0.1 xi)), exact cell averages.
inline Realization<BurgersModel> burgers_smooth_realization(const Grid1D& grid, double xi) {
    StateField u(grid, 1);
    const double pi = std::numbers::pi;
    for (int j = 0; j < grid.n_cells(); ++j) {
        const double a = grid.face(j) - 0.1 * xi;
        const double b = grid.face(j + 1) - 0.1 * xi;
        u(j, 0) = 0.5 + 0.25 * (std::cos(pi * a) - std::cos(pi * b)) / (pi * (b - a));
    }
    return {BurgersModel{}, std::move(u)};
}

/// w = 1 (x < 0) / 0.5 (x > 0), u = 0, over the stochastic bump.
inline Realization<ShallowWaterModel> example2_realization(const Grid1D& grid, double g, double xi) {
    Topography topo(grid, [xi](double x) { return example2_bottom(x, xi); });
    StateField u(grid, 2);
    for (int j = 0; j < grid.n_cells(); ++j) {
        const double w = grid.center(j) < 0.0 ? 1.0 : 0.5;
        u(j, 0) = std::max(w, topo.at_cell(j));
        u(j, 1) = 0.0;
    }
    return {ShallowWaterModel(std::move(topo), g), std::move(u)};
}

/// Lake at rest (w = level, u = 0) over the stochastic bump.
inline Realization<ShallowWaterModel> lake_at_rest_realization(const Grid1D& grid, double g, double xi,
                                                               double level = 1.0) {
    Topography topo(grid, [xi](double x) { return example2_bottom(x, xi); });
    StateField u(grid, 2);
    for (int j = 0; j < grid.n_cells(); ++j) u(j, 0) = level;
    return {ShallowWaterModel(std::move(topo), g), std::move(u)};
}

/// Calls `fn(factory)` with the xi -> Realization factory of cfg.problem.
template <class Fn>
decltype(auto) with_problem(const RunConfig& cfg, Fn&& fn) {
    const Grid1D grid = cfg.grid();
    switch (cfg.problem) {
        case Problem::Example1:
            return fn([grid, o = cfg.orientation](double xi) { return burgers_riemann_realization(grid, o, xi); });
        case Problem::BurgersSmooth:
            return fn([grid](double xi) { return burgers_smooth_realization(grid, xi); });
        case Problem::Example2:
            return fn([grid, g = cfg.gravity](double xi) { return example2_realization(grid, g, xi); });
        case Problem::LakeAtRest:
            return fn([grid, g = cfg.gravity](double xi) { return lake_at_rest_realization(grid, g, xi); });
    }
    throw std::logic_error("with_problem: unknown problem");
}

inline std::vector<std::string> component_names(Problem p) {
    if (p == Problem::Example2 || p == Problem::LakeAtRest) return {"w", "hu"};
    return {"u"};
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

struct ExperimentPreset {
    std::string id;
    RunConfig config;
    double probe_x = 0.0;
};

/// Burgers Riemann problem: [-1, 1], dx = 1/800, T = 0.5, L = 16, probe 0.734.
inline ExperimentPreset example1_preset(Orientation o = Orientation::Shock) {
    RunConfig c;
    c.problem = Problem::Example1;
    c.orientation = o;
    c.x_min = -1.0;
    c.x_max = 1.0;
    c.n_cells = 1600;
    c.final_time = 0.5;
    c.collocation.L = 16;
    return {"example1", c, 0.734};
}

/// Dam break over a stochastic bump: [-1, 1], dx = 1/400, T = 0.8, g = 1,
/// L in {16, 32}, probe 0.694.
inline ExperimentPreset example2_preset(int L = 32) {
    if (L != 16 && L != 32) throw std::invalid_argument("example2: L must be 16 or 32");
    RunConfig c;
    c.problem = Problem::Example2;
    c.gravity = 1.0;
    c.x_min = -1.0;
    c.x_max = 1.0;
    c.n_cells = 800;
    c.final_time = 0.8;
    c.collocation.L = L;
    return {"example2", c, 0.694};
}

// ---------------------------------------------------------------------------
// Running experiments
// ---------------------------------------------------------------------------

struct MethodResult {
    MomentField moments;
    std::vector<double> probe_values;  // interpolant on the xi grid at the probe cell
};

struct ExperimentResult {
    std::string id;
    RunConfig config;
    int probe_cell = 0;
    double probe_x = 0.0;
    std::vector<double> xi_grid;
    std::vector<std::string> component_names;
    std::optional<CollocationEnsemble> gauss;    // gPC ensemble
    std::optional<CollocationEnsemble> uniform;  // spline ensemble
    // results[component][method]
    std::vector<std::map<Method, MethodResult>> results;
    std::vector<std::string> files;
};

struct RunOptions {
    std::string out_dir;  // empty: do not write files
    int jobs = 1;
    int surface_stride = 1;
    bool write_surfaces = true;
};

namespace detail {

inline std::string artifact_name(const std::string& id, std::string_view method, std::string_view kind,
                                 const std::vector<std::string>& names, int component, int L) {
    std::string name = id + "_" + std::string(method) + "_" + std::string(kind);
    if (names.size() > 1) name += "_" + names[static_cast<std::size_t>(component)];
    return name + "_" + std::to_string(L) + ".csv";
}

}  // namespace detail

/// Solves both ensembles (Gauss nodes for gPC, uniform nodes for splines),
/// computes moments and probe slices for every component and method, and
/// writes the artifacts when opt.out_dir is set.
inline ExperimentResult run_experiment(const ExperimentPreset& preset, const RunOptions& opt) {
    const RunConfig& cfg = preset.config;
    cfg.validate();
    const SolverSettings settings = SolverSettings::from(cfg);
    const int L = cfg.collocation.L;
    const Grid1D grid = cfg.grid();
    const InterpolationOptions iopt{cfg.shape_goal, cfg.audit_points, cfg.quadrature_points};

    ExperimentResult r;
    r.id = preset.id;
    r.config = cfg;
    r.probe_cell = grid.nearest_cell(preset.probe_x);
    r.probe_x = grid.center(r.probe_cell);
    r.xi_grid = uniform_points(-1.0, 1.0, cfg.xi_grid_points);
    r.component_names = component_names(cfg.problem);

    with_problem(cfg, [&](auto factory) {
        r.gauss.emplace(run_ensemble(settings, collocation_nodes(NodeRule::Gauss, L), factory, opt.jobs));
        r.uniform.emplace(run_ensemble(settings, collocation_nodes(NodeRule::Uniform, L), factory, opt.jobs));
    });

    const int m = r.gauss->components();
    r.results.resize(static_cast<std::size_t>(m));
    for (Method method : {Method::Gpc, Method::Cubic, Method::SpSpline}) {
        const CollocationEnsemble& e = method == Method::Gpc ? *r.gauss : *r.uniform;
        MomentField mom = method == Method::Gpc ? moments_from_gpc(e, opt.jobs)
                                                : moments_from_spline(e, method, iopt, opt.jobs);
        for (int k = 0; k < m; ++k) {
            const SliceInterpolant f = interpolate(e, slice(e, r.probe_cell, k), method, iopt);
            std::vector<double> probe(r.xi_grid.size());
            for (std::size_t q = 0; q < r.xi_grid.size(); ++q) probe[q] = f(r.xi_grid[q]);
            r.results[static_cast<std::size_t>(k)].emplace(method, MethodResult{mom, std::move(probe)});
        }
    }

    if (opt.out_dir.empty()) return r;

    std::filesystem::create_directories(opt.out_dir);
    const auto path = [&](std::string_view method, std::string_view kind, int k) {
        return (std::filesystem::path(opt.out_dir) / detail::artifact_name(r.id, method, kind, r.component_names, k, L))
            .string();
    };
    const std::vector<double> x_all = cell_centers(grid);
    const std::vector<double> x_surface = cell_centers(grid, opt.surface_stride);
    for (int k = 0; k < m; ++k) {
        for (const auto& [method, res] : r.results[static_cast<std::size_t>(k)]) {
            const std::string name(to_string(method));
            write_csv(path(name, "moments", k), moments_table(x_all, res.moments.mean_of(k), res.moments.stddev_of(k)));
            r.files.push_back(path(name, "moments", k));
            write_csv(path(name, "slice", k), slice_table(r.probe_x, r.xi_grid, res.probe_values));
            r.files.push_back(path(name, "slice", k));
            if (opt.write_surfaces) {
                const CollocationEnsemble& e = method == Method::Gpc ? *r.gauss : *r.uniform;
                const auto values =
                    evaluate_surface(e, k, method, r.xi_grid, iopt, opt.jobs, opt.surface_stride);
                write_csv(path(name, "surface", k), surface_table(x_surface, r.xi_grid, values));
                r.files.push_back(path(name, "surface", k));
            }
        }
    }

    if (cfg.problem == Problem::Example1) {
        const auto oracle = BurgersRiemannOracle::for_orientation(cfg.orientation);
        const double T = cfg.final_time;
        std::vector<double> mean(x_all.size()), sd(x_all.size());
        for (std::size_t j = 0; j < x_all.size(); ++j) {
            const gpc::Moments em = oracle.moments(x_all[j], T);
            mean[j] = em.mean;
            sd[j] = em.stddev;
        }
        write_csv(path("exact", "moments", 0), moments_table(x_all, mean, sd));
        r.files.push_back(path("exact", "moments", 0));
        std::vector<double> probe(r.xi_grid.size());
        for (std::size_t q = 0; q < probe.size(); ++q) probe[q] = oracle(r.probe_x, T, r.xi_grid[q]);
        write_csv(path("exact", "slice", 0), slice_table(r.probe_x, r.xi_grid, probe));
        r.files.push_back(path("exact", "slice", 0));
        if (opt.write_surfaces) {
            std::vector<double> values;
            values.reserve(x_surface.size() * r.xi_grid.size());
            for (double x : x_surface) {
                for (double xi : r.xi_grid) values.push_back(oracle(x, T, xi));
            }
            write_csv(path("exact", "surface", 0), surface_table(x_surface, r.xi_grid, values));
            r.files.push_back(path("exact", "surface", 0));
        }
    }
    return r;
}

inline ExperimentResult run_example1(Orientation o, const RunOptions& opt) {
    return run_experiment(example1_preset(o), opt);
}

inline ExperimentResult run_example2(int L, const RunOptions& opt) { return run_experiment(example2_preset(L), opt); }

// ---------------------------------------------------------------------------
// Generic runs driven by a RunConfig
// ---------------------------------------------------------------------------

/// One deterministic solve at cfg.xi; writes a snapshot when a path is given.
inline StateField run_solve(const RunConfig& cfg, const std::string& snapshot_path = {},
                            const StepObserver& observer = {}) {
    cfg.validate();
    const SolverSettings settings = SolverSettings::from(cfg);
    StateField u = with_problem(cfg, [&](auto factory) {
        return solve_realization(settings, factory, cfg.xi, observer);
    });
    if (!snapshot_path.empty()) write_csv(snapshot_path, snapshot_table(u, component_names(cfg.problem)));
    return u;
}

inline Method method_of(const RunConfig& cfg) {
    if (cfg.collocation.mode == CollocationMode::Gpc) return Method::Gpc;
    return cfg.spline_kind == SplineKind::Cubic ? Method::Cubic : Method::SpSpline;
}

struct MomentsRun {
    Method method = Method::Gpc;
    CollocationEnsemble ensemble;
    MomentField moments;
    std::vector<std::string> files;
};

/// Ensemble plus moments for the configured collocation mode. gPC always
/// uses Gauss nodes; spline modes use cfg.collocation.node_rule.
inline MomentsRun run_moments(const RunConfig& cfg, const std::string& out_dir, int jobs = 1) {
    cfg.validate();
    const SolverSettings settings = SolverSettings::from(cfg);
    const Method method = method_of(cfg);
    const NodeRule rule = method == Method::Gpc ? NodeRule::Gauss : cfg.collocation.node_rule;
    const CollocationNodes nodes = collocation_nodes(rule, cfg.collocation.L);
    CollocationEnsemble e = with_problem(cfg, [&](auto factory) { return run_ensemble(settings, nodes, factory, jobs); });
    const InterpolationOptions iopt{cfg.shape_goal, cfg.audit_points, cfg.quadrature_points};
    MomentField mom = method == Method::Gpc ? moments_from_gpc(e, jobs) : moments_from_spline(e, method, iopt, jobs);
    MomentsRun run{method, std::move(e), std::move(mom), {}};
    if (out_dir.empty()) return run;

    std::filesystem::create_directories(out_dir);
    const auto names = component_names(cfg.problem);
    const std::vector<double> x = cell_centers(cfg.grid());
    for (int k = 0; k < run.moments.components; ++k) {
        const std::string file =
            (std::filesystem::path(out_dir) / detail::artifact_name(std::string(to_string(cfg.problem)),
                                                                    to_string(method), "moments", names, k,
                                                                    cfg.collocation.L))
                .string();
        write_csv(file, moments_table(x, run.moments.mean_of(k), run.moments.stddev_of(k)));
        run.files.push_back(file);
    }
    return run;
}

}  // namespace scuq::experiments
