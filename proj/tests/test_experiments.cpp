#include <gtest/gtest.h>

#include <filesystem>

#include "scuq/experiments.hpp"

using namespace scuq;
using namespace scuq::experiments;

TEST(Presets, ConstantsMatchTheExperiments) {
    const ExperimentPreset e1 = example1_preset();
    EXPECT_EQ(e1.id, "example1");
    EXPECT_EQ(e1.config.problem, Problem::Example1);
    EXPECT_EQ(e1.config.x_min, -1.0);
    EXPECT_EQ(e1.config.x_max, 1.0);
    EXPECT_EQ(e1.config.grid().dx(), 1.0 / 800.0);
    EXPECT_EQ(e1.config.final_time, 0.5);
    EXPECT_EQ(e1.config.collocation.L, 16);
    EXPECT_EQ(e1.config.cfl, 0.45);
    EXPECT_EQ(e1.config.minmod_theta, 1.3);
    EXPECT_EQ(e1.probe_x, 0.734);
    EXPECT_EQ(e1.config.xi_grid_points, 201);
    for (int L : {16, 32}) {
        const ExperimentPreset e2 = example2_preset(L);
        EXPECT_EQ(e2.id, "example2");
        EXPECT_EQ(e2.config.problem, Problem::Example2);
        EXPECT_EQ(e2.config.grid().dx(), 1.0 / 400.0);
        EXPECT_EQ(e2.config.final_time, 0.8);
        EXPECT_EQ(e2.config.gravity, 1.0);
        EXPECT_EQ(e2.config.collocation.L, L);
        EXPECT_EQ(e2.probe_x, 0.694);
    }
    EXPECT_THROW(example2_preset(24), std::invalid_argument);
}

TEST(Oracle, ShockBranch) {
    EXPECT_EQ(burgers_exact(0.9, 0.5, 0.0, Orientation::Shock), 1.0);
    EXPECT_EQ(burgers_exact(0.7, 0.5, 0.0, Orientation::Shock), 2.0);
    // slice at 0.734 jumps from 2 to 1 at xi = -0.16
    EXPECT_EQ(burgers_exact(0.734, 0.5, -0.17, Orientation::Shock), 1.0);
    EXPECT_EQ(burgers_exact(0.734, 0.5, -0.15, Orientation::Shock), 2.0);
}

TEST(Oracle, RarefactionBranch) {
    EXPECT_NEAR(burgers_exact(0.734, 0.5, -1.0, Orientation::AsPrinted), 1.668, 1e-12);
    for (double xi : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        EXPECT_NEAR(burgers_exact(0.734, 0.5, xi, Orientation::AsPrinted), (0.734 - 0.1 * xi) / 0.5, 1e-12);
    }
    EXPECT_EQ(burgers_exact(0.0, 0.5, 0.0, Orientation::AsPrinted), 1.0);
    EXPECT_EQ(burgers_exact(2.0, 0.5, 0.0, Orientation::AsPrinted), 2.0);
}

TEST(Oracle, InitialData) {
    for (double xi : {-1.0, 0.3, 1.0}) {
        for (double x : {-0.5, 0.0, 0.2}) {
            const bool left = x < 0.1 * xi;
            EXPECT_EQ(burgers_exact(x, 0.0, xi, Orientation::Shock), left ? 2.0 : 1.0);
            EXPECT_EQ(burgers_exact(x, 0.0, xi, Orientation::AsPrinted), left ? 1.0 : 2.0);
        }
    }
    EXPECT_THROW(burgers_exact(0.0, -1.0, 0.0, Orientation::Shock), std::invalid_argument);
}

TEST(Oracle, ShockMoments) {
    const auto o = BurgersRiemannOracle::for_orientation(Orientation::Shock);
    const gpc::Moments m = o.moments(0.734, 0.5);
    // P(shock right of x) = (0.85 - x) / 0.2
    const double p = (0.85 - 0.734) / 0.2;
    EXPECT_NEAR(m.mean, 1.0 + p, 1e-15);
    EXPECT_NEAR(m.mean, 1.58, 1e-14);
    EXPECT_NEAR(m.variance, 1.0 + 3.0 * p - (1.0 + p) * (1.0 + p), 1e-14);
    EXPECT_NEAR(m.stddev, 0.49356, 1e-5);
    EXPECT_EQ(o.moments(0.6, 0.5).mean, 2.0);
    EXPECT_EQ(o.moments(0.9, 0.5).mean, 1.0);
    EXPECT_EQ(o.moments(0.9, 0.5).stddev, 0.0);
}

TEST(Oracle, MomentsMatchBruteForceIntegration) {
    for (Orientation orient : {Orientation::Shock, Orientation::AsPrinted}) {
        const auto o = BurgersRiemannOracle::for_orientation(orient);
        for (double x : {-0.3, 0.4, 0.55, 0.734, 0.8, 1.05}) {
            const int n = 200000;
            double m1 = 0.0, m2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double v = o(x, 0.5, -1.0 + 2.0 * (i + 0.5) / n);
                m1 += v / n;
                m2 += v * v / n;
            }
            const gpc::Moments m = o.moments(x, 0.5);
            EXPECT_NEAR(m.mean, m1, 1e-5);
            EXPECT_NEAR(m.variance, m2 - m1 * m1, 1e-5);
        }
    }
}

TEST(Factories, RiemannCellAverages) {
    const Grid1D g = build_grid(-1.0, 1.0, 20);
    const auto r = burgers_riemann_realization(g, Orientation::Shock, 0.25);  // jump at 0.025
    const int j = g.nearest_cell(0.025);
    const double frac = (0.025 - g.face(j)) / g.dx();
    EXPECT_NEAR(r.initial(j, 0), 2.0 * frac + (1.0 - frac), 1e-14);
    EXPECT_EQ(r.initial(0, 0), 2.0);
    EXPECT_EQ(r.initial(19, 0), 1.0);
    double mass = 0.0;
    for (int k = 0; k < 20; ++k) mass += r.initial(k, 0) * g.dx();
    EXPECT_NEAR(mass, 2.0 * 1.025 + 1.0 * 0.975, 1e-13);
}

TEST(Factories, DamBreakInitialState) {
    const Grid1D g = build_grid(-1.0, 1.0, 800);
    for (double xi : {-1.0, 0.0, 1.0}) {
        const auto r = example2_realization(g, 1.0, xi);
        for (int j = 0; j < 800; ++j) {
            EXPECT_EQ(r.initial(j, 0), g.center(j) < 0.0 ? 1.0 : 0.5);
            EXPECT_EQ(r.initial(j, 1), 0.0);
        }
        for (double h : r.model.depth(r.initial)) EXPECT_GE(h, 0.0);
    }
}

TEST(RunExperiment, SmallExample1WritesArtifacts) {
    ExperimentPreset p = example1_preset();
    p.config.n_cells = 200;
    p.config.collocation.L = 6;
    p.config.xi_grid_points = 21;
    const auto dir = std::filesystem::temp_directory_path() / "scuq_exp_test";
    std::filesystem::remove_all(dir);
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.jobs = 2;
    opt.surface_stride = 10;
    const ExperimentResult r = run_experiment(p, opt);
    EXPECT_EQ(r.files.size(), 12u);
    for (const char* name : {"example1_gpc_surface_6.csv", "example1_cubic_slice_6.csv",
                             "example1_sp_spline_moments_6.csv", "example1_exact_surface_6.csv"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
    }
    const CsvTable slice = read_csv((dir / "example1_sp_spline_slice_6.csv").string());
    ASSERT_EQ(slice.comments.size(), 1u);
    std::string probe = "probe_x=";
    append_number(probe, r.probe_x);
    EXPECT_EQ(slice.comments[0], probe);
    EXPECT_NEAR(r.probe_x, 0.735, 1e-12);
    EXPECT_EQ(slice.rows.size(), 21u);
    const CsvTable surface = read_csv((dir / "example1_gpc_surface_6.csv").string());
    EXPECT_EQ(surface.rows.size(), 20u * 21u);
    for (const char* m : {"gpc", "cubic", "sp_spline", "exact"}) {
        const CsvTable mom = read_csv((dir / (std::string("example1_") + m + "_moments_6.csv")).string());
        EXPECT_EQ(mom.rows.size(), 200u);
        for (const auto& row : mom.rows) EXPECT_GE(row[2], 0.0);
        if (std::string(m) == "sp_spline" || std::string(m) == "exact") {
            for (const auto& row : mom.rows) {
                EXPECT_GE(row[1], 1.0 - 1e-12);
                EXPECT_LE(row[1], 2.0 + 1e-12);
            }
        }
    }
    std::filesystem::remove_all(dir);
}

TEST(RunExperiment, SmallExample2BoundsAndComponents) {
    ExperimentPreset p = example2_preset(16);
    p.config.n_cells = 100;
    p.config.xi_grid_points = 11;
    const auto dir = std::filesystem::temp_directory_path() / "scuq_exp2_test";
    std::filesystem::remove_all(dir);
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.surface_stride = 5;
    const ExperimentResult r = run_experiment(p, opt);
    EXPECT_EQ(r.component_names, (std::vector<std::string>{"w", "hu"}));
    EXPECT_EQ(r.files.size(), 18u);
    EXPECT_TRUE(std::filesystem::exists(dir / "example2_sp_spline_moments_hu_16.csv"));
    double zmin = INFINITY;
    for (int i = 0; i <= 100; ++i) zmin = std::min(zmin, example2_bottom(r.gauss->grid().face(i), -1.0));
    for (const char* m : {"gpc", "cubic", "sp_spline"}) {
        const CsvTable s = read_csv((dir / (std::string("example2_") + m + "_surface_w_16.csv")).string());
        for (const auto& row : s.rows) {
            EXPECT_GE(row[2], zmin);
            EXPECT_LE(row[2], 1.05);
        }
    }
    std::filesystem::remove_all(dir);
}

TEST(RunExperiment, InMemoryOnly) {
    ExperimentPreset p = example1_preset(Orientation::AsPrinted);
    p.config.n_cells = 100;
    p.config.collocation.L = 5;
    p.config.xi_grid_points = 5;
    const ExperimentResult r = run_experiment(p, RunOptions{});
    EXPECT_TRUE(r.files.empty());
    EXPECT_EQ(r.results.size(), 1u);
    EXPECT_EQ(r.results[0].size(), 3u);
}

TEST(GenericRuns, SolveAndMoments) {
    RunConfig cfg;
    cfg.problem = Problem::LakeAtRest;
    cfg.n_cells = 100;
    cfg.final_time = 0.1;
    cfg.xi = 0.3;
    const StateField u = run_solve(cfg);
    for (int j = 0; j < 100; ++j) EXPECT_NEAR(u(j, 0), 1.0, 1e-13);
    cfg.collocation.mode = CollocationMode::Spline;
    cfg.collocation.node_rule = NodeRule::Uniform;
    cfg.collocation.L = 4;
    const auto dir = std::filesystem::temp_directory_path() / "scuq_generic_test";
    std::filesystem::remove_all(dir);
    const MomentsRun run = run_moments(cfg, dir.string(), 2);
    EXPECT_EQ(run.method, Method::SpSpline);
    ASSERT_EQ(run.files.size(), 2u);
    EXPECT_TRUE(std::filesystem::exists(dir / "lake_at_rest_sp_spline_moments_w_4.csv"));
    for (double s : run.moments.stddev_of(0)) EXPECT_NEAR(s, 0.0, 1e-12);
    cfg.spline_kind = SplineKind::Cubic;
    EXPECT_EQ(method_of(cfg), Method::Cubic);
    std::filesystem::remove_all(dir);
}
