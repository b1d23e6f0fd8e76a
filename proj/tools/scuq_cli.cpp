// scuq: command-line front end for the collocation toolkit.
//
//   scuq run-example1 [--orientation shock|as_printed] [--out DIR] [--jobs N]
//   scuq run-example2 [--L 16|32] [--out DIR] [--jobs N]
//   scuq solve        [--config PATH] [key flags] [--snapshot PATH]
//   scuq moments      [--config PATH] [key flags] [--out DIR] [--jobs N]
//   scuq selftest
//
// Settings are layered: built-in defaults (or the experiment preset), then
// --config, then individual flags. Failures print one "error: ..." line.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "scuq/config_io.hpp"
#include "scuq/experiments.hpp"

namespace {

using namespace scuq;

struct KeyFlag {
    const char* flag;
    const char* key;
    const char* help;
};

// One flag per RunConfig key.
constexpr KeyFlag kKeyFlags[] = {
    {"--problem", "model.problem", "example1 | example2 | lake_at_rest | burgers_smooth"},
    {"--orientation", "model.orientation", "shock | as_printed"},
    {"--gravity", "model.gravity", "gravitational acceleration"},
    {"--xi", "model.xi", "realization for single solves"},
    {"--x-min", "grid.x_min", "left domain end"},
    {"--x-max", "grid.x_max", "right domain end"},
    {"--n-cells", "grid.n_cells", "number of cells"},
    {"--final-time", "solver.final_time", "final time T"},
    {"--cfl", "solver.cfl", "CFL number"},
    {"--theta", "solver.minmod_theta", "minmod parameter"},
    {"--boundary", "solver.boundary", "free | periodic"},
    {"--mode", "uq.mode", "gpc | spline"},
    {"--L", "uq.L", "number of collocation nodes"},
    {"--node-rule", "uq.node_rule", "gauss | uniform"},
    {"--spline-kind", "uq.spline_kind", "cubic | shape_preserving"},
    {"--shape-goal", "uq.shape_goal", "positivity | monotonicity | convexity | c2"},
    {"--quadrature-points", "uq.quadrature_points", "Gauss points per knot interval"},
    {"--xi-grid-points", "uq.xi_grid_points", "points of the dense xi grid"},
    {"--audit-points", "uq.audit_points", "shape audit samples per interval"},
    {"--snapshot", "output.snapshot", "snapshot CSV path (solve)"},
};

struct Layered {
    std::string config_path;
    std::vector<std::optional<std::string>> values = std::vector<std::optional<std::string>>(std::size(kKeyFlags));
    std::string out_dir;
    int jobs = 1;

    void attach(CLI::App* app, bool all_keys) {
        app->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
        app->add_option("--out", out_dir, "output directory");
        app->add_option("--jobs", jobs, "parallel realizations (0 = hardware threads)")->check(CLI::NonNegativeNumber);
        if (!all_keys) return;
        for (std::size_t i = 0; i < std::size(kKeyFlags); ++i) {
            app->add_option(kKeyFlags[i].flag, values[i], kKeyFlags[i].help);
        }
    }

    RunConfig resolve(RunConfig base) const {
        RunConfig cfg = config_path.empty() ? base : load_config(config_path, base);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i]) apply_config_entry(cfg, kKeyFlags[i].key, *values[i]);
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.validate();
        return cfg;
    }

    int worker_count() const {
        if (jobs > 0) return jobs;
        return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
};

void print_files(const std::vector<std::string>& files) {
    for (const auto& f : files) std::cout << f << '\n';
}

// Explicit subcommand flags are applied last, over the config file.
int run_preset(experiments::ExperimentPreset preset, const Layered& opts, int stride, bool surfaces,
               const std::function<void(RunConfig&)>& explicit_flags) {
    preset.config = opts.resolve(preset.config);
    explicit_flags(preset.config);
    preset.config.validate();
    experiments::RunOptions ro;
    ro.out_dir = preset.config.output_dir;
    ro.jobs = opts.worker_count();
    ro.surface_stride = stride;
    ro.write_surfaces = surfaces;
    const auto r = experiments::run_experiment(preset, ro);
    print_files(r.files);
    return 0;
}

int selftest() {
    int failures = 0;
    auto check = [&](bool ok, const char* what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << '\n';
        if (!ok) ++failures;
    };
    const auto e1 = experiments::example1_preset();
    check(e1.config.problem == Problem::Example1 && e1.config.n_cells == 1600 &&
              e1.config.grid().dx() == 1.0 / 800.0 && e1.config.final_time == 0.5 && e1.config.collocation.L == 16 &&
              e1.probe_x == 0.734,
          "example1 preset: dx = 1/800, T = 0.5, L = 16, probe 0.734");
    for (int L : {16, 32}) {
        const auto e2 = experiments::example2_preset(L);
        check(e2.config.problem == Problem::Example2 && e2.config.n_cells == 800 &&
                  e2.config.grid().dx() == 1.0 / 400.0 && e2.config.final_time == 0.8 && e2.config.gravity == 1.0 &&
                  e2.config.collocation.L == L && e2.probe_x == 0.694,
              L == 16 ? "example2 preset (L = 16): dx = 1/400, T = 0.8, g = 1, probe 0.694"
                      : "example2 preset (L = 32): dx = 1/400, T = 0.8, g = 1, probe 0.694");
    }
    const auto defaults = RunConfig{};
    check(defaults.cfl == 0.45 && defaults.minmod_theta == 1.3, "solver defaults: cfl 0.45, theta 1.3");
    check(parse_config(serialize_config(e1.config)) == e1.config, "config round-trip");
    const auto g2 = gpc::gauss_legendre_rule(2);
    check(std::abs(g2.nodes[1] - 1.0 / std::sqrt(3.0)) < 1e-15 && std::abs(g2.weights[0] - 0.5) < 1e-15,
          "gauss rule L = 2");
    check(experiments::burgers_exact(0.9, 0.5, 0.0, Orientation::Shock) == 1.0 &&
              std::abs(experiments::burgers_exact(0.734, 0.5, -1.0, Orientation::AsPrinted) - 1.668) < 1e-12,
          "burgers oracle");
    std::cout << (failures == 0 ? "selftest: ok" : "selftest: failed") << '\n';
    return failures == 0 ? 0 : 1;
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic collocation for 1-D hyperbolic problems"};
    app.require_subcommand(1);

    Layered ex1_opts, ex2_opts, solve_opts, moments_opts;
    std::string orientation = "shock";
    int L2 = 32;
    int stride1 = 1, stride2 = 1;
    bool no_surfaces1 = false, no_surfaces2 = false;

    auto* ex1 = app.add_subcommand("run-example1", "Burgers Riemann problem with a random jump location");
    ex1_opts.attach(ex1, false);
    ex1->add_option("--orientation", orientation, "shock | as_printed");
    ex1->add_option("--surface-stride", stride1, "write every n-th cell to surface files")->check(CLI::PositiveNumber);
    ex1->add_flag("--no-surfaces", no_surfaces1, "skip surface files");

    auto* ex2 = app.add_subcommand("run-example2", "Shallow-water dam break over a random bump");
    ex2_opts.attach(ex2, false);
    ex2->add_option("--L", L2, "collocation nodes (16 or 32)");
    ex2->add_option("--surface-stride", stride2, "write every n-th cell to surface files")->check(CLI::PositiveNumber);
    ex2->add_flag("--no-surfaces", no_surfaces2, "skip surface files");

    auto* solve_cmd = app.add_subcommand("solve", "Single deterministic solve at model.xi");
    solve_opts.attach(solve_cmd, true);

    auto* moments_cmd = app.add_subcommand("moments", "Ensemble moments for the configured collocation mode");
    moments_opts.attach(moments_cmd, true);

    auto* self = app.add_subcommand("selftest", "Check preset constants and basic identities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << one_line(e.what()) << '\n';
        return 2;
    }

    try {
        if (ex1->parsed()) {
            const Orientation o = parse_orientation(orientation);
            return run_preset(experiments::example1_preset(o), ex1_opts, stride1, !no_surfaces1, [&](RunConfig& c) {
                if (ex1->count("--orientation")) c.orientation = o;
            });
        }
        if (ex2->parsed()) {
            return run_preset(experiments::example2_preset(L2), ex2_opts, stride2, !no_surfaces2, [&](RunConfig& c) {
                if (ex2->count("--L")) c.collocation.L = L2;
            });
        }
        if (solve_cmd->parsed()) {
            const RunConfig cfg = solve_opts.resolve(RunConfig{});
            std::string path = cfg.snapshot_path;
            if (path.empty()) {
                std::filesystem::create_directories(cfg.output_dir);
                path = (std::filesystem::path(cfg.output_dir) /
                        ("solve_" + std::string(to_string(cfg.problem)) + "_snapshot.csv"))
                           .string();
            }
            int steps = 0;
            experiments::run_solve(cfg, path, [&](const StepInfo& s, const StateField&) { steps = s.step; });
            std::cout << path << '\n';
            std::cerr << "steps: " << steps << '\n';
            return 0;
        }
        if (moments_cmd->parsed()) {
            const RunConfig cfg = moments_opts.resolve(RunConfig{});
            const auto run = experiments::run_moments(cfg, cfg.output_dir, moments_opts.worker_count());
            print_files(run.files);
            return 0;
        }
        if (self->parsed()) return selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}
