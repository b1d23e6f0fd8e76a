#pragma once

// Plain-text key-value configuration for RunConfig.
//
//   # comment
//   [section]
//   key = value
//
// Sections: model, grid, solver, uq, output. Keys may also be given as
// "section.key" outside any section header. Unknown sections/keys and
// malformed values are errors. Blank values are allowed only for strings.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "scuq/core_types.hpp"

namespace scuq {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

inline constexpr NameTable<Problem, 4> kProblemNames{{{Problem::Example1, "example1"},
                                                      {Problem::Example2, "example2"},
                                                      {Problem::LakeAtRest, "lake_at_rest"},
                                                      {Problem::BurgersSmooth, "burgers_smooth"}}};
inline constexpr NameTable<Orientation, 2> kOrientationNames{
    {{Orientation::Shock, "shock"}, {Orientation::AsPrinted, "as_printed"}}};
inline constexpr NameTable<CollocationMode, 2> kModeNames{
    {{CollocationMode::Gpc, "gpc"}, {CollocationMode::Spline, "spline"}}};
inline constexpr NameTable<NodeRule, 2> kNodeRuleNames{{{NodeRule::Gauss, "gauss"}, {NodeRule::Uniform, "uniform"}}};
inline constexpr NameTable<SplineKind, 2> kSplineKindNames{
    {{SplineKind::Cubic, "cubic"}, {SplineKind::ShapePreserving, "shape_preserving"}}};
inline constexpr NameTable<ShapeGoal, 4> kShapeGoalNames{{{ShapeGoal::Positivity, "positivity"},
                                                         {ShapeGoal::Monotonicity, "monotonicity"},
                                                         {ShapeGoal::Convexity, "convexity"},
                                                         {ShapeGoal::C2, "c2"}}};
inline constexpr NameTable<Boundary, 2> kBoundaryNames{{{Boundary::Free, "free"}, {Boundary::Periodic, "periodic"}}};

template <class E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
    for (const auto& [e, name] : table) {
        if (e == value) return name;
    }
    throw std::logic_error("unnamed enum value");
}

template <class E, std::size_t N>
E parse_enum(const NameTable<E, N>& table, std::string_view text, std::string_view key) {
    for (const auto& [e, name] : table) {
        if (name == text) return e;
    }
    throw ConfigError("config: invalid value '" + std::string(text) + "' for " + std::string(key));
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& text, std::string_view key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("config: invalid real '" + text + "' for " + std::string(key));
    }
    return v;
}

inline int parse_int(const std::string& text, std::string_view key) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("config: invalid integer '" + text + "' for " + std::string(key));
    }
    return v;
}

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline std::string_view to_string(Problem v) { return detail::name_of(detail::kProblemNames, v); }
inline std::string_view to_string(Orientation v) { return detail::name_of(detail::kOrientationNames, v); }
inline std::string_view to_string(CollocationMode v) { return detail::name_of(detail::kModeNames, v); }
inline std::string_view to_string(NodeRule v) { return detail::name_of(detail::kNodeRuleNames, v); }
inline std::string_view to_string(SplineKind v) { return detail::name_of(detail::kSplineKindNames, v); }
inline std::string_view to_string(ShapeGoal v) { return detail::name_of(detail::kShapeGoalNames, v); }
inline std::string_view to_string(Boundary v) { return detail::name_of(detail::kBoundaryNames, v); }

inline Problem parse_problem(std::string_view s) { return detail::parse_enum(detail::kProblemNames, s, "problem"); }
inline Orientation parse_orientation(std::string_view s) {
    return detail::parse_enum(detail::kOrientationNames, s, "orientation");
}
inline ShapeGoal parse_shape_goal(std::string_view s) {
    return detail::parse_enum(detail::kShapeGoalNames, s, "shape_goal");
}

/// Sets one "section.key" entry of `cfg` from its textual value.
inline void apply_config_entry(RunConfig& cfg, std::string_view qualified_key, const std::string& value) {
    using namespace detail;
    const std::string key(qualified_key);
    if (key == "model.problem") cfg.problem = parse_enum(kProblemNames, value, key);
    else if (key == "model.orientation") cfg.orientation = parse_enum(kOrientationNames, value, key);
    else if (key == "model.gravity") cfg.gravity = parse_real(value, key);
    else if (key == "model.xi") cfg.xi = parse_real(value, key);
    else if (key == "grid.x_min") cfg.x_min = parse_real(value, key);
    else if (key == "grid.x_max") cfg.x_max = parse_real(value, key);
    else if (key == "grid.n_cells") cfg.n_cells = parse_int(value, key);
    else if (key == "solver.final_time") cfg.final_time = parse_real(value, key);
    else if (key == "solver.cfl") cfg.cfl = parse_real(value, key);
    else if (key == "solver.minmod_theta") cfg.minmod_theta = parse_real(value, key);
    else if (key == "solver.boundary") cfg.boundary = parse_enum(kBoundaryNames, value, key);
    else if (key == "uq.mode") cfg.collocation.mode = parse_enum(kModeNames, value, key);
    else if (key == "uq.L") cfg.collocation.L = parse_int(value, key);
    else if (key == "uq.node_rule") cfg.collocation.node_rule = parse_enum(kNodeRuleNames, value, key);
    else if (key == "uq.spline_kind") cfg.spline_kind = parse_enum(kSplineKindNames, value, key);
    else if (key == "uq.shape_goal") cfg.shape_goal = parse_enum(kShapeGoalNames, value, key);
    else if (key == "uq.quadrature_points") cfg.quadrature_points = parse_int(value, key);
    else if (key == "uq.xi_grid_points") cfg.xi_grid_points = parse_int(value, key);
    else if (key == "uq.audit_points") cfg.audit_points = parse_int(value, key);
    else if (key == "output.dir") cfg.output_dir = value;
    else if (key == "output.snapshot") cfg.snapshot_path = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

/// Parses configuration text on top of `base` (defaults when omitted).
inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = detail::trim(line);
        if (s.empty() || s.front() == '#' || s.front() == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError("config: line " + std::to_string(line_no) + ": malformed section header");
            }
            section = detail::trim(std::string_view(s).substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = detail::trim(std::string_view(s).substr(0, eq));
        std::string value = detail::trim(std::string_view(s).substr(eq + 1));
        if (key.find('.') == std::string::npos) {
            if (section.empty()) {
                throw ConfigError("config: line " + std::to_string(line_no) + ": key outside a section");
            }
            key = section + "." + key;
        }
        try {
            apply_config_entry(base, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config: line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

/// Serializes every RunConfig field; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
    using detail::format_real;
    std::ostringstream o;
    o << "[model]\n"
      << "problem = " << to_string(c.problem) << "\n"
      << "orientation = " << to_string(c.orientation) << "\n"
      << "gravity = " << format_real(c.gravity) << "\n"
      << "xi = " << format_real(c.xi) << "\n"
      << "\n[grid]\n"
      << "x_min = " << format_real(c.x_min) << "\n"
      << "x_max = " << format_real(c.x_max) << "\n"
      << "n_cells = " << c.n_cells << "\n"
      << "\n[solver]\n"
      << "final_time = " << format_real(c.final_time) << "\n"
      << "cfl = " << format_real(c.cfl) << "\n"
      << "minmod_theta = " << format_real(c.minmod_theta) << "\n"
      << "boundary = " << to_string(c.boundary) << "\n"
      << "\n[uq]\n"
      << "mode = " << to_string(c.collocation.mode) << "\n"
      << "L = " << c.collocation.L << "\n"
      << "node_rule = " << to_string(c.collocation.node_rule) << "\n"
      << "spline_kind = " << to_string(c.spline_kind) << "\n"
      << "shape_goal = " << to_string(c.shape_goal) << "\n"
      << "quadrature_points = " << c.quadrature_points << "\n"
      << "xi_grid_points = " << c.xi_grid_points << "\n"
      << "audit_points = " << c.audit_points << "\n"
      << "\n[output]\n"
      << "dir = " << c.output_dir << "\n"
      << "snapshot = " << c.snapshot_path << "\n";
    return o.str();
}

}  // namespace scuq
