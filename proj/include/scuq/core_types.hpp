#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scuq {

/// Raised when a deterministic solve cannot continue (non-finite state,
/// time-step underflow, negative depth).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Grid1D
// ---------------------------------------------------------------------------

/// Uniform cell-centered mesh on [x_min, x_max] with `n_ghost` ghost cells on
/// each side. Interior cells are indexed 0..n_cells-1; ghost cells use
/// negative indices and indices >= n_cells.
class Grid1D {
public:
    static constexpr int kDefaultGhost = 2;

    Grid1D(double x_min, double x_max, int n_cells, int n_ghost = kDefaultGhost)
        : x_min_(x_min), x_max_(x_max), n_cells_(n_cells), n_ghost_(n_ghost) {
        if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
            throw std::invalid_argument("Grid1D: bounds must be finite");
        }
        if (!(x_min < x_max)) {
            throw std::invalid_argument("Grid1D: x_min must be less than x_max");
        }
        if (n_cells < 4) {
            throw std::invalid_argument("Grid1D: n_cells must be >= 4");
        }
        if (n_ghost < 1) {
            throw std::invalid_argument("Grid1D: n_ghost must be >= 1");
        }
        dx_ = (x_max - x_min) / n_cells;
    }

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int n_cells() const { return n_cells_; }
    int n_ghost() const { return n_ghost_; }
    int n_total() const { return n_cells_ + 2 * n_ghost_; }
    double dx() const { return dx_; }

    /// Center of cell j (ghost indices allowed).
    double center(int j) const { return x_min_ + (j + 0.5) * dx_; }

    /// Position of interface i, the left face of cell i (i = 0..n_cells are
    /// the interior interfaces).
    double face(int i) const { return x_min_ + i * dx_; }

    /// Interior cell whose center is nearest to x (ties resolve to the right).
    int nearest_cell(double x) const {
        const double s = (x - x_min_) / dx_ - 0.5;
        const int j = static_cast<int>(std::floor(s + 0.5));
        return std::clamp(j, 0, n_cells_ - 1);
    }

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double x_min_;
    double x_max_;
    int n_cells_;
    int n_ghost_;
    double dx_{};
};

inline Grid1D build_grid(double x_min, double x_max, int n_cells) {
    return Grid1D(x_min, x_max, n_cells);
}

// ---------------------------------------------------------------------------
// StateField
// ---------------------------------------------------------------------------

/// Cell averages of `m` conserved components on a Grid1D, ghost cells
/// included. Storage is cell-major, so the components of one cell are
/// contiguous.
class StateField {
public:
    StateField(const Grid1D& grid, int m)
        : grid_(grid), m_(m), data_(static_cast<std::size_t>(grid.n_total()) * m, 0.0) {
        if (m < 1) {
            throw std::invalid_argument("StateField: need at least one component");
        }
    }

    const Grid1D& grid() const { return grid_; }
    int components() const { return m_; }

    double& operator()(int j, int k) { return data_[index(j, k)]; }
    double operator()(int j, int k) const { return data_[index(j, k)]; }

    std::span<double> cell(int j) { return {data_.data() + index(j, 0), static_cast<std::size_t>(m_)}; }
    std::span<const double> cell(int j) const {
        return {data_.data() + index(j, 0), static_cast<std::size_t>(m_)};
    }

    std::span<double> raw() { return data_; }
    std::span<const double> raw() const { return data_; }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    bool interior_finite() const {
        for (int j = 0; j < grid_.n_cells(); ++j) {
            for (int k = 0; k < m_; ++k) {
                if (!std::isfinite((*this)(j, k))) return false;
            }
        }
        return true;
    }

    /// Interior values of component k.
    std::vector<double> component(int k) const {
        std::vector<double> out(static_cast<std::size_t>(grid_.n_cells()));
        for (int j = 0; j < grid_.n_cells(); ++j) out[static_cast<std::size_t>(j)] = (*this)(j, k);
        return out;
    }

    StateField& operator+=(const StateField& o) {
        check_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    StateField& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    friend StateField operator+(StateField a, const StateField& b) { return a += b; }
    friend StateField operator*(double s, StateField a) { return a *= s; }

    friend bool operator==(const StateField& a, const StateField& b) {
        return a.grid_ == b.grid_ && a.m_ == b.m_ && a.data_ == b.data_;
    }

private:
    std::size_t index(int j, int k) const {
        return static_cast<std::size_t>(j + grid_.n_ghost()) * static_cast<std::size_t>(m_) +
               static_cast<std::size_t>(k);
    }
    void check_shape(const StateField& o) const {
        if (o.m_ != m_ || !(o.grid_ == grid_)) {
            throw std::invalid_argument("StateField: shape mismatch");
        }
    }

    Grid1D grid_;
    int m_;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// RandomSpace
// ---------------------------------------------------------------------------

enum class Distribution { Uniform };

/// Probability space of the scalar random input. Only the uniform law on
/// [-1, 1] is supported.
struct RandomSpace {
    Distribution distribution = Distribution::Uniform;

    double lower() const { return -1.0; }
    double upper() const { return 1.0; }
    double pdf(double xi) const { return (xi >= -1.0 && xi <= 1.0) ? 0.5 : 0.0; }
    bool contains(double xi) const { return xi >= lower() && xi <= upper(); }
};

// ---------------------------------------------------------------------------
// CollocationEnsemble
// ---------------------------------------------------------------------------

/// Final-time states of all deterministic realizations, in node order.
class CollocationEnsemble {
public:
    CollocationEnsemble(std::vector<double> nodes, std::optional<std::vector<double>> weights,
                        std::vector<StateField> states, RandomSpace space = {})
        : nodes_(std::move(nodes)), weights_(std::move(weights)), states_(std::move(states)), space_(space) {
        if (nodes_.empty() || nodes_.size() != states_.size()) {
            throw std::invalid_argument("CollocationEnsemble: node/state count mismatch");
        }
        for (std::size_t l = 0; l < nodes_.size(); ++l) {
            if (!space_.contains(nodes_[l])) {
                throw std::invalid_argument("CollocationEnsemble: node outside the support");
            }
            if (l > 0 && !(nodes_[l] > nodes_[l - 1])) {
                throw std::invalid_argument("CollocationEnsemble: nodes must be strictly increasing");
            }
        }
        for (const auto& s : states_) {
            if (!(s.grid() == states_.front().grid()) || s.components() != states_.front().components()) {
                throw std::invalid_argument("CollocationEnsemble: states must share grid and components");
            }
        }
        if (weights_) {
            if (weights_->size() != nodes_.size()) {
                throw std::invalid_argument("CollocationEnsemble: weight count mismatch");
            }
            double sum = 0.0;
            for (double w : *weights_) sum += w;
            if (std::abs(sum - 1.0) > 1e-12) {
                throw std::invalid_argument("CollocationEnsemble: weights must sum to 1");
            }
        }
    }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::optional<std::vector<double>>& weights() const { return weights_; }
    const std::vector<StateField>& states() const { return states_; }
    const RandomSpace& random_space() const { return space_; }
    const Grid1D& grid() const { return states_.front().grid(); }
    int components() const { return states_.front().components(); }

private:
    std::vector<double> nodes_;
    std::optional<std::vector<double>> weights_;
    std::vector<StateField> states_;
    RandomSpace space_;
};

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

enum class Problem { Example1, Example2, LakeAtRest, BurgersSmooth };
enum class Orientation { Shock, AsPrinted };
enum class CollocationMode { Gpc, Spline };
enum class NodeRule { Gauss, Uniform };
enum class SplineKind { Cubic, ShapePreserving };
enum class ShapeGoal { Positivity, Monotonicity, Convexity, C2 };
enum class Boundary { Free, Periodic };

struct CollocationConfig {
    CollocationMode mode = CollocationMode::Gpc;
    int L = 16;
    NodeRule node_rule = NodeRule::Gauss;

    friend bool operator==(const CollocationConfig&, const CollocationConfig&) = default;
};

struct RunConfig {
    Problem problem = Problem::Example1;
    Orientation orientation = Orientation::Shock;
    double gravity = 1.0;
    double xi = 0.0;  // realization used by single solves

    double x_min = -1.0;
    double x_max = 1.0;
    int n_cells = 1600;

    double final_time = 0.5;
    double cfl = 0.45;
    double minmod_theta = 1.3;
    Boundary boundary = Boundary::Free;

    CollocationConfig collocation{};
    SplineKind spline_kind = SplineKind::ShapePreserving;
    ShapeGoal shape_goal = ShapeGoal::Monotonicity;
    int quadrature_points = 10;
    int xi_grid_points = 201;
    int audit_points = 101;

    std::string output_dir = "out";
    std::string snapshot_path;

    Grid1D grid() const { return Grid1D(x_min, x_max, n_cells); }

    void validate() const {
        if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("RunConfig: cfl must lie in (0, 1)");
        if (!(minmod_theta >= 1.0 && minmod_theta <= 2.0)) {
            throw std::invalid_argument("RunConfig: minmod_theta must lie in [1, 2]");
        }
        if (collocation.L < 2) throw std::invalid_argument("RunConfig: L must be >= 2");
        if (!(final_time > 0.0)) throw std::invalid_argument("RunConfig: final_time must be positive");
        if (!(gravity > 0.0)) throw std::invalid_argument("RunConfig: gravity must be positive");
        if (quadrature_points < 1 || xi_grid_points < 2 || audit_points < 3) {
            throw std::invalid_argument("RunConfig: sampling densities too small");
        }
        (void)grid();
    }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace scuq
