#pragma once

#include <functional>
#include <vector>

#include "glevy/model.hpp"
#include "glevy/operators.hpp"
#include "glevy/payoff.hpp"

namespace glevy {

// Uniform space-time grid for the backward solve, d = 1 reference layout.
// nt == 0 asks the solver to pick the step count from the CFL bound.
struct Grid {
    double x_min = -1.0;
    double x_max = 1.0;
    int nx = 101;
    double T = 1.0;
    int nt = 0;
    double report_radius = 0.0;   // interior region insulated from the boundary
    double scheme_tol = 1e-2;    // declared a-priori tolerance, echoed in reports
    double safety_margin = 0.0;  // extra span required beyond the jump diameter

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double x(int i) const { return x_min + i * dx(); }

    // dt * (max_Q tr(QQᵀ)/dx² + sup_v mass); must be ≤ 1 for monotonicity
    double cfl_number(const UncertaintySet& u, int steps) const;
    int resolved_nt(const UncertaintySet& u) const;
};

// Terminal data with its declared Lipschitz constant and bound. The smooth
// tag decides whether the solver mollifies before stepping.
struct TerminalFunction {
    std::function<double(double)> f;
    double lipschitz = 0.0;
    double bound = 0.0;
    bool smooth = false;
    double mollify_width = 0.0;  // 0 -> solver default 2*dx

    static TerminalFunction from_payoff(const Payoff& p, bool smooth_tag);
    double operator()(double x) const { return f(x); }
};

// Convolution with the standard compactly supported bump, realized by a fixed
// normalized quadrature; preserves the Lipschitz constant and the bound, and
// stays within lipschitz * eps of the input in sup norm.
TerminalFunction mollify(const TerminalFunction& phi, double eps);

class GridSolution {
public:
    GridSolution() = default;
    GridSolution(Grid grid, int nt, std::vector<std::vector<double>> layers);

    const Grid& grid() const { return grid_; }
    int nt() const { return nt_; }
    double dt() const { return grid_.T / nt_; }
    int nx() const { return grid_.nx; }

    const std::vector<double>& layer(int k) const { return layers_[k]; }
    double at(int k, int i) const { return layers_[k][i]; }

    // linear interpolation in x with constant extension outside the grid
    double value(int k, double x) const;
    // additionally linear in t between layers
    double value_time(double t, double x) const;

    double u00() const { return value(0, 0.0); }

private:
    Grid grid_;
    int nt_ = 0;
    std::vector<std::vector<double>> layers_;  // [k][i], k = 0..nt
};

struct DerivativeFields {
    std::vector<std::vector<double>> du;   // central interior, one-sided at the edges
    std::vector<std::vector<double>> d2u;  // same stencils the stepper uses

    double du_at(const GridSolution& sol, double t, double x) const;
    double d2u_at(const GridSolution& sol, double t, double x) const;
};

struct SolveOptions {
    int threads = 1;
    bool mollify_lipschitz = true;  // width 2*dx unless the terminal overrides
};

// Explicit monotone scheme for  ∂_t u + G^c(D²u) + G^d(u(t, x+·) − u(t,x)) = 0
// backward from u(T, ·) = φ. Off-grid jump targets are linearly interpolated
// with constant extension of the current layer.
GridSolution solve_backward(const UncertaintySet& u, const TerminalFunction& phi,
                            const Grid& grid, const SolveOptions& opts = {});

DerivativeFields derivatives(const GridSolution& sol);

// Per-node maximizing (v, Q) indices, ties to the lowest index.
class GreedyPolicy {
public:
    GreedyPolicy() = default;
    GreedyPolicy(int nt, int nx, std::vector<ControlIndices> table)
        : nt_(nt), nx_(nx), table_(std::move(table)) {}

    const ControlIndices& at(int k, int i) const { return table_[static_cast<std::size_t>(k) * nx_ + i]; }
    int nt() const { return nt_; }
    int nx() const { return nx_; }

private:
    int nt_ = 0;
    int nx_ = 0;
    std::vector<ControlIndices> table_;
};

GreedyPolicy greedy_policy(const GridSolution& sol, const UncertaintySet& u);

}  // namespace glevy
