#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glevy/model.hpp"
#include "glevy/pide.hpp"
#include "glevy/rng.hpp"

namespace glevy {

// A control is a (v, Q) selection per simulation step: either a fixed pair or
// a lookup into the greedy table on the PDE grid. The drift slot is zero.
class ControlPolicy {
public:
    static ControlPolicy constant(int v_index, int q_index, std::string name = {});
    static ControlPolicy greedy(std::shared_ptr<const GreedyPolicy> table, Grid grid, int nt,
                                std::string name = "greedy");

    ControlIndices at(double t, double x) const;
    const std::string& name() const { return name_; }
    bool is_constant() const { return table_ == nullptr; }

private:
    ControlIndices constant_{};
    std::shared_ptr<const GreedyPolicy> table_;
    Grid grid_{};
    int nt_ = 0;
    std::string name_;
};

struct JumpEvent {
    double time = 0.0;
    double mark = 0.0;
    int step = 0;
};

struct PathSample {
    double mesh_dt = 0.0;
    double horizon = 0.0;
    std::vector<double> x;         // state at mesh nodes, x[0] = 0
    std::vector<double> brownian;  // sqrt(dt)-scaled standard normals per step
    std::vector<double> sigma;     // active σ per step
    std::vector<int> v_index;      // active measure per step (-1 when jump-free)
    std::vector<JumpEvent> jumps;  // ordered by time
    std::uint64_t seed = 0;

    int n_steps() const { return static_cast<int>(brownian.size()); }
    double t(int k) const { return k * mesh_dt; }
    double x_final() const { return x.back(); }
};

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    int n_paths = 0;
    std::uint64_t seed = 0;
};

struct McParams {
    int n_paths = 10000;
    double mesh_dt = 1e-2;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Single controlled path. Jumps are generated by thinning from the dominating
// measure c_upper * pi: proposals arrive at its total rate and a proposal with
// mark z is accepted with probability v({z}) / (c_upper * pi({z})), which is
// exactly the density-ratio bound of the model and reproduces the law of v.
PathSample simulate_path(const UncertaintySet& u, const ControlPolicy& policy, double horizon,
                         double mesh_dt, std::uint64_t master_seed, std::uint64_t path_index);

std::vector<PathSample> sample_paths(const UncertaintySet& u, const ControlPolicy& policy,
                                     double horizon, const McParams& mc);

// Runs fn(path_index, path) for every path; per-index outputs make the result
// independent of the thread count.
template <class Fn>
void for_each_path(const UncertaintySet& u, const ControlPolicy& policy, double horizon,
                   const McParams& mc, Fn&& fn);

McEstimate mc_expect(const UncertaintySet& u, const ControlPolicy& policy,
                     const TerminalFunction& phi, double horizon, const McParams& mc);

struct PolicyValue {
    std::string name;
    double mc_mean = 0.0;
    double se = 0.0;
    // mc_mean - pde_value - 3*SE - scheme_tol; ≤ 0 is the dual lower bound
    double violation = 0.0;
};

struct DualityReport {
    double pde_value = 0.0;
    double scheme_tol = 0.0;
    std::vector<PolicyValue> policies;
    double greedy_rel_gap = 0.0;  // (pde - greedy mc) / max(1, |pde|)
    bool all_bounded = true;
};

// Every admissible control gives a lower bound on the PDE value; the greedy
// policy should nearly attain it.
DualityReport duality_gap(const UncertaintySet& u, const TerminalFunction& phi, const Grid& grid,
                          const std::vector<ControlPolicy>& policies, const McParams& mc,
                          const GridSolution* presolved = nullptr);

// --- implementation of the templated driver ---

namespace detail {
void run_paths(const UncertaintySet& u, const ControlPolicy& policy, double horizon,
               const McParams& mc, const std::function<void(std::size_t, const PathSample&)>& fn);
}

template <class Fn>
void for_each_path(const UncertaintySet& u, const ControlPolicy& policy, double horizon,
                   const McParams& mc, Fn&& fn) {
    detail::run_paths(u, policy, horizon, mc, std::function<void(std::size_t, const PathSample&)>(fn));
}

}  // namespace glevy
