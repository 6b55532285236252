#include "glevy/control_sim.hpp"

#include <algorithm>
#include <cmath>

#include "glevy/parallel.hpp"

namespace glevy {

ControlPolicy ControlPolicy::constant(int v_index, int q_index, std::string name) {
    ControlPolicy p;
    p.constant_ = ControlIndices{v_index, q_index};
    if (name.empty())
        name = "constant(v=" + std::to_string(v_index) + ",q=" + std::to_string(q_index) + ")";
    p.name_ = std::move(name);
    return p;
}

ControlPolicy ControlPolicy::greedy(std::shared_ptr<const GreedyPolicy> table, Grid grid, int nt,
                                    std::string name) {
    ControlPolicy p;
    p.table_ = std::move(table);
    p.grid_ = grid;
    p.nt_ = nt;
    p.name_ = std::move(name);
    return p;
}

ControlIndices ControlPolicy::at(double t, double x) const {
    if (!table_) return constant_;
    const double dt = grid_.T / nt_;
    int k = static_cast<int>(std::lround(t / dt));
    k = std::clamp(k, 0, nt_);
    int i = static_cast<int>(std::lround((x - grid_.x_min) / grid_.dx()));
    i = std::clamp(i, 0, grid_.nx - 1);
    return table_->at(k, i);
}

PathSample simulate_path(const UncertaintySet& u, const ControlPolicy& policy, double horizon,
                         double mesh_dt, std::uint64_t master_seed, std::uint64_t path_index) {
    if (!(mesh_dt > 0.0)) throw Error(ErrorCode::BadArgument, "mesh_dt must be positive");
    const int n_steps = std::max(1, static_cast<int>(std::ceil(horizon / mesh_dt - 1e-12)));
    const double dt = horizon / n_steps;
    const double sqrt_dt = std::sqrt(dt);

    PathRng rng(master_seed, path_index);
    PathSample path;
    path.mesh_dt = dt;
    path.horizon = horizon;
    path.seed = master_seed;
    path.x.resize(n_steps + 1, 0.0);
    path.brownian.resize(n_steps);
    path.sigma.resize(n_steps);
    path.v_index.resize(n_steps);

    // dominating-measure proposal setup (c_upper * pi)
    const bool has_jumps = !u.jump_free();
    std::vector<double> cum_pi;
    double proposal_rate = 0.0;
    if (has_jumps) {
        double acc = 0.0;
        for (const auto& a : u.reference().atoms()) {
            acc += a.w;
            cum_pi.push_back(acc);
        }
        proposal_rate = u.c_upper() * acc;
    }

    for (int k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        const ControlIndices ctrl = policy.at(t, path.x[k]);
        const double sigma = u.vols()[ctrl.q_index].sigma();
        path.sigma[k] = sigma;
        path.v_index[k] = has_jumps ? ctrl.v_index : -1;

        const double db = sqrt_dt * rng.normal();
        path.brownian[k] = db;
        double next = path.x[k] + sigma * db;

        if (has_jumps && ctrl.v_index >= 0) {
            const auto& v = u.measures()[ctrl.v_index];
            const int proposals = rng.poisson(proposal_rate * dt);
            std::vector<double> times(proposals);
            for (auto& tm : times) tm = t + rng.uniform() * dt;
            std::sort(times.begin(), times.end());
            for (double tm : times) {
                const int j = rng.categorical(cum_pi);
                const auto& atom = u.reference().atoms()[j];
                const double accept = v.weight_at(atom.z) / (u.c_upper() * atom.w);
                if (rng.uniform() <= accept) {
                    const double mark = atom.z[0];
                    path.jumps.push_back({tm, mark, k});
                    next += mark;
                }
            }
        }
        path.x[k + 1] = next;
    }
    return path;
}

namespace detail {

void run_paths(const UncertaintySet& u, const ControlPolicy& policy, double horizon,
               const McParams& mc, const std::function<void(std::size_t, const PathSample&)>& fn) {
    parallel_for(static_cast<std::size_t>(mc.n_paths), mc.threads, [&](std::size_t p) {
        const PathSample path = simulate_path(u, policy, horizon, mc.mesh_dt, mc.seed, p);
        fn(p, path);
    });
}

}  // namespace detail

std::vector<PathSample> sample_paths(const UncertaintySet& u, const ControlPolicy& policy,
                                     double horizon, const McParams& mc) {
    std::vector<PathSample> out(static_cast<std::size_t>(mc.n_paths));
    for_each_path(u, policy, horizon, mc,
                  [&out](std::size_t p, const PathSample& path) { out[p] = path; });
    return out;
}

namespace {

McEstimate reduce_in_order(const std::vector<double>& values, std::uint64_t seed) {
    McEstimate est;
    est.n_paths = static_cast<int>(values.size());
    est.seed = seed;
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / est.n_paths;
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.se = est.n_paths > 1 ? std::sqrt(ss / (est.n_paths - 1) / est.n_paths) : 0.0;
    return est;
}

}  // namespace

McEstimate mc_expect(const UncertaintySet& u, const ControlPolicy& policy,
                     const TerminalFunction& phi, double horizon, const McParams& mc) {
    std::vector<double> values(static_cast<std::size_t>(mc.n_paths));
    for_each_path(u, policy, horizon, mc, [&](std::size_t p, const PathSample& path) {
        values[p] = phi(path.x_final());
    });
    return reduce_in_order(values, mc.seed);
}

DualityReport duality_gap(const UncertaintySet& u, const TerminalFunction& phi, const Grid& grid,
                          const std::vector<ControlPolicy>& policies, const McParams& mc,
                          const GridSolution* presolved) {
    GridSolution local;
    const GridSolution* sol = presolved;
    if (!sol) {
        local = solve_backward(u, phi, grid, SolveOptions{mc.threads, true});
        sol = &local;
    }

    DualityReport report;
    report.pde_value = sol->u00();
    report.scheme_tol = grid.scheme_tol;

    double greedy_mean = report.pde_value;
    for (const auto& policy : policies) {
        const McEstimate est = mc_expect(u, policy, phi, grid.T, mc);
        PolicyValue row;
        row.name = policy.name();
        row.mc_mean = est.mean;
        row.se = est.se;
        row.violation = est.mean - report.pde_value - 3.0 * est.se - grid.scheme_tol;
        report.all_bounded = report.all_bounded && row.violation <= 0.0;
        if (!policy.is_constant()) greedy_mean = est.mean;
        report.policies.push_back(std::move(row));
    }
    report.greedy_rel_gap =
        (report.pde_value - greedy_mean) / std::max(1.0, std::abs(report.pde_value));
    return report;
}

}  // namespace glevy
