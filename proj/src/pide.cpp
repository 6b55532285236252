#include "glevy/pide.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glevy/parallel.hpp"

namespace glevy {

double Grid::cfl_number(const UncertaintySet& u, int steps) const {
    const double dt = T / steps;
    const double dx2 = dx() * dx();
    return dt * (u.max_gram_trace() / dx2 + u.max_jump_mass());
}

int Grid::resolved_nt(const UncertaintySet& u) const {
    if (nt > 0) return nt;
    const double rate = u.max_gram_trace() / (dx() * dx()) + u.max_jump_mass();
    const int steps = static_cast<int>(std::ceil(T * rate / 0.9));
    return std::max(steps, 1);
}

TerminalFunction TerminalFunction::from_payoff(const Payoff& p, bool smooth_tag) {
    if (p.n_args() > 1)
        throw Error(ErrorCode::BadArgument, "terminal data must be a single-argument payoff");
    if (!p.stats().bounded() || !std::isfinite(p.lipschitz()))
        throw Error(ErrorCode::UnboundedPayoff,
                    "terminal data must be bounded Lipschitz; wrap unbounded variables in clip");
    return TerminalFunction{[p](double x) { return p(x); }, p.lipschitz(), p.bound(), smooth_tag, 0.0};
}

namespace {

// normalized quadrature of the standard bump exp(-1/(1-s²)) on [-1, 1]
struct BumpQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;  // sum exactly 1

    BumpQuadrature() {
        constexpr int n = 41;  // composite Simpson, odd count
        nodes.resize(n);
        weights.resize(n);
        const double h = 2.0 / (n - 1);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double s = -1.0 + i * h;
            const double simpson = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            const double bump = std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
            nodes[i] = s;
            weights[i] = simpson * bump;
            total += weights[i];
        }
        for (auto& w : weights) w /= total;
    }
};

const BumpQuadrature& bump_quadrature() {
    static const BumpQuadrature q;
    return q;
}

}  // namespace

TerminalFunction mollify(const TerminalFunction& phi, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::BadArgument, "mollification width must be positive");
    const auto& q = bump_quadrature();
    auto f = phi.f;
    auto nodes = q.nodes;
    auto weights = q.weights;
    TerminalFunction out;
    out.f = [f = std::move(f), nodes = std::move(nodes), weights = std::move(weights), eps](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(x - eps * nodes[i]);
        return s;
    };
    out.lipschitz = phi.lipschitz;
    out.bound = phi.bound;
    out.smooth = true;
    out.mollify_width = 0.0;
    return out;
}

GridSolution::GridSolution(Grid grid, int nt, std::vector<std::vector<double>> layers)
    : grid_(grid), nt_(nt), layers_(std::move(layers)) {}

double GridSolution::value(int k, double x) const {
    const auto& u = layers_[k];
    const double s = (x - grid_.x_min) / grid_.dx();
    if (s <= 0.0) return u.front();
    if (s >= grid_.nx - 1) return u.back();
    const int i = static_cast<int>(s);
    const double frac = s - i;
    return u[i] * (1.0 - frac) + u[i + 1] * frac;
}

double GridSolution::value_time(double t, double x) const {
    const double s = std::clamp(t / dt(), 0.0, static_cast<double>(nt_));
    const int k = std::min(static_cast<int>(s), nt_ - 1);
    const double frac = s - k;
    if (frac == 0.0) return value(k, x);
    return (1.0 - frac) * value(k, x) + frac * value(k + 1, x);
}

namespace {

// second difference with the scheme's stencils: central interior, shifted
// three-point at the edges (both exact on quadratics)
inline double second_diff(const std::vector<double>& u, int i, int nx, double inv_dx2) {
    if (i == 0) return (u[2] - 2.0 * u[1] + u[0]) * inv_dx2;
    if (i == nx - 1) return (u[nx - 1] - 2.0 * u[nx - 2] + u[nx - 3]) * inv_dx2;
    return (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dx2;
}

// linear interpolation of layer value at grid index i shifted by a fixed
// fractional offset (j0 + frac), constant extension outside
inline double shifted_value(const std::vector<double>& u, int nx, int i, int j0, double frac) {
    const int idx = i + j0;
    if (idx < 0) return u[0];
    if (idx >= nx - 1) return u[nx - 1];
    return u[idx] * (1.0 - frac) + u[idx + 1] * frac;
}

struct AtomOffset {
    int j0;
    double frac;
    double w;
};

// per-measure atom offsets in grid units
std::vector<std::vector<AtomOffset>> atom_offsets(const UncertaintySet& u, double dx) {
    std::vector<std::vector<AtomOffset>> out;
    out.reserve(u.measures().size());
    for (const auto& v : u.measures()) {
        std::vector<AtomOffset> offs;
        offs.reserve(v.size());
        for (const auto& a : v.atoms()) {
            const double s = a.z[0] / dx;
            const double fl = std::floor(s);
            offs.push_back({static_cast<int>(fl), s - fl, a.w});
        }
        out.push_back(std::move(offs));
    }
    return out;
}

}  // namespace

GridSolution solve_backward(const UncertaintySet& u, const TerminalFunction& phi,
                            const Grid& grid, const SolveOptions& opts) {
    if (u.dim() != 1)
        throw Error(ErrorCode::BadArgument, "the grid solver is the d = 1 reference implementation");
    if (grid.nx < 3) throw Error(ErrorCode::BadArgument, "nx must be at least 3");

    double max_jump = 0.0;
    for (const auto& v : u.measures())
        for (const auto& a : v.atoms()) max_jump = std::max(max_jump, std::abs(a.z[0]));
    if (grid.x_max - grid.x_min < 2.0 * max_jump + grid.safety_margin)
        throw Error(ErrorCode::BadArgument, "grid span is too small for the jump diameter");

    const int nt = grid.resolved_nt(u);
    if (grid.cfl_number(u, nt) > 1.0 + 1e-12)
        throw Error(ErrorCode::CflViolation, "dt * (max tr(QQᵀ)/dx² + sup mass) exceeds 1");

    const double dx = grid.dx();
    const double dt = grid.T / nt;
    const int nx = grid.nx;

    TerminalFunction term = phi;
    if (!phi.smooth && opts.mollify_lipschitz) {
        const double eps = phi.mollify_width > 0.0 ? phi.mollify_width : 2.0 * dx;
        term = mollify(phi, eps);
    }

    std::vector<std::vector<double>> layers(nt + 1, std::vector<double>(nx));
    auto& terminal = layers[nt];
    for (int i = 0; i < nx; ++i) terminal[i] = term(grid.x(i));

    // spot-check the declared bound and Lipschitz constant on the grid
    for (int i = 0; i < nx; ++i) {
        if (std::abs(terminal[i]) > term.bound * (1.0 + 1e-9) + 1e-12)
            throw Error(ErrorCode::BadArgument, "terminal data exceeds its declared bound");
        if (i > 0 && std::abs(terminal[i] - terminal[i - 1]) > term.lipschitz * dx * (1.0 + 1e-9) + 1e-12)
            throw Error(ErrorCode::BadArgument, "terminal data exceeds its declared Lipschitz constant");
    }

    const auto offsets = atom_offsets(u, dx);
    std::vector<double> half_grams;
    half_grams.reserve(u.vols().size());
    for (const auto& q : u.vols()) half_grams.push_back(0.5 * q.gram_trace());

    const double inv_dx2 = 1.0 / (dx * dx);
    for (int k = nt - 1; k >= 0; --k) {
        const auto& prev = layers[k + 1];
        auto& cur = layers[k];
        parallel_for(static_cast<std::size_t>(nx), opts.threads, [&](std::size_t ii) {
            const int i = static_cast<int>(ii);
            const double d2 = second_diff(prev, i, nx, inv_dx2);
            double gc = -std::numeric_limits<double>::infinity();
            for (double hg : half_grams) gc = std::max(gc, hg * d2);
            double gd = 0.0;
            if (!offsets.empty()) {
                gd = -std::numeric_limits<double>::infinity();
                const double ui = prev[i];
                for (const auto& offs : offsets) {
                    double s = 0.0;
                    for (const auto& o : offs) s += (shifted_value(prev, nx, i, o.j0, o.frac) - ui) * o.w;
                    gd = std::max(gd, s);
                }
            }
            cur[i] = prev[i] + dt * (gc + gd);
        });
        double worst = 0.0;
        for (double v : cur) worst = std::max(worst, std::abs(v));
        if (!std::isfinite(worst))
            throw Error(ErrorCode::NonFiniteValue, "the scheme produced a non-finite value");
    }

    return GridSolution(grid, nt, std::move(layers));
}

DerivativeFields derivatives(const GridSolution& sol) {
    const int nx = sol.nx();
    const double dx = sol.grid().dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    DerivativeFields out;
    out.du.assign(sol.nt() + 1, std::vector<double>(nx));
    out.d2u.assign(sol.nt() + 1, std::vector<double>(nx));
    for (int k = 0; k <= sol.nt(); ++k) {
        const auto& u = sol.layer(k);
        auto& du = out.du[k];
        auto& d2 = out.d2u[k];
        for (int i = 0; i < nx; ++i) {
            if (i == 0)
                du[i] = (u[1] - u[0]) / dx;
            else if (i == nx - 1)
                du[i] = (u[nx - 1] - u[nx - 2]) / dx;
            else
                du[i] = (u[i + 1] - u[i - 1]) / (2.0 * dx);
            d2[i] = second_diff(u, i, nx, inv_dx2);
        }
    }
    return out;
}

namespace {

double field_at(const std::vector<std::vector<double>>& field, const GridSolution& sol,
                double t, double x) {
    const double st = std::clamp(t / sol.dt(), 0.0, static_cast<double>(sol.nt()));
    const int k = std::min(static_cast<int>(st), sol.nt() - 1);
    const double ft = st - k;
    auto interp_x = [&](int layer) {
        const auto& u = field[layer];
        const double s = (x - sol.grid().x_min) / sol.grid().dx();
        if (s <= 0.0) return u.front();
        if (s >= sol.nx() - 1) return u.back();
        const int i = static_cast<int>(s);
        const double frac = s - i;
        return u[i] * (1.0 - frac) + u[i + 1] * frac;
    };
    if (ft == 0.0) return interp_x(k);
    return (1.0 - ft) * interp_x(k) + ft * interp_x(k + 1);
}

}  // namespace

double DerivativeFields::du_at(const GridSolution& sol, double t, double x) const {
    return field_at(du, sol, t, x);
}

double DerivativeFields::d2u_at(const GridSolution& sol, double t, double x) const {
    return field_at(d2u, sol, t, x);
}

GreedyPolicy greedy_policy(const GridSolution& sol, const UncertaintySet& u) {
    const int nx = sol.nx();
    const int nt = sol.nt();
    const double dx = sol.grid().dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    const auto offsets = atom_offsets(u, dx);

    std::vector<ControlIndices> table(static_cast<std::size_t>(nt + 1) * nx);
    for (int k = 0; k <= nt; ++k) {
        const auto& layer = sol.layer(k);
        for (int i = 0; i < nx; ++i) {
            ControlIndices idx;
            const double d2 = second_diff(layer, i, nx, inv_dx2);
            double best_c = -std::numeric_limits<double>::infinity();
            for (std::size_t qi = 0; qi < u.vols().size(); ++qi) {
                const double val = 0.5 * u.vols()[qi].gram_trace() * d2;
                if (val > best_c) {
                    best_c = val;
                    idx.q_index = static_cast<int>(qi);
                }
            }
            if (!offsets.empty()) {
                double best_d = -std::numeric_limits<double>::infinity();
                for (std::size_t vi = 0; vi < offsets.size(); ++vi) {
                    double s = 0.0;
                    for (const auto& o : offsets[vi])
                        s += (shifted_value(layer, nx, i, o.j0, o.frac) - layer[i]) * o.w;
                    if (s > best_d) {
                        best_d = s;
                        idx.v_index = static_cast<int>(vi);
                    }
                }
            }
            table[static_cast<std::size_t>(k) * nx + i] = idx;
        }
    }
    return GreedyPolicy(nt, nx, std::move(table));
}

}  // namespace glevy
