#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "glevy/model.hpp"

namespace glevy {

// Sampled scalar field plus the local derivatives needed to evaluate G_X at
// the origin. Points must cover x and every x + z_j of the jump quadrature.
struct LocalFunctionProbe {
    std::vector<std::pair<std::vector<double>, double>> samples;
    std::vector<double> grad0;     // Df(0), optional
    std::vector<double> hess0;     // D²f(0) row-major, optional

    double at(const std::vector<double>& x) const;
};

// G^c(A) = max_Q ½ tr[A Q Qᵀ] over the finite volatility family.
double eval_gc(const std::vector<double>& a_sym, const UncertaintySet& u);
inline double eval_gc(double a_scalar, const UncertaintySet& u) {
    return eval_gc(std::vector<double>{a_scalar}, u);
}

// G^d(w, x) = max_v Σ_j [w(x + z_j) − w(x)] w_j(v); 0 for an empty family.
// The generic form takes any callable w so the PDE stepper can pass a grid
// interpolant without building probes.
template <class F>
double eval_gd_fn(F&& w, const std::vector<double>& x, const UncertaintySet& u) {
    if (u.jump_free()) return 0.0;
    const double wx = w(x);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> shifted(x.size());
    for (const auto& v : u.measures()) {
        double s = 0.0;
        for (const auto& atom : v.atoms()) {
            for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + atom.z[i];
            s += (w(shifted) - wx) * atom.w;
        }
        best = std::max(best, s);
    }
    return best;
}

double eval_gd(const LocalFunctionProbe& w, const std::vector<double>& x, const UncertaintySet& u);
double eval_gd(const LocalFunctionProbe& w, double x, const UncertaintySet& u);

// G_X[f] = G^d(f, 0) + G^c(D²f(0)); the drift term vanishes because the set
// has no drift component, and the product form splits the joint sup.
double eval_gx(const LocalFunctionProbe& f, const UncertaintySet& u);

struct ControlIndices {
    int v_index = -1;  // -1 in jump-free mode
    int q_index = 0;
};

// Indices attaining the two separate maxima; ties resolve to the lowest index.
template <class F>
ControlIndices argmax_controls_fn(const std::vector<double>& a_sym, F&& w,
                                  const std::vector<double>& x, const UncertaintySet& u) {
    ControlIndices out;
    double best_c = -std::numeric_limits<double>::infinity();
    for (std::size_t qi = 0; qi < u.vols().size(); ++qi) {
        const double val = 0.5 * u.vols()[qi].gram_dot(a_sym);
        if (val > best_c) {
            best_c = val;
            out.q_index = static_cast<int>(qi);
        }
    }
    if (!u.jump_free()) {
        const double wx = w(x);
        double best_d = -std::numeric_limits<double>::infinity();
        std::vector<double> shifted(x.size());
        for (std::size_t vi = 0; vi < u.measures().size(); ++vi) {
            double s = 0.0;
            for (const auto& atom : u.measures()[vi].atoms()) {
                for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + atom.z[i];
                s += (w(shifted) - wx) * atom.w;
            }
            if (s > best_d) {
                best_d = s;
                out.v_index = static_cast<int>(vi);
            }
        }
    }
    return out;
}

ControlIndices argmax_controls(const std::vector<double>& a_sym, const LocalFunctionProbe& w,
                               const std::vector<double>& x, const UncertaintySet& u);

}  // namespace glevy
