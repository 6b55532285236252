#include "glevy/operators.hpp"

#include <limits>

namespace glevy {

double LocalFunctionProbe::at(const std::vector<double>& x) const {
    for (const auto& [p, v] : samples) {
        if (p.size() != x.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double scale = std::max({1.0, std::abs(p[i]), std::abs(x[i])});
            if (std::abs(p[i] - x[i]) > 1e-12 * scale) {
                match = false;
                break;
            }
        }
        if (match) return v;
    }
    throw Error(ErrorCode::MissingProbePoint, "probe does not cover a required evaluation point");
}

double eval_gc(const std::vector<double>& a_sym, const UncertaintySet& u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& q : u.vols()) best = std::max(best, 0.5 * q.gram_dot(a_sym));
    return best;
}

double eval_gd(const LocalFunctionProbe& w, const std::vector<double>& x, const UncertaintySet& u) {
    return eval_gd_fn([&w](const std::vector<double>& p) { return w.at(p); }, x, u);
}

double eval_gd(const LocalFunctionProbe& w, double x, const UncertaintySet& u) {
    return eval_gd(w, std::vector<double>{x}, u);
}

double eval_gx(const LocalFunctionProbe& f, const UncertaintySet& u) {
    const std::vector<double> origin(static_cast<std::size_t>(u.dim()), 0.0);
    const double jump = eval_gd(f, origin, u);
    const double diff = f.hess0.empty() ? 0.0 : eval_gc(f.hess0, u);
    return jump + diff;
}

ControlIndices argmax_controls(const std::vector<double>& a_sym, const LocalFunctionProbe& w,
                               const std::vector<double>& x, const UncertaintySet& u) {
    return argmax_controls_fn(a_sym, [&w](const std::vector<double>& p) { return w.at(p); }, x, u);
}

}  // namespace glevy
