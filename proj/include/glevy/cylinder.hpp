#pragma once

#include <span>
#include <vector>

#include "glevy/model.hpp"
#include "glevy/payoff.hpp"
#include "glevy/pide.hpp"

namespace glevy {

// xi = phi(X_{t1}, X_{t2} - X_{t1}, ..., X_{tn} - X_{tn-1}) with phi bounded
// Lipschitz over the increments. The smooth tag applies to the last-interval
// terminal condition; intermediate layers are lattice interpolants and are
// always mollified.
struct CylinderFunctional {
    std::vector<double> times;  // strictly increasing, times.front() > 0
    Payoff payoff;
    bool smooth = false;

    int n() const { return static_cast<int>(times.size()); }
    double operator()(std::span<const double> increments) const { return payoff(increments); }

    void validate() const;
};

// Layers of the backward iterated construction, realized on a tensor grid
// over increment space. Layer i is the conditional value after observing i
// increments; layer 0 is the constant E[xi].
class MartingaleLattice {
public:
    struct Stage {
        // interval ]t_{k-1}, t_k] with k - 1 conditioning axes; solutions are
        // stored row-major with the last axis fastest
        std::vector<GridSolution> sols;
        std::vector<double> layer_vals;  // layer_{k-1} at the lattice nodes
        double t_begin = 0.0;
        double t_end = 0.0;
    };

    MartingaleLattice() = default;

    double expect() const { return stages_.front().layer_vals.front(); }

    // E[xi | F_{t_i}] evaluated at the observed increments (i = 0..n)
    double conditional(int i, std::span<const double> observed) const;

    int n() const { return static_cast<int>(stages_.size()); }
    const std::vector<double>& axis() const { return axis_; }
    const Stage& stage(int k) const { return stages_[static_cast<std::size_t>(k) - 1]; }  // k = 1..n
    const CylinderFunctional& functional() const { return xi_; }
    double bound() const { return bound_; }

    // multilinear interpolation over the first `n_axes` axes of a stage tensor
    double interp_nodes(const std::vector<double>& tensor, int n_axes,
                        std::span<const double> coords) const;

private:
    friend MartingaleLattice martingale_lattice(const UncertaintySet&, const CylinderFunctional&,
                                                const Grid&, int, int, int);
    CylinderFunctional xi_;
    std::vector<double> axis_;
    std::vector<Stage> stages_;  // index 0 = stage 1 (first interval)
    double bound_ = 0.0;
};

// Full backward recursion; cost is exponential in n, guarded by n_max.
MartingaleLattice martingale_lattice(const UncertaintySet& u, const CylinderFunctional& xi,
                                     const Grid& grid, int lattice_nx = 81, int n_max = 3,
                                     int threads = 1);

double expect(const UncertaintySet& u, const CylinderFunctional& xi, const Grid& grid,
              int lattice_nx = 81, int n_max = 3, int threads = 1);

double conditional_expect(const MartingaleLattice& lattice, int i,
                          std::span<const double> observed);

}  // namespace glevy
