#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glevy/errors.hpp"

namespace glevy {

// One atom of a finite-activity jump measure: location z (never the origin)
// and intensity weight w > 0 per unit time.
struct Atom {
    std::vector<double> z;
    double w = 0.0;
};

class LevyMeasure {
public:
    LevyMeasure() = default;
    LevyMeasure(std::vector<Atom> atoms, int d);

    // d = 1 convenience
    static LevyMeasure from_scalar_atoms(const std::vector<std::pair<double, double>>& zw);

    const std::vector<Atom>& atoms() const { return atoms_; }
    int dim() const { return d_; }
    double mass() const;
    std::size_t size() const { return atoms_.size(); }

    // weight at location z, 0 if no atom there
    double weight_at(const std::vector<double>& z) const;

private:
    std::vector<Atom> atoms_;
    int d_ = 1;
};

// Q together with its Gram form a = Q Qᵀ (row-major, d x d).
class VolatilityMatrix {
public:
    VolatilityMatrix() = default;
    VolatilityMatrix(std::vector<double> q, int d);
    explicit VolatilityMatrix(double sigma);  // d = 1

    int dim() const { return d_; }
    const std::vector<double>& q() const { return q_; }
    const std::vector<double>& gram() const { return gram_; }
    double gram_trace() const;
    // tr[A Q Qᵀ] for symmetric A (row-major, d x d)
    double gram_dot(const std::vector<double>& a_sym) const;
    double sigma() const;  // d = 1 only

private:
    std::vector<double> q_;
    std::vector<double> gram_;
    int d_ = 1;
};

struct FamilyEnvelope {
    LevyMeasure pi;
    double c_lower = 1.0;
    double c_upper = 1.0;
};

// Pointwise upper envelope over the family on the union support.
// c_upper = 1 by construction, c_lower = min_{v, z} v({z}) / pi({z}).
// Fails with DegenerateDensityRatio when some measure misses an atom carried
// by another one (the ratio would be 0).
FamilyEnvelope validate_levy_family(const std::vector<LevyMeasure>& measures);

struct EllipticityWitness {
    std::vector<double> a;
    std::vector<double> b;
    double margin = 0.0;
};

struct NonDegeneracyReport {
    double lk_bound = 0.0;
    bool density_ratio_ok = false;
    bool ellipticity_ok = false;
    bool density_ratio_skipped = false;   // jump-free mode
    bool ellipticity_skipped = false;     // diffusion-free mode
    double worst_ellipticity_margin = 0.0;
    double c_lower = 0.0;
    double c_upper = 0.0;
    std::optional<EllipticityWitness> ellipticity_witness;
    std::vector<std::string> notes;
};

// The product set U = V x {0} x Q with reference measure pi and the
// non-degeneracy constants. Immutable after construction.
class UncertaintySet {
public:
    UncertaintySet(std::vector<LevyMeasure> measures,
                   std::vector<VolatilityMatrix> vols,
                   double sigma_lower_sq,
                   double lambda_max,
                   int d);

    int dim() const { return d_; }
    const std::vector<LevyMeasure>& measures() const { return measures_; }
    const std::vector<VolatilityMatrix>& vols() const { return vols_; }
    const LevyMeasure& reference() const { return pi_; }
    double c_lower() const { return c_lower_; }
    double c_upper() const { return c_upper_; }
    double sigma_lower_sq() const { return sigma_lower_sq_; }
    double lambda_max() const { return lambda_max_; }

    bool jump_free() const { return measures_.empty(); }
    bool diffusion_free() const;

    double max_gram_trace() const;  // max_Q tr(Q Qᵀ)
    double max_jump_mass() const;   // sup_v v(R^d \ {0}), 0 in jump-free mode

private:
    std::vector<LevyMeasure> measures_;
    std::vector<VolatilityMatrix> vols_;
    LevyMeasure pi_;
    double c_lower_ = 1.0;
    double c_upper_ = 1.0;
    double sigma_lower_sq_ = 0.0;
    double lambda_max_ = 0.0;
    int d_ = 1;
};

// Randomized check of  sup_Q ½tr[A Q Qᵀ] − sup_Q ½tr[B Q Qᵀ] ≥ σ̲² tr(A−B)
// over sampled pairs A ≥ B. Exact (min over ½σ² − σ̲²) in d = 1.
NonDegeneracyReport validate_ellipticity(const std::vector<VolatilityMatrix>& vols,
                                         double sigma_lower_sq,
                                         int trials,
                                         std::uint64_t seed);

// sup over (v, Q) of  Σ_j |z_j| w_j + tr(Q Qᵀ);  finite by construction.
double lk_bound(const UncertaintySet& u);

// Full report: lk_bound + density-ratio check + ellipticity sampling,
// with skipped flags for the degenerate modes.
NonDegeneracyReport nondegeneracy_report(const UncertaintySet& u, int trials, std::uint64_t seed);

}  // namespace glevy
