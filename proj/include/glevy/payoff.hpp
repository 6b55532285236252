#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "glevy/errors.hpp"

namespace glevy {

// Payoffs are compositions of a fixed primitive vocabulary — clip, quadratic,
// abs, linear combination, min/max — over increment variables, so a Lipschitz
// constant and a sup bound are always computable alongside the value.
class Payoff {
public:
    struct Stats {
        double lo = 0.0;       // value range (may be ±inf)
        double hi = 0.0;
        double lip = 0.0;      // Lipschitz constant w.r.t. the sup norm of the arguments
        double bound() const;  // sup |f|, inf when the range is unbounded
        bool bounded() const;
    };

    Payoff() = default;

    static Payoff var(int index);
    static Payoff constant(double c);
    static Payoff linear(std::vector<std::pair<double, Payoff>> terms, double bias = 0.0);
    static Payoff quadratic(Payoff arg);
    static Payoff abs_of(Payoff arg);
    static Payoff minimum(std::vector<Payoff> args);
    static Payoff maximum(std::vector<Payoff> args);
    static Payoff clip(Payoff arg, double lo, double hi);

    // common shortcuts
    static Payoff clipped_var(int index, double lo, double hi) { return clip(var(index), lo, hi); }
    Payoff operator+(const Payoff& other) const { return linear({{1.0, *this}, {1.0, other}}); }
    Payoff operator-(const Payoff& other) const { return linear({{1.0, *this}, {-1.0, other}}); }
    Payoff scaled(double a) const { return linear({{a, *this}}); }

    bool empty() const { return !root_; }
    double operator()(std::span<const double> args) const;
    double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

    int n_args() const { return n_args_; }
    const Stats& stats() const { return stats_; }
    double lipschitz() const { return stats_.lip; }
    double bound() const { return stats_.bound(); }

private:
    struct Node;
    explicit Payoff(std::shared_ptr<const Node> root);
    static void analyze(const Node& n, Stats& stats, int& n_args);

    std::shared_ptr<const Node> root_;
    Stats stats_;
    int n_args_ = 0;
};

}  // namespace glevy
