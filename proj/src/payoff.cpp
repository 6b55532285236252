#include "glevy/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace glevy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

struct Payoff::Node {
    enum class Op { Var, Const, Linear, Quadratic, Abs, Min, Max, Clip };
    Op op;
    int index = 0;                                   // Var
    double value = 0.0;                              // Const
    double bias = 0.0;                               // Linear
    double lo = 0.0, hi = 0.0;                       // Clip
    std::vector<double> coefs;                       // Linear
    std::vector<std::shared_ptr<const Node>> args;

    double eval(std::span<const double> x) const {
        switch (op) {
            case Op::Var:
                return x[static_cast<std::size_t>(index)];
            case Op::Const:
                return value;
            case Op::Linear: {
                double s = bias;
                for (std::size_t i = 0; i < args.size(); ++i) s += coefs[i] * args[i]->eval(x);
                return s;
            }
            case Op::Quadratic: {
                const double v = args[0]->eval(x);
                return v * v;
            }
            case Op::Abs:
                return std::abs(args[0]->eval(x));
            case Op::Min: {
                double s = args[0]->eval(x);
                for (std::size_t i = 1; i < args.size(); ++i) s = std::min(s, args[i]->eval(x));
                return s;
            }
            case Op::Max: {
                double s = args[0]->eval(x);
                for (std::size_t i = 1; i < args.size(); ++i) s = std::max(s, args[i]->eval(x));
                return s;
            }
            case Op::Clip:
                return std::clamp(args[0]->eval(x), lo, hi);
        }
        return 0.0;
    }
};

double Payoff::Stats::bound() const {
    return std::max(std::abs(lo), std::abs(hi));
}

bool Payoff::Stats::bounded() const {
    return std::isfinite(lo) && std::isfinite(hi);
}

void Payoff::analyze(const Node& n, Stats& out, int& n_args) {
    using Node = Payoff::Node;
    std::vector<Stats> child;
    child.reserve(n.args.size());
    if (n.op == Node::Op::Var) n_args = std::max(n_args, n.index + 1);
    for (const auto& a : n.args) {
        Stats cs;
        analyze(*a, cs, n_args);
        child.push_back(cs);
    }
    Payoff::Stats s;
    switch (n.op) {
        case Node::Op::Var:
            s = {-kInf, kInf, 1.0};
            break;
        case Node::Op::Const:
            s = {n.value, n.value, 0.0};
            break;
        case Node::Op::Linear: {
            s = {n.bias, n.bias, 0.0};
            for (std::size_t i = 0; i < child.size(); ++i) {
                const double c = n.coefs[i];
                if (c == 0.0) continue;  // avoid 0 * inf on unbounded children
                const double a = c >= 0 ? child[i].lo : child[i].hi;
                const double b = c >= 0 ? child[i].hi : child[i].lo;
                s.lo += c * a;
                s.hi += c * b;
                s.lip += std::abs(c) * child[i].lip;
            }
            break;
        }
        case Node::Op::Quadratic: {
            const auto& c = child[0];
            const double m = std::max(std::abs(c.lo), std::abs(c.hi));
            s.hi = m * m;
            s.lo = (c.lo <= 0.0 && c.hi >= 0.0) ? 0.0
                                                : std::min(c.lo * c.lo, c.hi * c.hi);
            s.lip = std::isfinite(m) ? 2.0 * m * c.lip : kInf;
            break;
        }
        case Node::Op::Abs: {
            const auto& c = child[0];
            s.hi = std::max(std::abs(c.lo), std::abs(c.hi));
            s.lo = (c.lo <= 0.0 && c.hi >= 0.0) ? 0.0 : std::min(std::abs(c.lo), std::abs(c.hi));
            s.lip = c.lip;
            break;
        }
        case Node::Op::Min:
        case Node::Op::Max: {
            s = child[0];
            for (std::size_t i = 1; i < child.size(); ++i) {
                if (n.op == Node::Op::Min) {
                    s.lo = std::min(s.lo, child[i].lo);
                    s.hi = std::min(s.hi, child[i].hi);
                } else {
                    s.lo = std::max(s.lo, child[i].lo);
                    s.hi = std::max(s.hi, child[i].hi);
                }
                s.lip = std::max(s.lip, child[i].lip);
            }
            break;
        }
        case Node::Op::Clip: {
            const auto& c = child[0];
            s.lo = std::clamp(c.lo, n.lo, n.hi);
            s.hi = std::clamp(c.hi, n.lo, n.hi);
            s.lip = c.lip;
            break;
        }
    }
    out = s;
}

Payoff::Payoff(std::shared_ptr<const Node> root) : root_(std::move(root)) {
    n_args_ = 0;
    analyze(*root_, stats_, n_args_);
}

Payoff Payoff::var(int index) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Var;
    n->index = index;
    return Payoff(std::move(n));
}

Payoff Payoff::constant(double c) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Const;
    n->value = c;
    return Payoff(std::move(n));
}

Payoff Payoff::linear(std::vector<std::pair<double, Payoff>> terms, double bias) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Linear;
    n->bias = bias;
    for (auto& [c, p] : terms) {
        if (p.empty()) throw Error(ErrorCode::BadArgument, "empty payoff term");
        n->coefs.push_back(c);
        n->args.push_back(p.root_);
    }
    return Payoff(std::move(n));
}

Payoff Payoff::quadratic(Payoff arg) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Quadratic;
    n->args.push_back(arg.root_);
    return Payoff(std::move(n));
}

Payoff Payoff::abs_of(Payoff arg) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Abs;
    n->args.push_back(arg.root_);
    return Payoff(std::move(n));
}

Payoff Payoff::minimum(std::vector<Payoff> args) {
    if (args.empty()) throw Error(ErrorCode::BadArgument, "min of nothing");
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Min;
    for (auto& a : args) n->args.push_back(a.root_);
    return Payoff(std::move(n));
}

Payoff Payoff::maximum(std::vector<Payoff> args) {
    if (args.empty()) throw Error(ErrorCode::BadArgument, "max of nothing");
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Max;
    for (auto& a : args) n->args.push_back(a.root_);
    return Payoff(std::move(n));
}

Payoff Payoff::clip(Payoff arg, double lo, double hi) {
    if (!(lo < hi)) throw Error(ErrorCode::BadArgument, "clip bounds must satisfy lo < hi");
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Clip;
    n->lo = lo;
    n->hi = hi;
    n->args.push_back(arg.root_);
    return Payoff(std::move(n));
}

double Payoff::operator()(std::span<const double> args) const {
    if (!root_) throw Error(ErrorCode::BadArgument, "empty payoff");
    if (static_cast<int>(args.size()) < n_args_)
        throw Error(ErrorCode::BadArgument, "payoff called with too few arguments");
    return root_->eval(args);
}

}  // namespace glevy
