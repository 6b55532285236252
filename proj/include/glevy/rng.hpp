#pragma once

#include <cstdint>
#include <random>

namespace glevy {

// splitmix64: mixes (master seed, stream index) into an independent 64-bit
// seed. Per-path generators derived this way do not depend on how paths are
// distributed over threads, which is what makes the MC estimates bit-identical
// for any thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x51ed2700d47e15ccULL));
}

// Per-stream generator with the handful of draws the simulator needs.
class PathRng {
public:
    PathRng(std::uint64_t master, std::uint64_t stream)
        : engine_(derive_seed(master, stream)) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::poisson_distribution<int> dist(mean);
        return dist(engine_);
    }

    // index into a discrete distribution given cumulative weights (last = total)
    int categorical(const std::vector<double>& cum) {
        const double u = uniform() * cum.back();
        for (std::size_t i = 0; i < cum.size(); ++i)
            if (u <= cum[i]) return static_cast<int>(i);
        return static_cast<int>(cum.size()) - 1;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace glevy
