#pragma once

#include <cstdint>
#include <random>

namespace reachmlp {

/// Seeded random source with a fully pinned output sequence: mt19937_64
/// (whose stream is fixed by the standard) mapped to doubles by taking the
/// top 53 bits. No std::*_distribution is used anywhere, so identical seeds
/// give identical draws on every platform.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Deterministic disjoint sub-seed (splitmix64 of seed and stream id);
    /// used to hand independent streams to worker threads.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace reachmlp
