#pragma once

#include <cstdint>
#include <vector>

namespace tasac {

/// Counter-based deterministic random generator (splitmix64 core).
///
/// The same seed and the same call sequence give bitwise-identical output on
/// every run; no global state, no libc/libstdc++ distribution dependence.
/// Independent streams are derived with fork().
class Rng {
public:
    Rng() = default;
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Derive an independent stream; mixing the tag keeps sibling forks decorrelated.
    Rng fork(std::uint64_t tag) const;

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n); n must be > 0. Lemire multiply-shift, no modulo bias.
    std::size_t uniform_index(std::size_t n);

    /// Standard normal via Box-Muller. Consumes exactly two uniforms per call.
    double gaussian();

    /// Standard normal clipped to [-c, c]. Single draw, fixed consumption.
    double gaussian_clipped(double c);

    std::vector<double> gaussian_vector(std::size_t n);

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

private:
    std::uint64_t state_ = 0x9e3779b97f4a7c15ULL;
};

}  // namespace tasac
