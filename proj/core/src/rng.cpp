#include "tasac/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tasac {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng Rng::fork(std::uint64_t tag) const {
    std::uint64_t s = state_ ^ (0x6a09e667f3bcc909ULL + tag * 0xd1342543de82ef95ULL);
    // one scramble so fork(0) does not alias the parent stream
    splitmix64(s);
    return Rng(s);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::size_t>(wide >> 64);
}

double Rng::gaussian() {
    // u1 in (0, 1] so the log is finite
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gaussian_clipped(double c) {
    const double x = gaussian();
    if (x > c) return c;
    if (x < -c) return -c;
    return x;
}

std::vector<double> Rng::gaussian_vector(std::size_t n) {
    std::vector<double> out(n);
    for (auto& x : out) x = gaussian();
    return out;
}

}  // namespace tasac
