#pragma once

#include <cstdint>

namespace embq {

// Counter-based pseudo-randomness: every value is a pure function of the
// keys mixed in, so parallel and serial consumers see identical streams.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix(uint64_t a, uint64_t b) {
    return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 1))) ^ splitmix64(b + 0x165667b19e3779f9ULL);
}

// Uniform in [0, 1).
inline double unit_double(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small keyed stream for test/formula generation; deterministic by seed.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x2545f4914f6cdd1dULL)) {}

    uint64_t next() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Uniform in [0, n).
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

    double unit() { return unit_double(next()); }

  private:
    uint64_t state_;
};

} // namespace embq
