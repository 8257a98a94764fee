#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace glv {

// Deterministic RNG for seeded sampling. mt19937's sequence is fixed by the
// standard, and we map to ranges by modulo ourselves because the standard
// distributions are implementation-defined (outputs must be byte-identical
// across platforms).
class DetRng {
public:
    explicit DetRng(std::uint32_t seed = 0) : gen_(seed) {}

    std::uint32_t next() { return gen_(); }

    // uniform in [lo, hi], inclusive
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<std::uint32_t>(hi - lo + 1));
    }

    int nonzero_int(int lo, int hi) {
        int v = 0;
        while (v == 0) v = uniform_int(lo, hi);
        return v;
    }

    // uniform in [0, 1) with 32 bits of resolution
    double uniform01() { return next() * (1.0 / 4294967296.0); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[next() % items.size()];
    }

private:
    std::mt19937 gen_;
};

} // namespace glv
