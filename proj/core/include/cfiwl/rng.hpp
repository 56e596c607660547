#pragma once

#include <cstdint>

namespace cfiwl {

// Deterministic, self-contained PRNG (splitmix64). The standard library's
// distributions are implementation-defined, so every randomized component in
// this project draws through this type to keep records byte-for-byte
// reproducible across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound) via rejection sampling; bound > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x > limit);
        return x % bound;
    }

    int next_int(int lo, int hi) { // inclusive range
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool next_bool() { return (next_u64() & 1ULL) != 0; }

    // Probability p = num/den.
    bool next_bernoulli(std::uint64_t num, std::uint64_t den) {
        return next_below(den) < num;
    }

private:
    std::uint64_t state_;
};

} // namespace cfiwl
