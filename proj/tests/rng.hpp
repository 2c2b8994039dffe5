#pragma once

// Deterministic RNG helpers shared by the property tests.  mt19937 output is
// reduced with explicit modulo: engines are portable across standard
// libraries, distributions are not.

#include <cstdint>
#include <random>

#include "berkdil/valuation.hpp"

namespace testing {

struct Rng {
    explicit Rng(std::uint32_t seed) : eng(seed) {}
    std::mt19937 eng;
    std::uint32_t raw() { return eng(); }
    long uniform(long lo, long hi) { // inclusive bounds
        return lo + static_cast<long>(raw() % static_cast<std::uint32_t>(hi - lo + 1));
    }
    bool flip() { return (raw() & 1u) != 0; }
};

// random nonzero rational with interesting ell-adic content
inline berkdil::ExactQ random_rational(Rng& rng, unsigned long ell) {
    long num = rng.uniform(1, 999983);
    long den = rng.uniform(1, 9973);
    if (rng.flip()) num = -num;
    mpq_class q(num, den);
    q.canonicalize();
    long e = rng.uniform(-6, 6);
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), ell, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) q *= pe;
    else q /= pe;
    q.canonicalize();
    return berkdil::ExactQ(q);
}

} // namespace testing
