// Test-only oracles, kept independent of the library code paths they check.
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "lehmer/nat.hpp"

namespace lehmer::test {

// phi by definition: count of 1 <= k <= n coprime to n.
inline std::uint64_t brute_phi(std::uint64_t n) {
    std::uint64_t count = 0;
    for (std::uint64_t k = 1; k <= n; ++k) {
        if (std::gcd(k, n) == 1) ++count;
    }
    return count;
}

// 2-adic valuation by repeated division.
inline unsigned long naive_nu2(Nat n) {
    unsigned long v = 0;
    while (sgn(n) != 0 && mpz_even_p(n.get_mpz_t())) {
        n >>= 1;
        ++v;
    }
    return v;
}

// Repunit as the explicit sum 1 + g + ... + g^{n-1}.
inline Nat repunit_by_sum(const Nat& g, unsigned long n) {
    Nat sum = 0;
    Nat term = 1;
    for (unsigned long i = 0; i < n; ++i) {
        sum += term;
        term *= g;
    }
    return sum;
}

// Full trial-division factorization for small n (independent of the library path).
inline std::vector<std::pair<std::uint64_t, unsigned>> naive_factor(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool naive_squarefree(std::uint64_t n) {
    for (const auto& [p, e] : naive_factor(n)) {
        if (e >= 2) return false;
    }
    return true;
}

}  // namespace lehmer::test
