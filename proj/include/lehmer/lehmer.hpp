// Lehmer-property decision, necessary-condition prefilters, sieve-backed search.
#pragma once

#include "lehmer/arith.hpp"
#include "lehmer/report.hpp"
#include "lehmer/verdict.hpp"

namespace lehmer {

// External inputs consumed as constants: the smallest admissible number of
// prime divisors, and the strengthened thresholds when 3 | n.
struct KnownThresholds {
    static constexpr unsigned min_omega = 15;               // K >= 15
    static constexpr unsigned long omega_if_3_divides = 40'000'000;  // K >= 4*10^7
    // 3 | n forces n > 10^{36*10^7}; 10^k > 2^{3k}, so bits(n) <= 3*36*10^7
    // certifies n below that threshold without constructing it.
    static constexpr unsigned long bits_if_3_divides = 3UL * 36UL * 10'000'000UL;
};

// Decides the Lehmer property. Cheap structural prefilters (parity, small
// square factors) short-circuit; a complete factorization decides by the
// divisibility phi(n) | n-1; an incomplete one yields `unresolved` carrying
// the partial factorization, unless the 3|n rule still certifies the verdict.
LehmerVerdict check_lehmer(const Nat& n, const FactorEffort& effort = {});

// Fires every applicable necessary-condition rule with its witness.
PrefilterReport prefilter(const Nat& n, const FactorEffort& effort = {});

// Scans all composite n <= limit against the totient sieve; any n with
// phi(n) | n-1 is reported (none are known to exist).
SearchReport exhaustive_search(const Nat& limit, unsigned workers = 1,
                               std::size_t sieve_cap = default_sieve_cap());

}  // namespace lehmer
