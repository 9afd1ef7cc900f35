// Exact arithmetic primitives: 2-adic valuations, repunits, primality,
// factorization, totients, and exact power comparisons.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lehmer/errors.hpp"
#include "lehmer/nat.hpp"

namespace lehmer {

// nu2(n) = exponent of 2 in n. nu2(0) is an error, not infinity.
unsigned long nu2(const Nat& n);

// (g^n - 1)/(g - 1) for g >= 2, n >= 1, computed by exact division with a
// divisibility assertion. Size is budget-checked against max_bits().
Nat repunit(const Nat& g, const Nat& n);

// Exact integer test g^e < cap_base^cap_exp. No floating point: bit-length
// bounds decide almost every case; the narrow inconclusive band is settled by
// constructing both powers (budget-checked, see max_bits()).
bool pow_check_less(const Nat& g, const Nat& e, const Nat& cap_base, const Nat& cap_exp);

enum class Primality { prime, composite, probable_prime };

struct PrimalityResult {
    Primality status;
    // For composite: a divisor or a Miller-Rabin witness base, reproducible by
    // re-running the test. Units (0, 1) report composite with witness 1.
    std::optional<Nat> witness;
};

// Deterministic verdict below 2^64 (fixed Miller-Rabin base set 2..37); above
// it, probable_prime with `mr_rounds` rounds of certification.
PrimalityResult is_prime(const Nat& n, int mr_rounds = 40);

struct FactorEffort {
    unsigned long trial_limit = 1'000'000;     // trial division bound (capped at 10^6)
    unsigned long rho_iterations = 2'000'000;  // total Pollard rho (Brent) budget
    int mr_rounds = 40;                        // probable-prime certification rounds
};

struct Factorization {
    // (prime, exponent), primes strictly increasing; every listed prime passed
    // the primality test. Product equals `subject` iff complete.
    std::vector<std::pair<Nat, unsigned>> factors;
    bool complete = false;
    bool proven = true;  // false if any factor is only a probable prime
    Nat subject = 1;

    unsigned omega() const { return static_cast<unsigned>(factors.size()); }
    Nat reconstruct() const;
    Nat cofactor() const;  // subject / reconstruct()
    bool squarefree_so_far() const;
};

// Trial division to effort.trial_limit, then Pollard rho (Brent) under the
// iteration budget. Budget exhaustion yields complete=false, never a wrong factor.
Factorization factorize(const Nat& n, const FactorEffort& effort = {});

// prod p^{e-1}(p-1); requires a complete factorization.
Nat euler_phi(const Factorization& f);

// Linear sieve of Euler totients; entry i holds phi(i), entry 0 holds 0.
// Refuses limits above `cap` before allocating.
std::vector<std::uint32_t> totient_sieve(std::size_t limit, std::size_t cap = default_sieve_cap());

// Primes <= 10^6, built once (shared read-only).
const std::vector<std::uint32_t>& small_primes();

}  // namespace lehmer
