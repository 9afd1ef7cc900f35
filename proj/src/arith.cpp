#include "lehmer/arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>

namespace lehmer {

std::size_t max_bits() {
    static const std::size_t cap = [] {
        if (const char* env = std::getenv("LEHMER_HUNT_MAX_BITS")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v >= 64) return static_cast<std::size_t>(v);
        }
        return std::size_t{1} << 28;
    }();
    return cap;
}

void check_bit_budget(std::size_t bits, const char* what) {
    if (bits > max_bits()) {
        throw resource_error(std::string(what) + ": would need " + std::to_string(bits) +
                             " bits, cap is " + std::to_string(max_bits()) +
                             " (LEHMER_HUNT_MAX_BITS)");
    }
}

Nat pow_nat(const Nat& base, const Nat& exp) {
    if (sgn(base) < 0) throw domain_error("pow_nat: negative base");
    if (sgn(exp) < 0) throw domain_error("pow_nat: negative exponent");
    if (sgn(exp) == 0) return 1;
    if (base <= 1) return base;
    if (!fits_ulong(exp)) {
        // bits(base^exp) >= exp for base >= 2; always over any sane cap.
        throw resource_error("pow_nat: exponent " + exp.get_str() + " exceeds the bit cap");
    }
    unsigned long e = to_ulong(exp);
    check_bit_budget(bit_length(base) * e, "pow_nat");
    Nat r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Nat pow2(unsigned long e) {
    check_bit_budget(e + 1, "pow2");
    Nat r;
    mpz_setbit(r.get_mpz_t(), e);
    return r;
}

Nat parse_nat(std::string_view text) {
    if (text.empty()) throw domain_error("parse_nat: empty input");
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw domain_error("parse_nat: not a decimal integer: '" + std::string(text) + "'");
        }
    }
    return Nat(std::string(text), 10);
}

unsigned long nu2(const Nat& n) {
    if (sgn(n) == 0) throw domain_error("nu2: undefined valuation of 0");
    return static_cast<unsigned long>(mpz_scan1(n.get_mpz_t(), 0));
}

Nat repunit(const Nat& g, const Nat& n) {
    if (g < 2) throw domain_error("repunit: g must be >= 2");
    if (n < 1) throw domain_error("repunit: n must be >= 1");
    Nat num = pow_nat(g, n) - 1;
    Nat den = g - 1;
    Nat r;
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
        throw std::logic_error("repunit: g-1 does not divide g^n-1");
    }
    mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

namespace {

// Exact bit-length bounds for x^e, x >= 2: bits(x^e) in [(bits(x)-1)e + 1, bits(x)e].
// For powers of two the two bounds coincide.
struct BitRange {
    Nat lo, hi;  // inclusive
};

BitRange pow_bit_range(const Nat& x, const Nat& e) {
    // pre: x >= 2, e >= 1
    Nat b(static_cast<unsigned long>(bit_length(x)));
    if (mpz_popcount(x.get_mpz_t()) == 1) {
        Nat exact = (b - 1) * e + 1;
        return {exact, exact};
    }
    return {(b - 1) * e + 1, b * e};
}

}  // namespace

bool pow_check_less(const Nat& g, const Nat& e, const Nat& cap_base, const Nat& cap_exp) {
    if (g < 2) throw domain_error("pow_check_less: g must be >= 2");
    if (sgn(e) < 0 || sgn(cap_exp) < 0 || sgn(cap_base) <= 0) {
        throw domain_error("pow_check_less: negative exponent or non-positive cap base");
    }
    const bool lhs_one = sgn(e) == 0;
    const bool rhs_one = cap_base == 1 || sgn(cap_exp) == 0;
    if (rhs_one) return false;           // g^e >= 1 = rhs
    if (lhs_one) return true;            // 1 < cap_base^cap_exp with cap_base >= 2, cap_exp >= 1
    BitRange lb = pow_bit_range(g, e);
    BitRange rb = pow_bit_range(cap_base, cap_exp);
    if (lb.hi < rb.lo) return true;      // fewer bits => strictly smaller
    if (lb.lo > rb.hi) return false;
    // Inconclusive band: both sides have nearly the same bit length; settle exactly.
    return pow_nat(g, e) < pow_nat(cap_base, cap_exp);
}

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod_u64(u64 b, u64 e, u64 m) {
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Miller-Rabin round; true means "a proves n composite".
bool mr_witness_u64(u64 n, u64 a) {
    if (a % n == 0) return false;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    u64 x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

// Deterministic for all n < 2^64 with this base set.
constexpr u64 kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Returns 0 if prime, else a witness base (or divisor for tiny cases).
u64 composite_witness_u64(u64 n) {
    if (n < 2) return 1;
    for (u64 p : {u64{2}, u64{3}, u64{5}, u64{7}}) {
        if (n == p) return 0;
        if (n % p == 0) return p;
    }
    for (u64 a : kMrBases) {
        if (mr_witness_u64(n, a)) return a;
    }
    return 0;
}

bool is_prime_u64(u64 n) { return n >= 2 && composite_witness_u64(n) == 0; }

// Miller-Rabin round on Nat; true means "a proves n composite". n odd >= 3.
bool mr_witness_nat(const Nat& n, const Nat& a) {
    if (mpz_divisible_p(a.get_mpz_t(), n.get_mpz_t())) return false;
    Nat d = n - 1;
    unsigned long s = nu2(d);
    d >>= s;
    Nat nm1 = n - 1;
    Nat x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return false;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == nm1) return false;
    }
    return true;
}

}  // namespace

PrimalityResult is_prime(const Nat& n, int mr_rounds) {
    if (sgn(n) < 0) throw domain_error("is_prime: negative input");
    if (n < 2) return {Primality::composite, Nat(1)};  // units are not prime
    if (fits_ulong(n) && sizeof(unsigned long) == 8) {
        u64 w = composite_witness_u64(to_ulong(n));
        if (w == 0) return {Primality::prime, std::nullopt};
        return {Primality::composite, Nat(static_cast<unsigned long>(w))};
    }
    if (is_even(n)) return {Primality::composite, Nat(2)};
    // Cheap divisor scan first: one Miller-Rabin round on a huge n costs far
    // more than a few thousand single-limb divisibility probes.
    for (std::uint32_t p : small_primes()) {
        if (p > 10'000) break;
        if (p == 2) continue;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            return {Primality::composite, Nat(static_cast<unsigned long>(p))};
        }
    }
    // Base 2 alone rejects essentially every composite; the remaining bases
    // only ever run on strong-pseudoprime survivors.
    for (u64 a : kMrBases) {
        Nat base(static_cast<unsigned long>(a));
        if (mr_witness_nat(n, base)) return {Primality::composite, base};
    }
    // Fixed bases were inconclusive and n >= 2^64: certify probabilistically.
    int verdict = mpz_probab_prime_p(n.get_mpz_t(), std::max(1, mr_rounds));
    if (verdict == 2) return {Primality::prime, std::nullopt};
    if (verdict == 1) return {Primality::probable_prime, std::nullopt};
    // GMP found it composite; locate a reproducible witness with bases derived
    // deterministically from n.
    Nat a = 40 + (n % 1000003);
    for (int i = 0; i < 64; ++i, a += 1) {
        if (mr_witness_nat(n, a)) return {Primality::composite, a};
    }
    return {Primality::composite, std::nullopt};  // unreachable in practice
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 1'000'000;
        std::vector<bool> sieve(limit + 1, true);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (!sieve[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= limit; j += i) {
                sieve[j] = false;
            }
        }
        return out;
    }();
    return primes;
}

namespace {

// Brent's variant of Pollard rho on u64. Returns a nontrivial factor or 0.
u64 rho_brent_u64(u64 n, u64 c, unsigned long& budget) {
    if (n % 2 == 0) return 2;
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const u64 m = 128;
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
        for (u64 k = 0; k < r && g == 1; k += m) {
            ys = y;
            u64 steps = std::min(m, r - k);
            if (budget < steps) { budget = 0; return 0; }
            budget -= steps;
            for (u64 i = 0; i < steps; ++i) {
                y = (mulmod_u64(y, y, n) + c) % n;
                q = mulmod_u64(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = (mulmod_u64(ys, ys, n) + c) % n;
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

// Brent rho on Nat with gcd batching. Returns 0 on budget exhaustion.
Nat rho_brent_nat(const Nat& n, unsigned long c, unsigned long& budget) {
    Nat y = 2, q = 1, g = 1, x, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto step = [&](Nat& v) { v = (v * v + c) % n; };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) step(y);
        for (unsigned long k = 0; k < r && g == 1; k += m) {
            ys = y;
            unsigned long steps = std::min(m, r - k);
            if (budget < steps) { budget = 0; return 0; }
            budget -= steps;
            for (unsigned long i = 0; i < steps; ++i) {
                step(y);
                q = (q * abs(x - y)) % n;
            }
            g = gcd(q, n);
        }
        r *= 2;
    }
    if (g == n) {
        do {
            step(ys);
            g = gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 x = u64{1} << ((65 - __builtin_clzll(n)) / 2);
    u64 y = (x + n / x) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

// Factor a number whose prime factors all exceed the trial bound (caller ran
// trial division already).
void factor_u64_into(u64 n, std::map<Nat, unsigned>& out, unsigned long& rho_budget,
                     bool& complete) {
    while (n > 1) {
        if (is_prime_u64(n)) {
            out[Nat(static_cast<unsigned long>(n))] += 1;
            return;
        }
        u64 f = 0;
        for (u64 c = 1; c <= 32 && f == 0 && rho_budget > 0; ++c) {
            f = rho_brent_u64(n, c, rho_budget);
        }
        if (f == 0) {
            // rho splits p^2 slowly; a direct square check salvages that case.
            u64 root = isqrt_u64(n);
            if (root > 1 && root * root == n) f = root;
        }
        if (f == 0) { complete = false; return; }
        factor_u64_into(f, out, rho_budget, complete);
        n /= f;
    }
}

}  // namespace

Nat Factorization::reconstruct() const {
    Nat prod = 1;
    for (const auto& [p, e] : factors) {
        Nat pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        prod *= pe;
    }
    return prod;
}

Nat Factorization::cofactor() const {
    Nat rec = reconstruct();
    Nat co;
    mpz_divexact(co.get_mpz_t(), subject.get_mpz_t(), rec.get_mpz_t());
    return co;
}

bool Factorization::squarefree_so_far() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const auto& pe) { return pe.second == 1; });
}

Factorization factorize(const Nat& n, const FactorEffort& effort) {
    if (sgn(n) <= 0) throw domain_error("factorize: n must be >= 1");
    Factorization out;
    out.subject = n;
    out.complete = true;
    if (n == 1) return out;

    std::map<Nat, unsigned> found;
    Nat rest = n;

    // Fast path: everything fits in a machine word.
    if (fits_ulong(rest) && sizeof(unsigned long) == 8) {
        u64 v = to_ulong(rest);
        u64 lim = std::min<u64>(effort.trial_limit, 1'000'000);
        for (std::uint32_t p : small_primes()) {
            if (p > lim) break;
            if (static_cast<u64>(p) * p > v) break;
            while (v % p == 0) {
                found[Nat(static_cast<unsigned long>(p))] += 1;
                v /= p;
            }
        }
        if (v > 1) {
            if (v <= static_cast<u64>(lim) * lim || is_prime_u64(v)) {
                // Below lim^2 any survivor of trial division is prime.
                found[Nat(static_cast<unsigned long>(v))] += 1;
            } else {
                unsigned long budget = effort.rho_iterations;
                factor_u64_into(v, found, budget, out.complete);
            }
        }
    } else {
        for (std::uint32_t p : small_primes()) {
            if (p > effort.trial_limit) break;
            if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
            unsigned e = 0;
            do {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
            found[Nat(static_cast<unsigned long>(p))] += e;
        }
        // Split remaining composite cofactors under the shared rho budget.
        unsigned long budget = effort.rho_iterations;
        std::vector<Nat> pending;
        if (rest > 1) pending.push_back(rest);
        while (!pending.empty()) {
            Nat m = pending.back();
            pending.pop_back();
            if (fits_ulong(m) && sizeof(unsigned long) == 8) {
                u64 v = to_ulong(m);
                factor_u64_into(v, found, budget, out.complete);
                continue;
            }
            PrimalityResult pr = is_prime(m, effort.mr_rounds);
            if (pr.status != Primality::composite) {
                found[m] += 1;
                if (pr.status == Primality::probable_prime) out.proven = false;
                continue;
            }
            Nat f = 0;
            for (unsigned long c = 1; c <= 32 && sgn(f) == 0 && budget > 0; ++c) {
                f = rho_brent_nat(m, c, budget);
            }
            if (sgn(f) == 0) {
                // Perfect-power salvage: rho splits p^k slowly.
                bool split = false;
                if (mpz_perfect_power_p(m.get_mpz_t())) {
                    for (unsigned long k = 2; k <= bit_length(m) && !split; ++k) {
                        Nat root;
                        if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) {
                            for (unsigned long i = 0; i < k; ++i) pending.push_back(root);
                            split = true;
                        }
                    }
                }
                if (!split) {
                    out.complete = false;
                    continue;
                }
            } else {
                pending.push_back(f);
                Nat q;
                mpz_divexact(q.get_mpz_t(), m.get_mpz_t(), f.get_mpz_t());
                pending.push_back(q);
            }
        }
    }

    out.factors.assign(found.begin(), found.end());
    return out;
}

Nat euler_phi(const Factorization& f) {
    if (!f.complete) throw precondition_error("euler_phi: factorization is incomplete");
    Nat phi = 1;
    for (const auto& [p, e] : f.factors) {
        Nat pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e - 1);
        phi *= pe * (p - 1);
    }
    return phi;
}

std::vector<std::uint32_t> totient_sieve(std::size_t limit, std::size_t cap) {
    if (limit > cap) {
        throw resource_error("totient_sieve: limit " + std::to_string(limit) +
                             " exceeds cap " + std::to_string(cap));
    }
    std::vector<std::uint32_t> phi(limit + 1, 0);
    if (limit >= 1) phi[1] = 1;
    std::vector<std::uint32_t> primes;
    for (std::size_t i = 2; i <= limit; ++i) {
        if (phi[i] == 0) {
            phi[i] = static_cast<std::uint32_t>(i - 1);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            std::size_t ip = i * p;
            if (ip > limit) break;
            if (i % p == 0) {
                phi[ip] = phi[i] * p;
                break;
            }
            phi[ip] = phi[i] * (p - 1);
        }
    }
    return phi;
}

}  // namespace lehmer
