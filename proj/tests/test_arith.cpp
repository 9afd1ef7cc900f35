#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lehmer/arith.hpp"
#include "oracles.hpp"

#include "lehmer/prng.hpp"

using namespace lehmer;

TEST_CASE("nu2 basics") {
    CHECK(nu2(Nat(1)) == 0);
    CHECK(nu2(Nat(40)) == 3);
    CHECK(nu2(pow2(63)) == 63);
    CHECK_THROWS_AS(nu2(Nat(0)), domain_error);
}

TEST_CASE("nu2 valuation laws") {
    SplitMix64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        Nat n(static_cast<unsigned long>(rng.range(1, 1'000'000'000)));
        unsigned long k = rng.range(0, 40);
        CHECK(nu2(n << k) == nu2(n) + k);
        CHECK(nu2(n) == lehmer::test::naive_nu2(n));
        Nat t = 2 * Nat(static_cast<unsigned long>(rng.range(0, 1'000'000'000))) + 1;
        CHECK(nu2(t) == 0);
        CHECK(nu2(t * t + 1) == 1);  // nu2(t^2+1) = 1 for odd t
    }
}

TEST_CASE("repunit examples") {
    CHECK(repunit(Nat(2), Nat(5)) == 31);
    CHECK(repunit(Nat(10), Nat(3)) == 111);
    CHECK(repunit(Nat(3), Nat(1)) == 1);
    CHECK_THROWS_AS(repunit(Nat(1), Nat(3)), domain_error);
    CHECK_THROWS_AS(repunit(Nat(10), Nat(0)), domain_error);
}

TEST_CASE("repunit identity and sum construction") {
    SplitMix64 rng(12);
    for (int i = 0; i < 300; ++i) {
        Nat g(static_cast<unsigned long>(rng.range(2, 1000)));
        unsigned long n = rng.range(1, 200);
        Nat r = repunit(g, Nat(n));
        CHECK(r * (g - 1) + 1 == pow_nat(g, Nat(n)));
        CHECK(r == lehmer::test::repunit_by_sum(g, n));
    }
}

TEST_CASE("pow_check_less examples") {
    CHECK(pow_check_less(Nat(3), Nat(4), Nat(2), Nat(8)));          // 81 < 256
    CHECK_FALSE(pow_check_less(Nat(2), Nat(8), Nat(2), Nat(8)));    // 256 < 256 fails
    CHECK_FALSE(pow_check_less(Nat(10), Nat(1), Nat(2), Nat(2)));   // 10 < 4 fails
}

TEST_CASE("pow_check_less agrees with direct evaluation") {
    SplitMix64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        Nat g(static_cast<unsigned long>(rng.range(2, 60)));
        Nat e(static_cast<unsigned long>(rng.range(0, 40)));
        Nat cb(static_cast<unsigned long>(rng.range(1, 60)));
        Nat ce(static_cast<unsigned long>(rng.range(0, 40)));
        bool expected = pow_nat(g, e) < pow_nat(cb, ce);
        CHECK(pow_check_less(g, e, cb, ce) == expected);
    }
    // Enormous exponents resolve through bit bounds without construction.
    CHECK(pow_check_less(Nat(2), Nat("1000000000000"), Nat(2), Nat("1000000000001")));
    CHECK(pow_check_less(Nat(3), Nat("1000000000000"), Nat(2), Nat("3000000000000")));
    CHECK_FALSE(pow_check_less(Nat(2), Nat("3000000000000"), Nat(3), Nat("1000000000000")));
    // Inside the inconclusive band the exact powers would exceed the bit cap:
    // the comparison refuses instead of allocating terabits.
    CHECK_THROWS_AS(pow_check_less(Nat(3), Nat("1000000000000"), Nat(2), Nat("1000000000001")),
                    resource_error);
}

TEST_CASE("is_prime verdicts") {
    CHECK(is_prime(Nat(0)).status == Primality::composite);
    CHECK(is_prime(Nat(1)).status == Primality::composite);
    CHECK(is_prime(Nat(2)).status == Primality::prime);
    auto r561 = is_prime(Nat(561));
    CHECK(r561.status == Primality::composite);
    REQUIRE(r561.witness.has_value());
    // Witness is reproducible: either divides 561 or is a Miller-Rabin witness.
    Nat w = *r561.witness;
    CHECK((561 % w == 0 || w == 2));
    Nat mersenne61 = pow2(61) - 1;
    CHECK(mersenne61 == Nat("2305843009213693951"));
    CHECK(is_prime(mersenne61).status == Primality::prime);
}

TEST_CASE("is_prime matches trial division up to 20000") {
    for (unsigned long n = 0; n < 20000; ++n) {
        bool expected = n >= 2;
        for (unsigned long d = 2; d * d <= n; ++d) {
            if (n % d == 0) { expected = false; break; }
        }
        CHECK(is_prime(Nat(n)).status == (expected ? Primality::prime : Primality::composite));
    }
}

TEST_CASE("is_prime composite witness above 2^64") {
    // 2^89-1 = 618970019642690137449562111 is a Mersenne prime; its square is composite.
    Nat m89 = pow2(89) - 1;
    CHECK(is_prime(m89).status != Primality::composite);
    auto sq = is_prime(m89 * m89);
    CHECK(sq.status == Primality::composite);
    REQUIRE(sq.witness.has_value());
    // Fermat check certifies the witness independently.
    Nat n = m89 * m89;
    Nat x;
    Nat e = n - 1;
    mpz_powm(x.get_mpz_t(), sq.witness->get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    CHECK(x != 1);
}

TEST_CASE("factorize examples") {
    auto f561 = factorize(Nat(561));
    CHECK(f561.complete);
    REQUIRE(f561.factors.size() == 3);
    CHECK(f561.factors[0] == std::pair<Nat, unsigned>(Nat(3), 1u));
    CHECK(f561.factors[1] == std::pair<Nat, unsigned>(Nat(11), 1u));
    CHECK(f561.factors[2] == std::pair<Nat, unsigned>(Nat(17), 1u));

    auto f1 = factorize(Nat(1));
    CHECK(f1.complete);
    CHECK(f1.factors.empty());
    CHECK(f1.reconstruct() == 1);

    Nat mersenne61 = pow2(61) - 1;
    auto fm = factorize(mersenne61);
    CHECK(fm.complete);
    REQUIRE(fm.factors.size() == 1);
    CHECK(fm.factors[0].first == mersenne61);
    CHECK(fm.factors[0].second == 1);
}

TEST_CASE("factorize reconstruction on random subjects") {
    SplitMix64 rng(14);
    for (int i = 0; i < 10000; ++i) {
        Nat n(static_cast<unsigned long>(rng.range(1, 1'000'000'000'000ULL)));
        auto f = factorize(n);
        CHECK(f.complete);
        CHECK(f.reconstruct() == n);
        for (std::size_t j = 0; j + 1 < f.factors.size(); ++j) {
            CHECK(f.factors[j].first < f.factors[j + 1].first);
        }
        for (const auto& [p, e] : f.factors) {
            CHECK(is_prime(p).status == Primality::prime);
        }
    }
}

TEST_CASE("factorize honors the budget honestly") {
    // Product of two 40-digit-ish primes with a starved rho budget: the result
    // must be incomplete rather than wrong.
    Nat p = pow2(127) - 1;                      // Mersenne prime
    Nat q("170141183460469231731687303715884105757");  // prime near 2^127
    CHECK(is_prime(q).status != Primality::composite);
    FactorEffort starve;
    starve.trial_limit = 1000;
    starve.rho_iterations = 50;
    auto f = factorize(p * q, starve);
    CHECK_FALSE(f.complete);
    // Never a wrong factor: whatever was found divides the subject.
    CHECK(mpz_divisible_p(f.subject.get_mpz_t(), f.reconstruct().get_mpz_t()));
}

TEST_CASE("euler_phi examples") {
    CHECK(euler_phi(factorize(Nat(561))) == 320);
    CHECK(euler_phi(factorize(Nat(1))) == 1);
    CHECK(euler_phi(factorize(Nat(7))) == 6);
    Factorization incomplete;
    incomplete.subject = 91;
    incomplete.complete = false;
    CHECK_THROWS_AS(euler_phi(incomplete), precondition_error);
}

TEST_CASE("totient sieve spot values") {
    auto phi = totient_sieve(10);
    CHECK(phi[1] == 1);
    CHECK(phi[9] == 6);
    CHECK(phi[10] == 4);
}

TEST_CASE("totient sieve agrees with brute-force phi") {
    auto phi = totient_sieve(2000);
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        CHECK(phi[n] == lehmer::test::brute_phi(n));
    }
}

TEST_CASE("totient sieve refuses over-cap limits") {
    CHECK_THROWS_AS(totient_sieve(1000, 100), resource_error);
}

TEST_CASE("sieve and factorization phi agree to 10^5") {
    auto phi = totient_sieve(100000);
    for (std::size_t n = 1; n <= 100000; ++n) {
        CHECK(euler_phi(factorize(Nat(static_cast<unsigned long>(n)))) ==
              Nat(static_cast<unsigned long>(phi[n])));
    }
}
