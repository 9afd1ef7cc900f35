#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lehmer/bounds.hpp"
#include "oracles.hpp"

using namespace lehmer;

namespace {

NielsenInstance make_inst(std::vector<unsigned long> xs, unsigned long a, unsigned long b) {
    std::vector<Nat> v;
    for (auto x : xs) v.push_back(Nat(x));
    return NielsenInstance(std::move(v), Nat(a), ExactRational(Nat(b)));
}

}  // namespace

TEST_CASE("nielsen instance xs=[2], a=1, b=2 holds with equality") {
    // 1/2 lies in [1/2, 1); conclusion: 1*2 <= 2^2 - 2^1 = 2.
    auto inst = make_inst({2}, 1, 2);
    auto chk = nielsen_check(inst);
    CHECK(chk.holds);
    CHECK(chk.lhs == 2);
    CHECK(chk.rhs == 2);
}

TEST_CASE("nielsen instance xs=[2,3], a=1, b=3") {
    // 1/3 in [1/3, 1/2); conclusion: 6 <= 2^4 - 2^2 = 12.
    auto inst = make_inst({2, 3}, 1, 3);
    auto chk = nielsen_check(inst);
    CHECK(chk.holds);
    CHECK(chk.lhs == 6);
    CHECK(chk.rhs == 12);
}

TEST_CASE("canonical rejected instance xs=[3,5,17], a=1, b=2") {
    // 1/2 < (2/3)(4/5)(16/17) = 128/255, so Eq. 1 membership fails.
    CHECK_THROWS_WITH_AS(make_inst({3, 5, 17}, 1, 2),
                         doctest::Contains("lower bound"), precondition_error);
}

TEST_CASE("instance constructor rejects malformed shapes") {
    CHECK_THROWS_AS(make_inst({}, 1, 2), precondition_error);
    CHECK_THROWS_AS(make_inst({1, 3}, 1, 2), precondition_error);   // x_1 must exceed 1
    CHECK_THROWS_AS(make_inst({5, 3}, 1, 2), precondition_error);   // not increasing
    CHECK_THROWS_AS(make_inst({3, 3}, 1, 2), precondition_error);   // not strict
    CHECK_THROWS_AS(make_inst({2}, 1, 5), precondition_error);      // 1/5 below 1/2
}

TEST_CASE("nielsen property: seeded valid integer instances never violate Eq. 2") {
    SplitMix64 rng(42);
    int done = 0;
    while (done < 1500) {
        auto s = sample_nielsen(rng, 10, 1'000'000, 1'000'000, true);
        if (!s) continue;
        NielsenInstance inst(s->xs, s->a, ExactRational(s->b));
        CHECK(nielsen_check(inst).holds);
        ++done;
    }
}

TEST_CASE("nielsen property: sampled membership violations are always rejected") {
    SplitMix64 rng(43);
    int done = 0;
    while (done < 1500) {
        auto s = sample_nielsen(rng, 10, 1'000'000, 1'000'000, false);
        if (!s) continue;
        CHECK_THROWS_AS(NielsenInstance(s->xs, s->a, ExactRational(s->b)), precondition_error);
        ++done;
    }
}

TEST_CASE("bound evaluators: spot values") {
    CHECK(new_bound(1) == 2);
    CHECK(new_bound(2) == 12);
    CHECK(new_bound(4) == 65280);
    CHECK(pomerance_bound(1) == 1);
    CHECK(pomerance_bound(2) == 16);
    CHECK(pomerance_bound(3) == 6561);
    CHECK_THROWS_AS(new_bound(0), domain_error);
    CHECK_THROWS_AS(new_bound(26, 25), resource_error);
    CHECK_THROWS_AS(pomerance_bound(40), resource_error);
}

TEST_CASE("bound comparison: crossover at K=1, strict dominance afterwards") {
    CHECK(new_bound(1) > pomerance_bound(1));
    for (unsigned K = 2; K <= 30; ++K) {
        auto cmp = compare_bounds(K);
        CHECK(cmp.new_le_pom);
        CHECK(cmp.strict);
    }
    // The bit-length route agrees with direct construction where both apply.
    for (unsigned K = 2; K <= 14; ++K) {
        CHECK(new_bound(K) < pomerance_bound(K));
    }
}

TEST_CASE("theorem chain: n=15 and n=35") {
    auto c15 = theorem_chain_check(factorize(Nat(15)));
    CHECK(c15.holds);
    CHECK(c15.lower == ExactRational(Nat(8), Nat(15)));
    CHECK(c15.middle == ExactRational(Nat(8), Nat(14)));
    CHECK(c15.upper == ExactRational(Nat(2), Nat(3)));
    REQUIRE(c15.instance.has_value());
    CHECK(c15.instance->a() == 1);
    CHECK(c15.instance->b() == ExactRational(Nat(14), Nat(8)));
    // 15 = 3*5 exceeds 2^4 - 2^2 = 12: Eq. 2 fails for this non-integral b,
    // which is exactly why 15 is no Lehmer number.
    REQUIRE(c15.eq2.has_value());
    CHECK_FALSE(c15.eq2->holds);

    auto c35 = theorem_chain_check(factorize(Nat(35)));
    CHECK(c35.holds);
    CHECK(c35.lower == ExactRational(Nat(24), Nat(35)));
    CHECK(c35.middle == ExactRational(Nat(24), Nat(34)));
    CHECK(c35.upper == ExactRational(Nat(4), Nat(5)));
}

TEST_CASE("theorem chain: named precondition errors") {
    CHECK_THROWS_WITH_AS(theorem_chain_check(factorize(Nat(9))),
                         doctest::Contains("squarefree"), precondition_error);
    CHECK_THROWS_WITH_AS(theorem_chain_check(factorize(Nat(21 * 2))),
                         doctest::Contains("even"), precondition_error);
    CHECK_THROWS_WITH_AS(theorem_chain_check(factorize(Nat(7))),
                         doctest::Contains("composite"), precondition_error);
    Factorization f;
    f.subject = 15;
    f.complete = false;
    CHECK_THROWS_WITH_AS(theorem_chain_check(f), doctest::Contains("incomplete"),
                         precondition_error);
}

TEST_CASE("theorem chain: sweep over odd squarefree composites to 20000") {
    int checked = 0;
    for (unsigned long n = 9; n <= 20000; n += 2) {
        if (!lehmer::test::naive_squarefree(n)) continue;
        Factorization f = factorize(Nat(n));
        if (f.omega() < 2) continue;
        auto cert = theorem_chain_check(f);
        CHECK(cert.holds);
        ++checked;
    }
    CHECK(checked > 4000);
}

TEST_CASE("bound_holds examples") {
    CHECK_FALSE(bound_holds(Nat(15), factorize(Nat(15))));   // 15 > 12
    CHECK_FALSE(bound_holds(Nat(3), factorize(Nat(3))));     // 3 > 2
    CHECK(bound_holds(Nat(105), factorize(Nat(105))));       // 105 <= 240
}

TEST_CASE("bound_holds agrees with direct comparison on random subjects") {
    SplitMix64 rng(7);
    for (int i = 0; i < 400; ++i) {
        unsigned long n = rng.range(2, 2'000'000);
        Factorization f = factorize(Nat(n));
        CHECK(bound_holds(Nat(n), f) == (Nat(n) <= new_bound(f.omega())));
    }
}

TEST_CASE("exact rational basics") {
    ExactRational q(Nat(8), Nat(14));
    CHECK(q.numerator() == 4);
    CHECK(q.denominator() == 7);
    CHECK(q.str() == "4/7");
    CHECK_THROWS_AS(ExactRational(Nat(1), Nat(0)), domain_error);
    CHECK(ExactRational::one_minus_inverse(Nat(3)) == ExactRational(Nat(2), Nat(3)));
    CHECK_THROWS_AS(ExactRational::one_minus_inverse(Nat(1)), domain_error);
}
