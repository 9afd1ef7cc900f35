#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "lehmer/repunit_search.hpp"
#include "oracles.hpp"

using namespace lehmer;


TEST_CASE("LParam parsing") {
    auto l = LParam::parse("14.5");
    CHECK(l.floor_value() == 14);
    CHECK(l.ceil_value() == 15);
    CHECK_FALSE(l.integral());
    CHECK(l.str() == "29/2");
    CHECK(LParam::parse("29/2").floor_value() == 14);
    auto i = LParam::parse("15");
    CHECK(i.integral());
    CHECK(i.ceil_value() == 15);
    CHECK_THROWS_AS(LParam::parse("x"), domain_error);
    CHECK_THROWS_AS(LParam::parse(""), domain_error);
}

TEST_CASE("nu2_quotient anchors") {
    auto q35 = nu2_quotient(Nat(3), Nat(5));  // n-1 = 4: s=2, m=0
    CHECK(q35.closed_form == 3);
    CHECK(q35.verified);
    CHECK(*q35.product_path == 3);
    CHECK(*q35.division_path == 3);

    auto q73 = nu2_quotient(Nat(7), Nat(3));  // n-1 = 2: s=1, m=0
    CHECK(q73.closed_form == 3);
    CHECK(q73.verified);
}

TEST_CASE("nu2_quotient domain errors") {
    CHECK_THROWS_AS(nu2_quotient(Nat(5), Nat(2)), domain_error);   // even n
    CHECK_THROWS_AS(nu2_quotient(Nat(4), Nat(5)), domain_error);   // even g
    CHECK_THROWS_AS(nu2_quotient(Nat(1), Nat(5)), domain_error);   // g < 3
    CHECK_THROWS_AS(nu2_quotient(Nat(3), Nat(1)), domain_error);   // n < 2
}

TEST_CASE("nu2_quotient dual-path property") {
    SplitMix64 rng(99);
    for (int i = 0; i < 1200; ++i) {
        unsigned long g = 2 * rng.range(1, 4999) + 1;
        unsigned long s = rng.range(1, 10);
        unsigned long m = rng.range(0, 5);
        unsigned long n = (1UL << s) * (2 * m + 1) + 1;
        auto q = nu2_quotient(Nat(g), Nat(n));
        CHECK(q.verified);
        CHECK(q.closed_form == lehmer::test::naive_nu2(Nat(g) + 1) + s - 1);
    }
}

TEST_CASE("even-case divisibility invariant: nu2(repunit - 1) == nu2(g)") {
    SplitMix64 rng(100);
    for (int i = 0; i < 400; ++i) {
        Nat g(static_cast<unsigned long>(2 * rng.range(1, 5000)));
        Nat n(static_cast<unsigned long>(rng.range(2, 40)));
        CHECK(nu2(repunit(g, n) - 1) == nu2(g));
    }
}

TEST_CASE("odd-case parity invariant: even n makes repunit - 1 odd") {
    for (unsigned long g = 3; g <= 99; g += 2) {
        for (unsigned long n = 2; n <= 40; n += 2) {
            CHECK(is_odd(repunit(Nat(g), Nat(n)) - 1));
        }
    }
}

TEST_CASE("even_case_filter examples") {
    auto L15 = LParam::parse("15");
    auto f6 = even_case_filter(Nat(6), L15);
    CHECK_FALSE(f6.pass);
    CHECK(f6.certificate->kind == CertKind::empty_by_K15);

    auto fpow = even_case_filter(pow2(15), L15);
    CHECK(fpow.pass);

    CHECK_THROWS_AS(even_case_filter(pow2(16), L15), domain_error);  // nu2 = 16 > L
    CHECK_THROWS_AS(even_case_filter(Nat(7), L15), domain_error);    // odd g
}

TEST_CASE("odd_case_filter examples") {
    auto L16 = LParam::parse("16");
    auto f39 = odd_case_filter(Nat(3), Nat(9), L16);  // s=3, k_cap = 2+3-1 = 4
    CHECK_FALSE(f39.pass);
    CHECK(f39.certificate->kind == CertKind::empty_by_K15);

    auto feven = odd_case_filter(Nat(3), Nat(8), L16);
    CHECK_FALSE(feven.pass);
    CHECK(feven.certificate->kind == CertKind::rejected_even_n);

    // g at the cap: L=2 gives cap 2^{2^1} = 4.
    auto L2 = LParam::parse("2");
    auto fcap = odd_case_filter(Nat(5), Nat(3), L2);  // nu2(6)=1 <= 2, 5 >= 4
    CHECK_FALSE(fcap.pass);
    CHECK(fcap.certificate->kind == CertKind::empty_by_g_cap);

    CHECK_THROWS_AS(odd_case_filter(Nat(7), Nat(3), L2), domain_error);  // nu2(8)=3 > 2
}

TEST_CASE("filter certificates re-check") {
    auto L16 = LParam::parse("16");
    for (auto [g, n] : std::initializer_list<std::pair<unsigned long, unsigned long>>{
             {3, 9}, {3, 8}, {11, 5}, {15, 33}}) {
        auto fr = odd_case_filter(Nat(g), Nat(n), L16);
        if (!fr.pass) CHECK(recheck_certificate(*fr.certificate, L16));
    }
    auto f6 = even_case_filter(Nat(6), LParam::parse("15"));
    CHECK(recheck_certificate(*f6.certificate, LParam::parse("15")));
}

TEST_CASE("search_A with L < 15 is certified empty in one stroke") {
    for (const char* l : {"14", "1", "7.5"}) {
        auto report = search_A(LParam::parse(l));
        CHECK(report.candidates.empty());
        REQUIRE(report.certificates.size() == 1);
        CHECK(report.certificates[0].kind == CertKind::empty_by_K15);
        CHECK(report.certificates[0].rule == "even_K15_all");
        CHECK(recheck_certificate(report.certificates[0], LParam::parse(l)));
        std::string why;
        CHECK(verify_tiling(report, Nat(64), Nat(32), &why));
    }
}

TEST_CASE("search_A with L >= 15 enumerates within budget and stays tiled") {
    SearchConfig cfg;
    cfg.repunit_budget = 12;
    cfg.unit_budget = 2;
    auto report = search_A(LParam::parse("15"), cfg);
    CHECK(report.candidates.size() == 12);
    CHECK(report.space["truncated"] == true);
    for (const auto& c : report.candidates) {
        REQUIRE(c.verdict.has_value());
        CHECK(c.verdict->status != LehmerStatus::lehmer);
    }
    // g = 2^15, n = 2: subject is the small repunit 32769.
    CHECK(*report.candidates[0].g == 32768);
    CHECK(*report.candidates[0].n == 2);
    CHECK(*report.candidates[0].subject == 32769);
    for (const auto& cert : report.certificates) {
        CHECK(recheck_certificate(cert, LParam::parse("15")));
    }
}

TEST_CASE("search_B with L=1 has no admissible base") {
    auto report = search_B(LParam::parse("1"), Nat(1000));
    CHECK(report.candidates.empty());
    REQUIRE(report.certificates.size() == 1);
    CHECK(report.certificates[0].kind == CertKind::empty_by_g_cap);
    CHECK(recheck_certificate(report.certificates[0], LParam::parse("1")));
    std::string why;
    CHECK(verify_tiling(report, Nat(40), Nat(40), &why));
}

TEST_CASE("search_B with L=2 n_max=1000: everything pruned by k_cap") {
    auto L = LParam::parse("2");
    auto report = search_B(L, Nat(1000));
    CHECK(report.candidates.empty());
    CHECK(report.lehmer_count() == 0);
    for (const auto& cert : report.certificates) {
        CHECK(recheck_certificate(cert, L));
    }
    std::string why;
    CHECK(verify_tiling(report, Nat(40), Nat(100), &why));
    INFO(why);
}

TEST_CASE("search_B enumerates the lone deep-valuation survivor") {
    // L=3: bases 3, 5, 7, 9, 11, 13 admissible below cap 2^{2^2} = 16.
    // For g=3 (v=2) survivors need nu2(n-1) >= 14, so n = 16385 within 2^15.
    SearchConfig cfg;
    cfg.repunit_budget = 64;
    cfg.factor_effort.rho_iterations = 2000;
    auto L = LParam::parse("3");
    auto report = search_B(L, Nat(1UL << 15), cfg);
    bool found = false;
    for (const auto& c : report.candidates) {
        if (*c.g == 3 && *c.n == 16385) found = true;
        CHECK(c.verdict->status != LehmerStatus::lehmer);
    }
    CHECK(found);
    for (const auto& cert : report.certificates) {
        CHECK(recheck_certificate(cert, L));
    }
    std::string why;
    CHECK(verify_tiling(report, Nat(16), Nat(70), &why));
    INFO(why);
}

TEST_CASE("search_union dispatches by parity and merges") {
    SearchConfig cfg;
    cfg.repunit_budget = 4;
    auto report = search_union(LParam::parse("2"), Nat(500), cfg);
    CHECK(report.space["mode"] == "union");
    CHECK(report.lehmer_count() == 0);
    // Even part: one wholesale certificate; odd part: g=3 certificates + tail.
    bool even_all = false, odd_tail = false;
    for (const auto& cert : report.certificates) {
        if (cert.rule == "even_K15_all") even_all = true;
        if (cert.rule == "odd_g_cap") odd_tail = true;
    }
    CHECK(even_all);
    CHECK(odd_tail);
    std::string why;
    CHECK(verify_tiling(report, Nat(40), Nat(60), &why));
    INFO(why);
}

TEST_CASE("monotone caps: B-space enumeration grows with L") {
    SearchConfig cfg;
    cfg.repunit_budget = 16;
    cfg.factor_effort.rho_iterations = 500;
    auto collect = [&](const char* l) {
        std::set<std::pair<std::string, std::string>> pts;
        auto rep = search_B(LParam::parse(l), Nat(1UL << 15), cfg);
        for (const auto& c : rep.candidates) {
            pts.insert({to_decimal(*c.g), to_decimal(*c.n)});
        }
        return pts;
    };
    auto s2 = collect("2");
    auto s3 = collect("3");
    auto s4 = collect("4");
    for (const auto& p : s2) CHECK(s3.count(p) == 1);
    for (const auto& p : s3) CHECK(s4.count(p) == 1);
}

TEST_CASE("filters are monotone in L across admissible candidates") {
    SplitMix64 rng(5);
    auto L5 = LParam::parse("5");
    auto L7 = LParam::parse("7");
    for (int i = 0; i < 300; ++i) {
        unsigned long g = 2 * rng.range(1, 1000) + 1;
        unsigned long n = 2 * rng.range(1, 4000) + 1;
        unsigned long v = lehmer::test::naive_nu2(Nat(g + 1));
        if (v > 5) continue;  // stay inside B(5) so both filters apply
        auto f5 = odd_case_filter(Nat(g), Nat(n), L5);
        auto f7 = odd_case_filter(Nat(g), Nat(n), L7);
        if (f5.pass) CHECK(f7.pass);
    }
}

TEST_CASE("checkpoint resume skips completed units") {
    const std::string path = "checkpoint_test.jsonl";
    std::remove(path.c_str());
    SearchConfig cfg;
    cfg.repunit_budget = 64;
    cfg.factor_effort.rho_iterations = 2000;
    cfg.checkpoint_path = path;
    auto L = LParam::parse("3");
    auto first = search_B(L, Nat(1UL << 15), cfg);
    CHECK(first.checkpoints_consumed == 0);
    CHECK(first.checkpoints_emitted > 0);

    auto second = search_B(L, Nat(1UL << 15), cfg);
    CHECK(second.checkpoints_consumed > 0);
    // Identical outcome either way.
    nlohmann::json j1 = first, j2 = second;
    j1.erase("timestamp");
    j2.erase("timestamp");
    j1.erase("checkpoints");
    j2.erase("checkpoints");
    j1["counters"].erase("units_from_checkpoint");
    j2["counters"].erase("units_from_checkpoint");
    CHECK(j1 == j2);
    std::remove(path.c_str());
}

TEST_CASE("worker count does not change search output") {
    SearchConfig cfg1, cfg4;
    cfg1.repunit_budget = cfg4.repunit_budget = 24;
    cfg1.workers = 1;
    cfg4.workers = 4;
    auto L = LParam::parse("15.5");
    nlohmann::json j1 = search_A(L, cfg1);
    nlohmann::json j4 = search_A(L, cfg4);
    j1.erase("timestamp");
    j4.erase("timestamp");
    CHECK(j1 == j4);
}
