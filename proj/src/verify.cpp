#include "lehmer/verify.hpp"

#include <chrono>

#include "lehmer/bounds.hpp"
#include "lehmer/prng.hpp"
#include "lehmer/repunit_search.hpp"

namespace lehmer {

namespace {

std::uint64_t unix_ms_now() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    std::uint64_t elapsed_us() const {
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                              std::chrono::steady_clock::now() - t0)
                                              .count());
    }
};

void add_counterexample(VerifyReport& rep, nlohmann::json ce) {
    ++rep.violations;
    if (rep.counterexamples.size() < 25) rep.counterexamples.push_back(std::move(ce));
}

nlohmann::json sample_json(const NielsenSample& s) {
    nlohmann::json xs = nlohmann::json::array();
    for (const Nat& x : s.xs) xs.push_back(to_decimal(x));
    return {{"xs", std::move(xs)}, {"a", to_decimal(s.a)}, {"b", to_decimal(s.b)}};
}

}  // namespace

VerifyReport verify_nielsen(std::uint64_t trials, std::uint64_t seed) {
    VerifyReport rep;
    rep.suite = "nielsen";
    rep.trials = trials;
    rep.seed = seed;
    rep.started_unix_ms = unix_ms_now();
    Timer timer;
    SplitMix64 rng(seed);

    std::uint64_t valid_done = 0, rejected_done = 0, draws = 0;
    while (valid_done < trials) {
        ++draws;
        auto s = sample_nielsen(rng, 10, 1'000'000, 1'000'000, true);
        if (!s) continue;  // empty integer window for this draw
        try {
            NielsenInstance inst(s->xs, s->a, ExactRational(s->b));
            NielsenCheck chk = nielsen_check(inst);
            if (!chk.holds) {
                auto ce = sample_json(*s);
                ce["kind"] = "eq2_violated";
                ce["certificate"] = nielsen_certificate(inst, chk);
                add_counterexample(rep, std::move(ce));
            }
        } catch (const precondition_error& e) {
            auto ce = sample_json(*s);
            ce["kind"] = "valid_sample_rejected";
            ce["error"] = e.what();
            add_counterexample(rep, std::move(ce));
        }
        ++valid_done;

        // Interleave a membership violation: the constructor must reject it.
        auto bad = sample_nielsen(rng, 10, 1'000'000, 1'000'000, false);
        if (bad) {
            bool rejected = false;
            try {
                NielsenInstance inst(bad->xs, bad->a, ExactRational(bad->b));
                (void)inst;
            } catch (const precondition_error&) {
                rejected = true;
            }
            if (!rejected) {
                auto ce = sample_json(*bad);
                ce["kind"] = "invalid_sample_accepted";
                add_counterexample(rep, std::move(ce));
            }
            ++rejected_done;
        }
    }

    rep.checks = {{"valid_instances", valid_done},
                  {"rejection_tests", rejected_done},
                  {"sampler_draws", draws}};
    rep.elapsed_us = timer.elapsed_us();
    return rep;
}

VerifyReport verify_chain(std::uint64_t trials, std::uint64_t seed) {
    VerifyReport rep;
    rep.suite = "chain";
    rep.trials = trials;
    rep.seed = seed;
    rep.started_unix_ms = unix_ms_now();
    Timer timer;
    SplitMix64 rng(seed);

    std::uint64_t checked = 0, draws = 0;
    while (checked < trials) {
        ++draws;
        const unsigned long n = 2 * rng.range(4, 500'000) + 1;  // odd, 9..10^6
        Factorization f = factorize(Nat(n));
        if (!f.complete || f.omega() < 2 || !f.squarefree_so_far()) continue;
        ChainCertificate cert = theorem_chain_check(f);
        if (!cert.holds || !cert.instance || !cert.eq2) {
            add_counterexample(rep, {{"n", std::to_string(n)},
                                     {"kind", "chain_violated"},
                                     {"certificate", chain_certificate_json(cert)}});
        }
        ++checked;
    }
    rep.checks = {{"subjects_checked", checked}, {"sampler_draws", draws}};
    rep.elapsed_us = timer.elapsed_us();
    return rep;
}

VerifyReport verify_valuation(std::uint64_t trials, std::uint64_t seed) {
    VerifyReport rep;
    rep.suite = "valuation";
    rep.trials = trials;
    rep.seed = seed;
    rep.started_unix_ms = unix_ms_now();
    Timer timer;
    SplitMix64 rng(seed);

    // Fixed anchors first.
    const struct { unsigned long g, n, expect; } anchors[] = {{3, 5, 3}, {7, 3, 3}};
    for (const auto& a : anchors) {
        auto q = nu2_quotient(Nat(a.g), Nat(a.n));
        if (!q.verified || q.closed_form != a.expect) {
            add_counterexample(rep, {{"kind", "anchor_failed"},
                                     {"g", std::to_string(a.g)},
                                     {"n", std::to_string(a.n)},
                                     {"expected", a.expect},
                                     {"closed_form", q.closed_form}});
        }
    }

    std::uint64_t verified = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const unsigned long g = 2 * rng.range(1, 4'999) + 1;  // odd, 3..9999
        const unsigned long s = rng.range(1, 10);
        const unsigned long m = rng.range(0, 5);
        const unsigned long n = (1UL << s) * (2 * m + 1) + 1;
        auto q = nu2_quotient(Nat(g), Nat(n));
        if (!q.verified) {
            add_counterexample(rep,
                               {{"kind", "dual_path_mismatch"},
                                {"g", std::to_string(g)},
                                {"n", std::to_string(n)},
                                {"closed_form", q.closed_form},
                                {"product_path", q.product_path ? nlohmann::json(*q.product_path)
                                                                : nlohmann::json()},
                                {"division_path", q.division_path
                                                      ? nlohmann::json(*q.division_path)
                                                      : nlohmann::json()}});
        } else {
            ++verified;
        }
    }
    rep.checks = {{"anchors", 2}, {"dual_path_verified", verified}};
    rep.elapsed_us = timer.elapsed_us();
    return rep;
}

VerifyReport verify_bounds(std::uint64_t trials, std::uint64_t seed) {
    VerifyReport rep;
    rep.suite = "bounds";
    rep.trials = trials;
    rep.seed = seed;
    rep.started_unix_ms = unix_ms_now();
    Timer timer;
    SplitMix64 rng(seed);

    const struct { unsigned K; const char* expect; } spots[] = {
        {1, "2"}, {2, "12"}, {4, "65280"}};
    for (const auto& s : spots) {
        if (to_decimal(new_bound(s.K)) != s.expect) {
            add_counterexample(rep, {{"kind", "new_bound_spot"},
                                     {"K", s.K},
                                     {"expected", s.expect},
                                     {"got", to_decimal(new_bound(s.K))}});
        }
    }
    if (!(new_bound(1) > pomerance_bound(1))) {
        add_counterexample(rep, {{"kind", "crossover"}, {"K", 1}});
    }
    for (unsigned K = 2; K <= 30; ++K) {
        BoundCompare cmp = compare_bounds(K);
        if (!cmp.new_le_pom || !cmp.strict) {
            add_counterexample(rep, {{"kind", "dominance_failed"}, {"K", K},
                                     {"method", cmp.method}});
        }
    }

    std::uint64_t coherent = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const unsigned long n = rng.range(2, 1'000'000);
        Factorization f = factorize(Nat(n));
        const unsigned K = f.omega();
        const bool expected = Nat(n) <= new_bound(K);
        if (bound_holds(Nat(n), f) != expected) {
            add_counterexample(rep, {{"kind", "bound_holds_incoherent"},
                                     {"n", std::to_string(n)}});
        } else {
            ++coherent;
        }
    }
    rep.checks = {{"spot_values", 3},
                  {"crossover_checked", true},
                  {"dominance_range", "2..30"},
                  {"bound_holds_coherent", coherent}};
    rep.elapsed_us = timer.elapsed_us();
    return rep;
}

VerifyReport run_verify_suite(const std::string& suite, std::uint64_t trials,
                              std::uint64_t seed) {
    if (trials < 1) throw domain_error("verify: trials must be >= 1");
    if (suite == "nielsen") return verify_nielsen(trials, seed);
    if (suite == "chain") return verify_chain(trials, seed);
    if (suite == "valuation") return verify_valuation(trials, seed);
    if (suite == "bounds") return verify_bounds(trials, seed);
    throw domain_error("verify: unknown suite '" + suite +
                       "' (expected nielsen, chain, valuation, or bounds)");
}

nlohmann::json verify_report_json(const VerifyReport& r) {
    return nlohmann::json{
        {"suite", r.suite},
        {"trials", r.trials},
        {"seed", std::to_string(r.seed)},
        {"violations", r.violations},
        {"counterexamples", r.counterexamples},
        {"checks", r.checks},
        {"timestamp", {{"started_unix_ms", r.started_unix_ms}, {"elapsed_us", r.elapsed_us}}},
    };
}

}  // namespace lehmer
