#include "lehmer/lehmer.hpp"

#include <chrono>
#include <thread>

namespace lehmer {

namespace {

std::uint64_t unix_ms_now() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

// Smallest prime p <= 10^4 with p^2 | n, if any. O(small) parity-class scan.
std::optional<Nat> small_square_divisor(const Nat& n) {
    for (std::uint32_t p : small_primes()) {
        if (p > 10'000) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p) &&
            mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p) * p)) {
            return Nat(static_cast<unsigned long>(p));
        }
    }
    return std::nullopt;
}

bool three_divides_rule_applies(const Nat& n) {
    return mpz_divisible_ui_p(n.get_mpz_t(), 3) &&
           bit_length(n) <= KnownThresholds::bits_if_3_divides;
}

}  // namespace

LehmerVerdict check_lehmer(const Nat& n, const FactorEffort& effort) {
    if (sgn(n) <= 0) throw domain_error("check_lehmer: n must be >= 1");
    LehmerVerdict v;
    v.subject = n;

    if (n == 1) {
        v.status = LehmerStatus::not_lehmer;
        v.failed_condition = FailedCondition::is_prime;  // unit: excluded by definition
        return v;
    }

    PrimalityResult pr = is_prime(n, effort.mr_rounds);
    if (pr.status != Primality::composite) {
        v.status = LehmerStatus::prime;
        v.probable = pr.status == Primality::probable_prime;
        return v;
    }

    if (is_even(n)) {
        v.status = LehmerStatus::not_lehmer;
        v.failed_condition = FailedCondition::is_even;
        return v;
    }

    if (small_square_divisor(n)) {
        v.status = LehmerStatus::not_lehmer;
        v.failed_condition = FailedCondition::not_squarefree;
        return v;
    }

    Factorization f = factorize(n, effort);
    v.probable = v.probable || !f.proven;
    if (!f.squarefree_so_far()) {
        v.status = LehmerStatus::not_lehmer;
        v.failed_condition = FailedCondition::not_squarefree;
        if (f.complete) v.omega = f.omega();
        v.factorization = std::move(f);
        return v;
    }

    if (f.complete) {
        Nat phi = euler_phi(f);
        v.phi = phi;
        v.omega = f.omega();
        v.factorization = std::move(f);
        if (mpz_divisible_p(Nat(n - 1).get_mpz_t(), phi.get_mpz_t())) {
            v.status = LehmerStatus::lehmer;  // composite with phi | n-1
        } else {
            v.status = LehmerStatus::not_lehmer;
            v.failed_condition = FailedCondition::divisibility_fails;
        }
        return v;
    }

    // Factorization ran out of budget; the 3|n rule can still settle the verdict.
    if (three_divides_rule_applies(n)) {
        v.status = LehmerStatus::not_lehmer;
        v.failed_condition = FailedCondition::three_divides_rule;
        v.factorization = std::move(f);
        return v;
    }

    v.status = LehmerStatus::unresolved;
    v.factorization = std::move(f);
    return v;
}

PrefilterReport prefilter(const Nat& n, const FactorEffort& effort) {
    if (n < 2) throw domain_error("prefilter: n must be >= 2");
    PrefilterReport rep;
    rep.subject = n;

    if (is_even(n)) {
        rep.rules_fired.emplace_back(FailedCondition::is_even,
                                     nlohmann::json{{"divisor", "2"}});
    }

    if (auto p = small_square_divisor(n)) {
        rep.rules_fired.emplace_back(
            FailedCondition::not_squarefree,
            nlohmann::json{{"square_of", to_decimal(*p)}});
    }

    if (three_divides_rule_applies(n)) {
        rep.rules_fired.emplace_back(
            FailedCondition::three_divides_rule,
            nlohmann::json{{"divisor", "3"},
                           {"bits", static_cast<std::uint64_t>(bit_length(n))},
                           {"bits_threshold", KnownThresholds::bits_if_3_divides}});
    }

    Factorization f = factorize(n, effort);
    if (!f.squarefree_so_far() && !rep.fired(FailedCondition::not_squarefree)) {
        Nat sq;
        for (const auto& [p, e] : f.factors) {
            if (e >= 2) { sq = p; break; }
        }
        rep.rules_fired.emplace_back(FailedCondition::not_squarefree,
                                     nlohmann::json{{"square_of", to_decimal(sq)}});
    }
    if (f.complete && f.omega() < KnownThresholds::min_omega) {
        rep.rules_fired.emplace_back(
            FailedCondition::too_few_prime_factors,
            nlohmann::json{{"omega", f.omega()}, {"min_omega", KnownThresholds::min_omega}});
    }

    return rep;
}

SearchReport exhaustive_search(const Nat& limit, unsigned workers, std::size_t sieve_cap) {
    if (sgn(limit) < 0) throw domain_error("exhaustive_search: negative limit");
    if (!fits_ulong(limit) || to_ulong(limit) > sieve_cap) {
        throw resource_error("exhaustive_search: limit " + to_decimal(limit) +
                             " exceeds the sieve cap " + std::to_string(sieve_cap));
    }
    const std::size_t lim = to_ulong(limit);

    SearchReport report;
    report.started_unix_ms = unix_ms_now();
    auto t0 = std::chrono::steady_clock::now();

    const auto phi = totient_sieve(lim, sieve_cap);

    std::uint64_t composites = 0;
    std::vector<std::size_t> hits;

    if (lim >= 4) {
        workers = std::max(1u, workers);
        std::vector<std::thread> pool;
        std::vector<std::vector<std::size_t>> hits_per(workers);
        std::vector<std::uint64_t> comp_per(workers, 0);
        const std::size_t chunk = (lim - 3) / workers + 1;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = 4 + static_cast<std::size_t>(w) * chunk;
            const std::size_t hi = std::min(lim, lo + chunk - 1);
            if (lo > lim) break;
            pool.emplace_back([&, lo, hi, w] {
                for (std::size_t n = lo; n <= hi; ++n) {
                    const std::uint64_t ph = phi[n];
                    if (ph == n - 1) continue;  // prime
                    ++comp_per[w];
                    if ((n - 1) % ph == 0) hits_per[w].push_back(n);
                }
            });
        }
        for (auto& t : pool) t.join();
        for (unsigned w = 0; w < workers; ++w) {
            composites += comp_per[w];
            hits.insert(hits.end(), hits_per[w].begin(), hits_per[w].end());
        }
        std::sort(hits.begin(), hits.end());
    }

    for (std::size_t n : hits) {
        CandidateRecord rec;
        rec.subject = Nat(static_cast<unsigned long>(n));
        rec.verdict = check_lehmer(*rec.subject);
        report.candidates.push_back(std::move(rec));
    }

    report.space = {{"kind", "exhaustive"}, {"lo", "2"}, {"hi", to_decimal(limit)},
                    {"oracle", "totient_sieve"}};
    report.counters = {{"composites_scanned", composites},
                       {"sieve_entries", static_cast<std::uint64_t>(lim)}};
    report.elapsed_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() -
                                                              t0)
            .count());
    return report;
}

}  // namespace lehmer
