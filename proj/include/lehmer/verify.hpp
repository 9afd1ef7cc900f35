// Seeded property suites behind the `verify` command.
#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace lehmer {

struct VerifyReport {
    std::string suite;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t violations = 0;
    nlohmann::json counterexamples = nlohmann::json::array();  // verbatim inputs
    nlohmann::json checks;  // per-suite deterministic counters
    std::uint64_t started_unix_ms = 0;
    std::uint64_t elapsed_us = 0;
};

// Eq. 1 / Eq. 2: `trials` valid instances must satisfy the conclusion, and the
// constructor must reject every sampled membership violation.
VerifyReport verify_nielsen(std::uint64_t trials, std::uint64_t seed);

// Totient chain on random odd squarefree composites below 10^6.
VerifyReport verify_chain(std::uint64_t trials, std::uint64_t seed);

// nu2-quotient dual-path identity on random (g, s, m) plus fixed anchors.
VerifyReport verify_valuation(std::uint64_t trials, std::uint64_t seed);

// Bound table spot values, the K=1 crossover, strict dominance to K=30, and
// random bound_holds coherence checks.
VerifyReport verify_bounds(std::uint64_t trials, std::uint64_t seed);

VerifyReport run_verify_suite(const std::string& suite, std::uint64_t trials,
                              std::uint64_t seed);

nlohmann::json verify_report_json(const VerifyReport& r);

}  // namespace lehmer
