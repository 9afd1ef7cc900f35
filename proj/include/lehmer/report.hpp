// Search certificates, regions, and machine-readable search reports.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lehmer/nat.hpp"
#include "lehmer/verdict.hpp"

namespace lehmer {

enum class CertKind {
    empty_by_K15,         // the K >= 15 requirement cannot be met in the region
    empty_by_g_cap,       // g at or beyond the 2^{2^...} cap of the theorem
    empty_by_n_cap,       // the n-shape (Remark) bound excludes the exponent
    rejected_even_n,      // odd g, even n: b-1 is odd, phi cannot divide it
    candidate_unresolved, // enumerated candidate whose Lehmer check ran out of budget
};

const char* to_string(CertKind k);
CertKind cert_kind_from_string(const std::string& s);

// A subset of the (g, n) plane: a g-constraint times an n-constraint.
struct Region {
    // g_set: "single" | "even_nu2_range" (even g, nu2(g) in [v_lo, v_hi])
    //      | "odd_nu2p1_range" (odd g, nu2(g+1) in [v_lo, v_hi]) | "none"
    std::string g_set = "single";
    Nat g_lo = 0;
    std::optional<Nat> g_hi;  // inclusive; nullopt = unbounded
    unsigned long v_lo = 0;
    unsigned long v_hi = 0;

    // n_set: "range" | "even" | "odd_s_le" (odd n with nu2(n-1) <= s_le)
    //      | "odd_s_ge_oddpart_gt" (odd n, nu2(n-1) >= s_ge, odd part of n-1
    //        exceeding oddpart_gt)
    std::string n_set = "range";
    Nat n_lo = 2;
    std::optional<Nat> n_hi;  // inclusive; nullopt = unbounded
    unsigned long s_le = 0;   // threshold for odd_s_le
    unsigned long s_ge = 0;   // threshold for odd_s_ge_oddpart_gt
    Nat oddpart_gt = 0;       // threshold for odd_s_ge_oddpart_gt

    bool covers(const Nat& g, const Nat& n) const;

    static Region single_point(const Nat& g, const Nat& n);
};

struct Certificate {
    CertKind kind;
    std::string rule;  // machine tag of the pruning rule that was applied
    Region region;
    nlohmann::json params;  // exact rule inputs (big integers as decimal strings)

    // Emptiness certificates take part in space tiling; candidate_unresolved
    // annotates an enumerated point instead.
    bool is_emptiness() const { return kind != CertKind::candidate_unresolved; }
};

struct CandidateRecord {
    std::optional<Nat> g;        // repunit base (absent for the exhaustive search)
    std::optional<Nat> n;        // repunit exponent (absent for the exhaustive search)
    std::optional<Nat> subject;  // the number actually tested, when constructed
    std::optional<LehmerVerdict> verdict;
    std::string note;            // e.g. "size_overflow"
};

struct SearchReport {
    nlohmann::json space;  // descriptor of the declared (tiled) search space
    std::vector<Certificate> certificates;
    std::vector<CandidateRecord> candidates;
    std::uint64_t checkpoints_consumed = 0;
    std::uint64_t checkpoints_emitted = 0;
    nlohmann::json counters;  // deterministic work counters
    std::uint64_t started_unix_ms = 0;
    std::uint64_t elapsed_us = 0;

    std::size_t lehmer_count() const;
    std::size_t unresolved_count() const;
};

void to_json(nlohmann::json& j, const Region& r);
void from_json(const nlohmann::json& j, Region& r);
void to_json(nlohmann::json& j, const Certificate& c);
void from_json(const nlohmann::json& j, Certificate& c);
void to_json(nlohmann::json& j, const CandidateRecord& c);
void to_json(nlohmann::json& j, const SearchReport& r);

// CSV rows (g, n, subject_bits, status, failed_condition) for candidate tables.
std::string candidates_csv(const SearchReport& r);

}  // namespace lehmer
