// Search of the repunit families A(L) (even base) and B(L) (odd base) for
// Lehmer candidates, with 2-adic pruning certificates and resumable units.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lehmer/arith.hpp"
#include "lehmer/bounds.hpp"
#include "lehmer/lehmer.hpp"
#include "lehmer/rational.hpp"
#include "lehmer/report.hpp"

namespace lehmer {

// The family parameter L >= 1, kept exact. All nu2 comparisons read floor(L);
// the 2^{2^...} caps use ceil(L) so that certified-empty regions are never
// larger than the real ones (conservative superset for fractional L).
class LParam {
public:
    static LParam parse(const std::string& text);  // "15", "14.5", "29/2"
    static LParam from_integer(unsigned long v);

    const ExactRational& value() const { return value_; }
    unsigned long floor_value() const { return floor_; }
    unsigned long ceil_value() const { return ceil_; }
    bool integral() const { return floor_ == ceil_; }
    std::string str() const { return value_.str(); }

private:
    LParam(ExactRational v, unsigned long fl, unsigned long ce)
        : value_(std::move(v)), floor_(fl), ceil_(ce) {}
    ExactRational value_;
    unsigned long floor_;
    unsigned long ceil_;
};

struct SearchConfig {
    FactorEffort factor_effort{10'000, 20'000, 25};
    unsigned workers = 1;
    std::string checkpoint_path;        // empty: no checkpointing
    unsigned long repunit_budget = 256; // repunit constructions + Lehmer checks
    unsigned long unit_budget = 4096;   // g units enumerated before the frontier
    unsigned k_cap = default_k_cap();
};

// nu2((g^{n-1}-1)/(g^{2m+1}-1)) for odd g and odd n, n-1 = 2^s (2m+1).
// The closed form is nu2(g+1) + s - 1; in verification mode the quotient is
// also computed explicitly along both routes (telescoped product of
// 1 + h^{2^i} with h = g^{2m+1}, and exact division) within the size budget.
struct Valuation2Quotient {
    unsigned long closed_form;
    bool verified;  // both explicit routes were computed and all three agree
    std::optional<unsigned long> product_path;
    std::optional<unsigned long> division_path;
};
Valuation2Quotient nu2_quotient(const Nat& g, const Nat& n, bool verify = true);

struct OddCandidate {
    Nat g;               // odd, >= 3
    Nat n;               // odd, >= 3
    unsigned long s;     // nu2(n-1), >= 1
    Nat m;               // n-1 = 2^s (2m+1)
    unsigned long k_cap; // nu2(g+1) + s - 1

    static OddCandidate make(const Nat& g, const Nat& n);
};

struct FilterResult {
    bool pass;
    std::optional<Certificate> certificate;  // set iff !pass
};

// Even base: pass iff nu2(g) >= 15 and g < 2^{2^ceil(L)}. Requires A(L)
// membership 1 <= nu2(g) <= floor(L); other g are a domain error.
FilterResult even_case_filter(const Nat& g, const LParam& L);

// Odd base: pass iff g < 2^{2^{ceil(L)-1}}, k_cap >= 15, and the exponent
// shape bound g^{2m+1} < 2^{2^{ceil(L)-1}} holds. Requires nu2(g+1) <= floor(L).
FilterResult odd_case_filter(const OddCandidate& c, const LParam& L);

// Convenience overload that also handles even n (rejected_even_n certificate).
FilterResult odd_case_filter(const Nat& g, const Nat& n, const LParam& L);

SearchReport search_A(const LParam& L, const SearchConfig& cfg = {});
SearchReport search_B(const LParam& L, const Nat& n_max, const SearchConfig& cfg = {});
SearchReport search_union(const LParam& L, const Nat& n_max, const SearchConfig& cfg = {});

// Re-derives the cited rule over the certificate's region.
bool recheck_certificate(const Certificate& cert, const LParam& L);

// Exhaustive coverage accounting over a window of the declared space: every
// point must be covered by exactly one emptiness certificate or candidate.
// Windows cap the scan at g <= g_window and n <= n_window.
bool verify_tiling(const SearchReport& report, const Nat& g_window, const Nat& n_window,
                   std::string* why = nullptr);

}  // namespace lehmer
