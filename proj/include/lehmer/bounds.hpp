// Nielsen-lemma instances, the 2^{2^K} - 2^{2^{K-1}} bound, Pomerance's
// K^{2^K} bound, and the totient inequality chain behind the bound's proof.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lehmer/arith.hpp"
#include "lehmer/nat.hpp"
#include "lehmer/prng.hpp"
#include "lehmer/rational.hpp"

namespace lehmer {

// Default cap on K for the doubly-exponential bound evaluators; 2^25-bit
// results are ~4 MiB. Override per call for bigger appetites.
constexpr unsigned default_k_cap() { return 25; }

// prod_{j=1}^{count} (1 - 1/xs[j-1]); the empty product is 1.
ExactRational partial_product(const std::vector<Nat>& xs, std::size_t count);

// An instance of the interval hypothesis
//   prod_{j=1}^{r} (1 - 1/x_j) <= a/b < prod_{j=1}^{r-1} (1 - 1/x_j)
// with 1 < x_1 < ... < x_r. `a` is a positive integer; `b` is kept as a
// positive exact rational because the totient chain substitutes the
// non-integral b = (n-1)/phi(n).
class NielsenInstance {
public:
    // Throws precondition_error naming the violated inequality.
    NielsenInstance(std::vector<Nat> xs, Nat a, ExactRational b);

    const std::vector<Nat>& xs() const { return xs_; }
    std::size_t r() const { return xs_.size(); }
    const Nat& a() const { return a_; }
    const ExactRational& b() const { return b_; }
    ExactRational ratio() const;  // a/b

private:
    std::vector<Nat> xs_;
    Nat a_;
    ExactRational b_;
};

struct NielsenCheck {
    bool holds;  // a * prod x_j <= (a+1)^{2^r} - (a+1)^{2^{r-1}}
    Nat lhs;
    Nat rhs;
};

// Evaluates the lemma's conclusion for a validated instance. Re-verifies the
// interval membership and throws precondition_error if it does not hold.
NielsenCheck nielsen_check(const NielsenInstance& inst);

nlohmann::json nielsen_certificate(const NielsenInstance& inst, const NielsenCheck& chk);

// 2^{2^K} - 2^{2^{K-1}} for K >= 1.
Nat new_bound(unsigned K, unsigned k_cap = default_k_cap());

// K^{2^K} for K >= 1.
Nat pomerance_bound(unsigned K, unsigned k_cap = default_k_cap());

struct BoundCompare {
    unsigned K;
    bool new_le_pom;
    bool strict;
    std::string method;  // "direct" or "bit_length"
};

// Exact comparison new_bound(K) vs pomerance_bound(K) for K >= 1; settles by
// direct construction when small, otherwise by exact bit-length dominance.
BoundCompare compare_bounds(unsigned K, unsigned k_cap = default_k_cap());

struct ChainCertificate {
    bool holds;  // both strict inequalities
    ExactRational lower;   // prod_{j<=K} (1 - 1/p_j) = phi/n
    ExactRational middle;  // phi/(n-1)
    ExactRational upper;   // prod_{j<=K-1} (1 - 1/p_j)
    bool lower_strict;
    bool upper_strict;
    std::optional<NielsenInstance> instance;  // x_j = p_j, a = 1, b = (n-1)/phi
    std::optional<NielsenCheck> eq2;          // conclusion evaluated on the instance
};

// Verifies prod(1-1/p_j) < phi(n)/(n-1) < prod_{j<K}(1-1/p_j) for an odd
// squarefree composite subject, and constructs the resulting instance.
// Preconditions are named individually in precondition_error.
ChainCertificate theorem_chain_check(const Factorization& f);

nlohmann::json chain_certificate_json(const ChainCertificate& c);

// n <= new_bound(omega(n)); requires a complete factorization of n.
bool bound_holds(const Nat& n, const Factorization& f, unsigned k_cap = default_k_cap());

// Seeded instance sampler. Draws xs (r in [1, max_r], entries <= max_x), then
// an integer pair (a, b <= max_b) placed inside the Eq. 1 interval when
// `valid`, or just outside it otherwise (for constructor-rejection tests).
// Returns nullopt when the interval admits no integer pair for the drawn xs.
struct NielsenSample {
    std::vector<Nat> xs;
    Nat a;
    Nat b;
    bool valid;  // whether (a, b) satisfies Eq. 1 membership
};
std::optional<NielsenSample> sample_nielsen(SplitMix64& rng, unsigned max_r,
                                            std::uint64_t max_x, std::uint64_t max_b,
                                            bool valid);

}  // namespace lehmer
