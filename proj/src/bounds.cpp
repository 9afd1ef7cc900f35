#include "lehmer/bounds.hpp"

#include <algorithm>
#include <set>

namespace lehmer {

ExactRational partial_product(const std::vector<Nat>& xs, std::size_t count) {
    ExactRational prod = ExactRational::one();
    for (std::size_t j = 0; j < count && j < xs.size(); ++j) {
        prod = prod * ExactRational::one_minus_inverse(xs[j]);
    }
    return prod;
}

NielsenInstance::NielsenInstance(std::vector<Nat> xs, Nat a, ExactRational b)
    : xs_(std::move(xs)), a_(std::move(a)), b_(std::move(b)) {
    if (xs_.empty()) throw precondition_error("NielsenInstance: xs must be nonempty");
    if (sgn(a_) <= 0) throw precondition_error("NielsenInstance: a must be positive");
    if (b_.is_zero()) throw precondition_error("NielsenInstance: b must be positive");
    if (xs_.front() <= 1) throw precondition_error("NielsenInstance: requires 1 < x_1");
    for (std::size_t j = 0; j + 1 < xs_.size(); ++j) {
        if (!(xs_[j] < xs_[j + 1])) {
            throw precondition_error("NielsenInstance: xs must be strictly increasing");
        }
    }
    const ExactRational value = ratio();
    if (value < partial_product(xs_, xs_.size())) {
        throw precondition_error(
            "NielsenInstance: Eq.1 lower bound fails: a/b < prod_{j<=r}(1-1/x_j)");
    }
    if (!(value < partial_product(xs_, xs_.size() - 1))) {
        throw precondition_error(
            "NielsenInstance: Eq.1 upper bound fails: a/b >= prod_{j<r}(1-1/x_j)");
    }
}

ExactRational NielsenInstance::ratio() const { return ExactRational(a_) / b_; }

NielsenCheck nielsen_check(const NielsenInstance& inst) {
    // Defensive re-validation of Eq. 1 membership.
    const ExactRational value = inst.ratio();
    if (value < partial_product(inst.xs(), inst.r())) {
        throw precondition_error("nielsen_check: Eq.1 lower bound does not hold");
    }
    if (!(value < partial_product(inst.xs(), inst.r() - 1))) {
        throw precondition_error("nielsen_check: Eq.1 upper bound does not hold");
    }
    if (inst.r() >= 32) throw resource_error("nielsen_check: 2^r exponent too large");

    NielsenCheck out;
    out.lhs = inst.a();
    for (const Nat& x : inst.xs()) out.lhs *= x;
    const unsigned long r = static_cast<unsigned long>(inst.r());
    const Nat ap1 = inst.a() + 1;
    out.rhs = pow_nat(ap1, Nat(1UL << r)) - pow_nat(ap1, Nat(1UL << (r - 1)));
    out.holds = out.lhs <= out.rhs;
    return out;
}

nlohmann::json nielsen_certificate(const NielsenInstance& inst, const NielsenCheck& chk) {
    nlohmann::json xs = nlohmann::json::array();
    for (const Nat& x : inst.xs()) xs.push_back(to_decimal(x));
    return nlohmann::json{
        {"lhs", to_decimal(chk.lhs)},
        {"rhs", to_decimal(chk.rhs)},
        {"relation", chk.holds ? "<=" : ">"},
        {"inputs",
         {{"xs", std::move(xs)}, {"a", to_decimal(inst.a())}, {"b", inst.b().str()}}},
    };
}

namespace {

void check_k(unsigned K, unsigned k_cap, const char* who) {
    if (K < 1) throw domain_error(std::string(who) + ": K must be >= 1");
    if (K > k_cap || K > 60) {
        throw resource_error(std::string(who) + ": K=" + std::to_string(K) +
                             " above cap " + std::to_string(std::min(k_cap, 60u)));
    }
}

}  // namespace

Nat new_bound(unsigned K, unsigned k_cap) {
    check_k(K, k_cap, "new_bound");
    return pow2(1UL << K) - pow2(1UL << (K - 1));
}

Nat pomerance_bound(unsigned K, unsigned k_cap) {
    check_k(K, k_cap, "pomerance_bound");
    return pow_nat(Nat(K), pow2(K));
}

BoundCompare compare_bounds(unsigned K, unsigned k_cap) {
    if (K < 1) throw domain_error("compare_bounds: K must be >= 1");
    BoundCompare out;
    out.K = K;
    if (K <= k_cap && K <= 20) {
        const Nat nb = new_bound(K, k_cap);
        const Nat pb = pomerance_bound(K, k_cap);
        out.new_le_pom = nb <= pb;
        out.strict = nb < pb;
        out.method = "direct";
        return out;
    }
    // bits(new_bound(K)) = 2^K exactly, while K >= 2^t with t = floor(log2 K)
    // gives bits(K^{2^K}) >= t*2^K + 1 > 2^K for every K >= 2.
    unsigned t = 0;
    for (unsigned k = K; k > 1; k >>= 1) ++t;
    if (t < 1) throw std::logic_error("compare_bounds: K >= 2 expected here");
    out.new_le_pom = true;
    out.strict = true;
    out.method = "bit_length";
    return out;
}

ChainCertificate theorem_chain_check(const Factorization& f) {
    if (!f.complete) throw precondition_error("theorem_chain_check: factorization incomplete");
    const Nat& n = f.subject;
    if (is_even(n)) throw precondition_error("theorem_chain_check: subject is even");
    if (!f.squarefree_so_far()) {
        throw precondition_error("theorem_chain_check: subject is not squarefree");
    }
    if (f.omega() < 2) {
        throw precondition_error("theorem_chain_check: subject must be composite (K >= 2)");
    }

    std::vector<Nat> primes;
    primes.reserve(f.factors.size());
    for (const auto& [p, e] : f.factors) primes.push_back(p);

    const Nat phi = euler_phi(f);
    ChainCertificate cert{
        .holds = false,
        .lower = partial_product(primes, primes.size()),
        .middle = ExactRational(phi, n - 1),
        .upper = partial_product(primes, primes.size() - 1),
        .lower_strict = false,
        .upper_strict = false,
        .instance = std::nullopt,
        .eq2 = std::nullopt,
    };
    cert.lower_strict = cert.lower < cert.middle;
    cert.upper_strict = cert.middle < cert.upper;
    cert.holds = cert.lower_strict && cert.upper_strict;
    if (cert.holds) {
        cert.instance.emplace(primes, Nat(1), ExactRational(n - 1, phi));
        cert.eq2 = nielsen_check(*cert.instance);
    }
    return cert;
}

nlohmann::json chain_certificate_json(const ChainCertificate& c) {
    nlohmann::json j{
        {"holds", c.holds},
        {"lower", c.lower.str()},
        {"middle", c.middle.str()},
        {"upper", c.upper.str()},
        {"lower_strict", c.lower_strict},
        {"upper_strict", c.upper_strict},
    };
    if (c.instance && c.eq2) j["nielsen"] = nielsen_certificate(*c.instance, *c.eq2);
    return j;
}

bool bound_holds(const Nat& n, const Factorization& f, unsigned k_cap) {
    if (!f.complete) throw precondition_error("bound_holds: factorization incomplete");
    if (f.subject != n) throw precondition_error("bound_holds: factorization subject mismatch");
    const unsigned K = f.omega();
    if (K < 1) throw precondition_error("bound_holds: n must exceed 1");
    if (K >= 60) return true;  // n would need more than 2^59 bits to violate it
    const std::size_t bits = bit_length(n);
    if (bits <= (std::size_t{1} << (K - 1))) return true;   // n < 2^{2^{K-1}} <= bound
    if (bits > (std::size_t{1} << K)) return false;         // n >= 2^{2^K} > bound
    return n <= new_bound(K, k_cap);
}

std::optional<NielsenSample> sample_nielsen(SplitMix64& rng, unsigned max_r,
                                            std::uint64_t max_x, std::uint64_t max_b,
                                            bool valid) {
    const unsigned r = static_cast<unsigned>(rng.range(1, max_r));
    std::set<std::uint64_t> chosen;
    while (chosen.size() < r) chosen.insert(rng.range(2, max_x));
    std::vector<Nat> xs;
    xs.reserve(r);
    for (std::uint64_t x : chosen) xs.push_back(Nat(static_cast<unsigned long>(x)));

    const ExactRational p_lo = partial_product(xs, xs.size());
    const ExactRational p_hi = partial_product(xs, xs.size() - 1);
    const Nat b(static_cast<unsigned long>(rng.range(2, max_b)));

    // Integer window for a: ceil(b * p_lo) <= a <= ceil(b * p_hi) - 1.
    Nat a_min, a_max;
    mpz_cdiv_q(a_min.get_mpz_t(), Nat(b * p_lo.numerator()).get_mpz_t(),
               p_lo.denominator().get_mpz_t());
    mpz_cdiv_q(a_max.get_mpz_t(), Nat(b * p_hi.numerator()).get_mpz_t(),
               p_hi.denominator().get_mpz_t());
    a_max -= 1;
    if (a_min < 1) a_min = 1;

    NielsenSample out;
    out.xs = std::move(xs);
    out.b = b;
    out.valid = valid;
    if (valid) {
        if (a_min > a_max) return std::nullopt;  // window empty for this draw
        const Nat span = a_max - a_min + 1;
        const Nat offset(static_cast<unsigned long>(rng.next()) % span);
        out.a = a_min + offset;
        return out;
    }
    // Outside the window: below it when possible, otherwise above.
    const bool below = rng.next() % 2 == 0 && a_min > 1;
    out.a = below ? Nat(a_min - 1) : Nat(a_max + 1);
    if (sgn(out.a) <= 0) out.a = a_max + 1;
    return out;
}

}  // namespace lehmer
