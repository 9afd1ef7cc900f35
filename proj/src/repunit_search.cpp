#include "lehmer/repunit_search.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

namespace lehmer {

namespace {

std::uint64_t unix_ms_now() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

constexpr unsigned kMinOmega = 15;  // K >= 15 for any Lehmer number

}  // namespace

LParam LParam::parse(const std::string& text) {
    if (text.empty()) throw domain_error("L: empty");
    Nat num, den(1);
    auto slash = text.find('/');
    auto dot = text.find('.');
    if (slash != std::string::npos) {
        num = parse_nat(text.substr(0, slash));
        den = parse_nat(text.substr(slash + 1));
        if (sgn(den) == 0) throw domain_error("L: zero denominator");
    } else if (dot != std::string::npos) {
        const std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
        if (fp.empty()) throw domain_error("L: trailing dot");
        num = parse_nat(ip.empty() ? "0" : ip);
        for (char c : fp) {
            if (c < '0' || c > '9') throw domain_error("L: not a number: " + text);
            num = num * 10 + (c - '0');
            den *= 10;
        }
    } else {
        num = parse_nat(text);
    }
    ExactRational v(num, den);
    Nat fl, ce;
    mpz_fdiv_q(fl.get_mpz_t(), v.numerator().get_mpz_t(), v.denominator().get_mpz_t());
    mpz_cdiv_q(ce.get_mpz_t(), v.numerator().get_mpz_t(), v.denominator().get_mpz_t());
    if (!fits_ulong(ce) || to_ulong(ce) > (1UL << 32)) {
        throw resource_error("L: too large");
    }
    return LParam(std::move(v), to_ulong(fl), to_ulong(ce));
}

LParam LParam::from_integer(unsigned long v) { return parse(std::to_string(v)); }

// ---------------------------------------------------------------------------
// Valuation identity
// ---------------------------------------------------------------------------

OddCandidate OddCandidate::make(const Nat& g, const Nat& n) {
    if (is_even(g) || g < 3) throw domain_error("OddCandidate: g must be odd and >= 3");
    if (n < 2) throw domain_error("OddCandidate: n must be >= 2");
    if (is_even(n)) throw domain_error("OddCandidate: n must be odd (s >= 1 requires even n-1)");
    OddCandidate c;
    c.g = g;
    c.n = n;
    c.s = nu2(n - 1);
    Nat odd_part = (n - 1) >> c.s;
    c.m = (odd_part - 1) / 2;
    c.k_cap = nu2(g + 1) + c.s - 1;
    return c;
}

Valuation2Quotient nu2_quotient(const Nat& g, const Nat& n, bool verify) {
    const OddCandidate c = OddCandidate::make(g, n);  // domain checks live there
    Valuation2Quotient out;
    out.closed_form = c.k_cap;  // nu2(g+1) + s - 1
    out.verified = false;
    if (!verify) return out;

    // Both explicit routes materialize ~bits(g) * (n-1) bit numbers.
    const std::size_t verify_cap = std::min<std::size_t>(max_bits(), std::size_t{1} << 22);
    Nat est = Nat(static_cast<unsigned long>(bit_length(g))) * (n - 1) + 1;
    if (!fits_ulong(est) || to_ulong(est) > verify_cap) return out;

    // Route 1: telescoped product prod_{i=0}^{s-1} (1 + h^{2^i}), h = g^{2m+1}.
    const Nat h = pow_nat(g, 2 * c.m + 1);
    Nat prod = 1;
    Nat h_pow = h;
    for (unsigned long i = 0; i < c.s; ++i) {
        prod *= h_pow + 1;
        if (i + 1 < c.s) h_pow *= h_pow;
    }
    out.product_path = nu2(prod);

    // Route 2: exact division (g^{n-1} - 1) / (g^{2m+1} - 1).
    Nat num = pow_nat(g, n - 1) - 1;
    Nat den = h - 1;
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
        throw std::logic_error("nu2_quotient: g^{2m+1}-1 does not divide g^{n-1}-1");
    }
    Nat quot;
    mpz_divexact(quot.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.division_path = nu2(quot);

    out.verified = quot == prod && *out.product_path == out.closed_form &&
                   *out.division_path == out.closed_form;
    return out;
}

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

namespace {

// g < 2^{2^E}  <=>  bits(g) <= 2^E; both sides exact.
bool below_double_exp_cap(const Nat& g, unsigned long cap_exp_log2) {
    return Nat(static_cast<unsigned long>(bit_length(g))) <= pow2(cap_exp_log2);
}

std::string cap_string(unsigned long cap_exp_log2) {
    return "2^2^" + std::to_string(cap_exp_log2);
}

}  // namespace

FilterResult even_case_filter(const Nat& g, const LParam& L) {
    if (is_odd(g) || g < 2) throw domain_error("even_case_filter: g must be even and >= 2");
    const unsigned long v = nu2(g);
    if (v > L.floor_value()) {
        throw domain_error("even_case_filter: nu2(g) > floor(L), g is outside A(L)");
    }
    if (v < kMinOmega) {
        Certificate cert;
        cert.kind = CertKind::empty_by_K15;
        cert.rule = "even_K15_point";
        cert.region.g_set = "single";
        cert.region.g_lo = g;
        cert.region.g_hi = g;
        cert.region.n_set = "range";
        cert.region.n_lo = 2;
        cert.params = {{"nu2_g", v}, {"min_omega", kMinOmega}};
        return {false, std::move(cert)};
    }
    if (!below_double_exp_cap(g, L.ceil_value())) {
        Certificate cert;
        cert.kind = CertKind::empty_by_g_cap;
        cert.rule = "even_g_cap_point";
        cert.region.g_set = "single";
        cert.region.g_lo = g;
        cert.region.g_hi = g;
        cert.region.n_set = "range";
        cert.region.n_lo = 2;
        cert.params = {{"cap", cap_string(L.ceil_value())}};
        return {false, std::move(cert)};
    }
    return {true, std::nullopt};
}

FilterResult odd_case_filter(const OddCandidate& c, const LParam& L) {
    const unsigned long v = nu2(c.g + 1);
    if (v > L.floor_value()) {
        throw domain_error("odd_case_filter: nu2(g+1) > floor(L), g is outside B(L)");
    }
    if (L.ceil_value() < 1) throw domain_error("odd_case_filter: L must be >= 1");
    const unsigned long cap_exp = L.ceil_value() - 1;
    if (!below_double_exp_cap(c.g, cap_exp)) {
        Certificate cert;
        cert.kind = CertKind::empty_by_g_cap;
        cert.rule = "odd_g_cap_point";
        cert.region = Region::single_point(c.g, c.n);
        cert.params = {{"cap", cap_string(cap_exp)}};
        return {false, std::move(cert)};
    }
    if (c.k_cap < kMinOmega) {
        Certificate cert;
        cert.kind = CertKind::empty_by_K15;
        cert.rule = "odd_kcap_point";
        cert.region = Region::single_point(c.g, c.n);
        cert.params = {{"k_cap", c.k_cap}, {"nu2_g_plus_1", v}, {"s", c.s},
                       {"min_omega", kMinOmega}};
        return {false, std::move(cert)};
    }
    // Exponent shape: a Lehmer b_{g,n} needs g^{2m+1} < 2^{2^{L-1}}.
    if (!pow_check_less(c.g, 2 * c.m + 1, Nat(2), pow2(cap_exp))) {
        Certificate cert;
        cert.kind = CertKind::empty_by_n_cap;
        cert.rule = "odd_n_cap_remark";
        cert.region = Region::single_point(c.g, c.n);
        cert.params = {{"two_m_plus_1", to_decimal(Nat(2 * c.m + 1))},
                       {"cap", cap_string(cap_exp)}};
        return {false, std::move(cert)};
    }
    return {true, std::nullopt};
}

FilterResult odd_case_filter(const Nat& g, const Nat& n, const LParam& L) {
    if (is_even(g) || g < 3) throw domain_error("odd_case_filter: g must be odd and >= 3");
    if (n < 2) throw domain_error("odd_case_filter: n must be >= 2");
    if (is_even(n)) {
        // b-1 = g + ... + g^{n-1} is a sum of an odd count of odd terms, hence
        // odd; phi of a composite exceeds 1 and is even, so it cannot divide.
        Certificate cert;
        cert.kind = CertKind::rejected_even_n;
        cert.rule = "odd_even_n";
        cert.region = Region::single_point(g, n);
        cert.params = {{"parity", "b-1 odd"}};
        return {false, std::move(cert)};
    }
    return odd_case_filter(OddCandidate::make(g, n), L);
}

// ---------------------------------------------------------------------------
// Searches
// ---------------------------------------------------------------------------

namespace {

struct PlannedUnit {
    Nat g;
    unsigned long v = 0;  // nu2(g) for A, nu2(g+1) for B
    std::string unit_id;
    std::vector<Certificate> certs;
    std::vector<Nat> work_ns;  // ascending exponents needing repunit evaluation
    bool from_checkpoint = false;
    nlohmann::json checkpoint_record;  // when from_checkpoint
};

struct Plan {
    std::vector<PlannedUnit> units;
    bool truncated = false;
    std::optional<Nat> frontier_g;
    std::optional<Nat> frontier_n;
    std::optional<Certificate> tail_cert;  // g-cap tail when enumeration hit it
    std::uint64_t work_items = 0;
};

// Drops or clips the unit's certificates to n <= clip.
void clip_unit(PlannedUnit& unit, const Nat& clip) {
    std::vector<Certificate> kept;
    for (Certificate& c : unit.certs) {
        if (c.region.n_lo > clip) continue;
        if (!c.region.n_hi || *c.region.n_hi > clip) c.region.n_hi = clip;
        kept.push_back(std::move(c));
    }
    unit.certs = std::move(kept);
}

class Checkpoint {
public:
    explicit Checkpoint(std::string path) : path_(std::move(path)) {
        if (path_.empty()) return;
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json rec = nlohmann::json::parse(line);
            done_[rec.at("unit_id").get<std::string>()] = rec;
        }
    }

    bool enabled() const { return !path_.empty(); }

    const nlohmann::json* find(const std::string& unit_id) const {
        auto it = done_.find(unit_id);
        return it == done_.end() ? nullptr : &it->second;
    }

    void record(nlohmann::json rec) {
        if (!enabled()) return;
        done_[rec.at("unit_id").get<std::string>()] = std::move(rec);
        ++emitted_;
        flush();
    }

    std::uint64_t emitted() const { return emitted_; }

private:
    void flush() const {
        const std::string tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            for (const auto& [id, rec] : done_) out << rec.dump() << '\n';
        }
        std::rename(tmp.c_str(), path_.c_str());
    }

    std::string path_;
    std::map<std::string, nlohmann::json> done_;
    std::uint64_t emitted_ = 0;
};

LehmerVerdict verdict_from_json(const nlohmann::json& j) {
    LehmerVerdict v;
    v.subject = parse_nat(j.at("subject").get<std::string>());
    const std::string st = j.at("status").get<std::string>();
    if (st == "prime") v.status = LehmerStatus::prime;
    else if (st == "lehmer") v.status = LehmerStatus::lehmer;
    else if (st == "not_lehmer") v.status = LehmerStatus::not_lehmer;
    else v.status = LehmerStatus::unresolved;
    if (j.contains("failed_condition")) {
        const std::string fc = j["failed_condition"].get<std::string>();
        for (FailedCondition c :
             {FailedCondition::is_prime, FailedCondition::is_even, FailedCondition::not_squarefree,
              FailedCondition::divisibility_fails, FailedCondition::too_few_prime_factors,
              FailedCondition::three_divides_rule}) {
            if (fc == to_string(c)) v.failed_condition = c;
        }
    }
    if (j.contains("phi")) v.phi = parse_nat(j["phi"].get<std::string>());
    if (j.contains("omega")) v.omega = j["omega"].get<unsigned>();
    v.probable = j.value("probable", false);
    return v;
}

CandidateRecord candidate_from_json(const nlohmann::json& j) {
    CandidateRecord c;
    if (j.contains("g")) c.g = parse_nat(j["g"].get<std::string>());
    if (j.contains("n")) c.n = parse_nat(j["n"].get<std::string>());
    if (j.contains("subject")) c.subject = parse_nat(j["subject"].get<std::string>());
    if (j.contains("verdict")) c.verdict = verdict_from_json(j["verdict"]);
    c.note = j.value("note", std::string());
    return c;
}

// Evaluates one planned exponent: builds the repunit and decides it.
void run_work_item(const Nat& g, const Nat& n, const SearchConfig& cfg, CandidateRecord& out,
                   std::optional<Certificate>& annotation) {
    out.g = g;
    out.n = n;
    Nat est = Nat(static_cast<unsigned long>(bit_length(g))) * (n - 1) + 1;
    if (!fits_ulong(est) || to_ulong(est) > max_bits()) {
        out.note = "size_overflow";
        Certificate cert;
        cert.kind = CertKind::candidate_unresolved;
        cert.rule = "lehmer_check_unresolved";
        cert.region = Region::single_point(g, n);
        cert.params = {{"reason", "size_overflow"}};
        annotation = std::move(cert);
        return;
    }
    Nat b = repunit(g, n);
    LehmerVerdict v = check_lehmer(b, cfg.factor_effort);
    // Huge subjects stay out of the JSON; their bit size is still recorded.
    if (bit_length(b) <= 4096) out.subject = b;
    else out.note = "subject_bits=" + std::to_string(bit_length(b));
    if (v.status == LehmerStatus::unresolved) {
        Certificate cert;
        cert.kind = CertKind::candidate_unresolved;
        cert.rule = "lehmer_check_unresolved";
        cert.region = Region::single_point(g, n);
        cert.params = {{"reason", "factorization_budget"}};
        annotation = std::move(cert);
    }
    // Strip bulky partial factorizations from search candidates.
    if (v.factorization && !v.factorization->complete) v.factorization.reset();
    out.verdict = std::move(v);
}

SearchReport execute_plan(Plan& plan, const SearchConfig& cfg, Checkpoint& checkpoint,
                          nlohmann::json space) {
    SearchReport report;
    report.started_unix_ms = unix_ms_now();
    const auto t0 = std::chrono::steady_clock::now();

    // Flatten the work items and evaluate them (slot-addressed, so worker
    // scheduling cannot change the output).
    struct Slot {
        std::size_t unit;
        Nat n;
        CandidateRecord rec;
        std::optional<Certificate> annotation;
    };
    std::vector<Slot> slots;
    for (std::size_t u = 0; u < plan.units.size(); ++u) {
        for (const Nat& n : plan.units[u].work_ns) {
            slots.push_back(Slot{u, n, {}, std::nullopt});
        }
    }
    const unsigned workers = std::max(1u, cfg.workers);
    if (workers == 1 || slots.size() <= 1) {
        for (Slot& s : slots) {
            run_work_item(plan.units[s.unit].g, s.n, cfg, s.rec, s.annotation);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < slots.size();
                     i = next.fetch_add(1)) {
                    Slot& s = slots[i];
                    run_work_item(plan.units[s.unit].g, s.n, cfg, s.rec, s.annotation);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Merge per unit, in order; checkpoint completed fresh units.
    std::uint64_t consumed = 0, repunits_built = 0;
    std::map<std::string, std::uint64_t> cert_counts;
    std::size_t slot_idx = 0;
    for (std::size_t u = 0; u < plan.units.size(); ++u) {
        PlannedUnit& unit = plan.units[u];
        if (unit.from_checkpoint) {
            ++consumed;
            const nlohmann::json& rec = unit.checkpoint_record;
            if (rec.contains("certificate")) {
                for (const auto& cj : rec["certificate"]) {
                    Certificate c = cj.get<Certificate>();
                    cert_counts[to_string(c.kind)]++;
                    report.certificates.push_back(std::move(c));
                }
            }
            if (rec.contains("candidates")) {
                for (const auto& cj : rec["candidates"]) {
                    report.candidates.push_back(candidate_from_json(cj));
                }
            }
            continue;
        }
        nlohmann::json rec_certs = nlohmann::json::array();
        nlohmann::json rec_cands = nlohmann::json::array();
        for (Certificate& c : unit.certs) {
            cert_counts[to_string(c.kind)]++;
            rec_certs.push_back(c);
            report.certificates.push_back(std::move(c));
        }
        for (; slot_idx < slots.size() && slots[slot_idx].unit == u; ++slot_idx) {
            Slot& s = slots[slot_idx];
            ++repunits_built;
            rec_cands.push_back(s.rec);
            report.candidates.push_back(std::move(s.rec));
            if (s.annotation) {
                cert_counts[to_string(s.annotation->kind)]++;
                rec_certs.push_back(*s.annotation);
                report.certificates.push_back(std::move(*s.annotation));
            }
        }
        const bool is_frontier_unit =
            plan.truncated && plan.frontier_g && unit.g == *plan.frontier_g;
        if (checkpoint.enabled() && !is_frontier_unit) {
            nlohmann::json rec{{"unit_id", unit.unit_id},
                               {"g_lo", to_decimal(unit.g)},
                               {"g_hi", to_decimal(unit.g)},
                               {"n_lo", "2"},
                               {"status", "done"},
                               {"certificate", std::move(rec_certs)}};
            if (space.contains("n_max")) rec["n_hi"] = space["n_max"];
            if (!rec_cands.empty()) rec["candidates"] = std::move(rec_cands);
            checkpoint.record(std::move(rec));
        }
    }
    if (plan.tail_cert) {
        cert_counts[to_string(plan.tail_cert->kind)]++;
        report.certificates.push_back(std::move(*plan.tail_cert));
    }

    space["truncated"] = plan.truncated;
    if (plan.truncated) {
        nlohmann::json frontier;
        if (plan.frontier_g) frontier["g"] = to_decimal(*plan.frontier_g);
        if (plan.frontier_n) frontier["n"] = to_decimal(*plan.frontier_n);
        space["frontier"] = std::move(frontier);
    }
    report.space = std::move(space);
    report.checkpoints_consumed = consumed;
    report.checkpoints_emitted = checkpoint.emitted();

    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [k, v] : cert_counts) counts[k] = v;
    report.counters = {{"units", plan.units.size()},
                       {"units_from_checkpoint", consumed},
                       {"work_items", plan.work_items},
                       {"repunits_built", repunits_built},
                       {"certificates_by_kind", std::move(counts)}};
    report.elapsed_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() -
                                                              t0)
            .count());
    return report;
}

}  // namespace

SearchReport search_A(const LParam& L, const SearchConfig& cfg) {
    if (L.value() < ExactRational(Nat(1))) throw domain_error("search_A: L must be >= 1");
    const unsigned long floorL = L.floor_value();
    const unsigned long ceilL = L.ceil_value();

    nlohmann::json space{{"mode", "A"},
                         {"L", L.str()},
                         {"floor_L", floorL},
                         {"ceil_L", ceilL},
                         {"g_cap", cap_string(ceilL)},
                         {"n_lo", "2"}};

    Checkpoint checkpoint(cfg.checkpoint_path);
    Plan plan;

    if (floorL < kMinOmega) {
        // Every g in A(L) has nu2(g) <= floor(L) < 15, so 2^K | g forces K < 15:
        // one certificate covers the whole family.
        Certificate cert;
        cert.kind = CertKind::empty_by_K15;
        cert.rule = "even_K15_all";
        cert.region.g_set = "even_nu2_range";
        cert.region.g_lo = 2;
        cert.region.v_lo = 1;
        cert.region.v_hi = floorL;
        cert.region.n_set = "range";
        cert.region.n_lo = 2;
        cert.params = {{"floor_L", floorL}, {"min_omega", kMinOmega}};
        plan.tail_cert = std::move(cert);
        return execute_plan(plan, cfg, checkpoint, std::move(space));
    }

    // The nu2(g) <= 14 bulk is certified wholesale; only v in [15, floor(L)]
    // survives to enumeration.
    {
        Certificate cert;
        cert.kind = CertKind::empty_by_K15;
        cert.rule = "even_K15_low_nu2";
        cert.region.g_set = "even_nu2_range";
        cert.region.g_lo = 2;
        cert.region.v_lo = 1;
        cert.region.v_hi = kMinOmega - 1;
        cert.region.n_set = "range";
        cert.region.n_lo = 2;
        cert.params = {{"min_omega", kMinOmega}};
        PlannedUnit bulk;
        bulk.g = 0;
        bulk.unit_id = "A:L=" + L.str() + ":bulk";
        bulk.certs.push_back(std::move(cert));
        plan.units.push_back(std::move(bulk));
    }

    unsigned long budget = cfg.repunit_budget;
    const Nat base = pow2(kMinOmega);
    const Nat cap_exp_pow = pow2(ceilL);  // compare against 2^{2^ceilL}
    unsigned long units_made = 0;
    for (Nat t = 1; !plan.truncated; t += 1) {
        Nat g = base * t;
        const unsigned long v = kMinOmega + nu2(t);
        if (v > floorL) continue;
        if (!below_double_exp_cap(g, ceilL)) {
            Certificate cert;
            cert.kind = CertKind::empty_by_g_cap;
            cert.rule = "even_g_cap";
            cert.region.g_set = "even_nu2_range";
            cert.region.g_lo = g;
            cert.region.v_lo = kMinOmega;
            cert.region.v_hi = floorL;
            cert.region.n_set = "range";
            cert.region.n_lo = 2;
            cert.params = {{"cap", cap_string(ceilL)}};
            plan.tail_cert = std::move(cert);
            break;
        }
        if (units_made == cfg.unit_budget) {
            plan.truncated = true;
            plan.frontier_g = g;
            break;
        }
        ++units_made;

        PlannedUnit unit;
        unit.g = g;
        unit.v = v;
        unit.unit_id = "A:L=" + L.str() + ":g=" + to_decimal(g);
        if (const nlohmann::json* rec = checkpoint.find(unit.unit_id)) {
            unit.from_checkpoint = true;
            unit.checkpoint_record = *rec;
            plan.units.push_back(std::move(unit));
            continue;
        }
        // Walk n while a_{g,n} can stay below the cap (a > g^{n-1}).
        std::optional<Nat> last_covered;
        for (Nat n = 2;; n += 1) {
            if (!pow_check_less(g, n - 1, Nat(2), cap_exp_pow)) {
                Certificate cert;
                cert.kind = CertKind::empty_by_n_cap;
                cert.rule = "even_n_cap";
                cert.region.g_set = "single";
                cert.region.g_lo = g;
                cert.region.g_hi = g;
                cert.region.n_set = "range";
                cert.region.n_lo = n;
                cert.params = {{"cap", cap_string(ceilL)}};
                unit.certs.push_back(std::move(cert));
                break;
            }
            if (budget == 0) {
                plan.truncated = true;
                plan.frontier_g = g;
                plan.frontier_n = last_covered;
                if (last_covered) {
                    clip_unit(unit, *last_covered);
                } else {
                    unit.certs.clear();
                    unit.work_ns.clear();
                }
                break;
            }
            --budget;
            unit.work_ns.push_back(n);
            last_covered = n;
        }
        if (plan.truncated && !plan.frontier_n) break;  // unit dropped entirely
        plan.work_items += unit.work_ns.size();
        plan.units.push_back(std::move(unit));
    }

    return execute_plan(plan, cfg, checkpoint, std::move(space));
}

SearchReport search_B(const LParam& L, const Nat& n_max, const SearchConfig& cfg) {
    if (L.value() < ExactRational(Nat(1))) throw domain_error("search_B: L must be >= 1");
    if (n_max < 2) throw domain_error("search_B: n_max must be >= 2");
    if (!fits_ulong(n_max)) throw resource_error("search_B: n_max too large");
    const unsigned long floorL = L.floor_value();
    const unsigned long ceilL = L.ceil_value();
    const unsigned long cap_exp = ceilL - 1;
    const unsigned long nmax = to_ulong(n_max);

    nlohmann::json space{{"mode", "B"},
                         {"L", L.str()},
                         {"floor_L", floorL},
                         {"ceil_L", ceilL},
                         {"g_cap", cap_string(cap_exp)},
                         {"n_lo", "2"},
                         {"n_max", to_decimal(n_max)},
                         {"conditional_on_n_max", true}};

    Checkpoint checkpoint(cfg.checkpoint_path);
    Plan plan;
    const Nat cap_exp_pow = pow2(cap_exp);

    unsigned long budget = cfg.repunit_budget;
    unsigned long units_made = 0;
    for (Nat g = 3; !plan.truncated; g += 2) {
        const unsigned long v = nu2(g + 1);
        if (v > floorL) continue;  // outside B(L)
        if (!below_double_exp_cap(g, cap_exp)) {
            Certificate cert;
            cert.kind = CertKind::empty_by_g_cap;
            cert.rule = "odd_g_cap";
            cert.region.g_set = "odd_nu2p1_range";
            cert.region.g_lo = g;
            cert.region.v_lo = 1;
            cert.region.v_hi = floorL;
            cert.region.n_set = "range";
            cert.region.n_lo = 2;
            cert.region.n_hi = n_max;
            cert.params = {{"cap", cap_string(cap_exp)}};
            plan.tail_cert = std::move(cert);
            break;
        }
        if (units_made == cfg.unit_budget) {
            plan.truncated = true;
            plan.frontier_g = g;
            break;
        }
        ++units_made;

        PlannedUnit unit;
        unit.g = g;
        unit.v = v;
        unit.unit_id = "B:L=" + L.str() + ":nmax=" + to_decimal(n_max) + ":g=" + to_decimal(g);
        if (const nlohmann::json* rec = checkpoint.find(unit.unit_id)) {
            unit.from_checkpoint = true;
            unit.checkpoint_record = *rec;
            plan.units.push_back(std::move(unit));
            continue;
        }

        // Even exponents: b-1 is odd, so phi cannot divide it.
        {
            Certificate cert;
            cert.kind = CertKind::rejected_even_n;
            cert.rule = "odd_even_n";
            cert.region.g_set = "single";
            cert.region.g_lo = g;
            cert.region.g_hi = g;
            cert.region.n_set = "even";
            cert.region.n_lo = 2;
            cert.region.n_hi = n_max;
            unit.certs.push_back(std::move(cert));
        }
        // Odd exponents with nu2(n-1) <= s_thr have k_cap < 15.
        const unsigned long s_thr = v >= kMinOmega + 1 ? 0 : kMinOmega - v;
        if (s_thr >= 1 && nmax >= 3) {
            Certificate cert;
            cert.kind = CertKind::empty_by_K15;
            cert.rule = "odd_kcap_lt_15";
            cert.region.g_set = "single";
            cert.region.g_lo = g;
            cert.region.g_hi = g;
            cert.region.n_set = "odd_s_le";
            cert.region.n_lo = 3;
            cert.region.n_hi = n_max;
            cert.region.s_le = s_thr;
            cert.params = {{"nu2_g_plus_1", v}, {"s_threshold", s_thr},
                           {"min_omega", kMinOmega}};
            unit.certs.push_back(std::move(cert));
        }
        // Exponent-shape class: survivors whose odd part 2m+1 exceeds M* (the
        // largest odd t with g^t < 2^{2^{ceil(L)-1}}) are pruned wholesale.
        unsigned long m_star = 1;
        {
            unsigned long hi = cap_exp < 62 ? (1UL << cap_exp) : nmax;
            hi = std::min(hi, nmax);
            unsigned long lo = 1;  // g < cap, so g^1 passes
            while (lo < hi) {
                unsigned long mid = lo + (hi - lo + 1) / 2;
                if (pow_check_less(g, Nat(mid), Nat(2), cap_exp_pow)) lo = mid;
                else hi = mid - 1;
            }
            m_star = lo % 2 == 1 ? lo : lo - 1;
        }
        const unsigned long shift = s_thr + 1;
        if (nmax >= 3 && shift < 63) {
            Certificate cert;
            cert.kind = CertKind::empty_by_n_cap;
            cert.rule = "odd_remark_class";
            cert.region.g_set = "single";
            cert.region.g_lo = g;
            cert.region.g_hi = g;
            cert.region.n_set = "odd_s_ge_oddpart_gt";
            cert.region.n_lo = 3;
            cert.region.n_hi = n_max;
            cert.region.s_ge = shift;
            cert.region.oddpart_gt = m_star;
            cert.params = {{"m_star", std::to_string(m_star)}, {"cap", cap_string(cap_exp)}};
            unit.certs.push_back(std::move(cert));
        }
        // Surviving exponents: n = 1 + k * 2^{s_thr+1} with odd part <= M*;
        // all pass k_cap >= 15 and the shape bound by construction.
        std::optional<Nat> last_covered;
        bool unit_truncated = false;
        if (shift < 63) {
            const unsigned long step = 1UL << shift;
            for (unsigned long n = 1 + step; n <= nmax; n += step) {
                const unsigned long s = static_cast<unsigned long>(__builtin_ctzl(n - 1));
                if ((n - 1) >> s > m_star) continue;  // covered by the class cert
                const Nat n_nat(n);
                OddCandidate cand = OddCandidate::make(g, n_nat);
                FilterResult fr = odd_case_filter(cand, L);
                if (!fr.pass) {
                    unit.certs.push_back(std::move(*fr.certificate));
                    last_covered = n_nat;
                    continue;
                }
                if (budget == 0) {
                    plan.truncated = true;
                    unit_truncated = true;
                    plan.frontier_g = g;
                    plan.frontier_n = last_covered;
                    if (last_covered) {
                        clip_unit(unit, *last_covered);
                    } else {
                        unit.certs.clear();
                        unit.work_ns.clear();
                    }
                    break;
                }
                --budget;
                unit.work_ns.push_back(n_nat);
                last_covered = n_nat;
            }
        }
        if (unit_truncated && !plan.frontier_n) break;  // unit dropped entirely
        plan.work_items += unit.work_ns.size();
        plan.units.push_back(std::move(unit));
    }

    return execute_plan(plan, cfg, checkpoint, std::move(space));
}

SearchReport search_union(const LParam& L, const Nat& n_max, const SearchConfig& cfg) {
    SearchReport a = search_A(L, cfg);
    SearchReport b = search_B(L, n_max, cfg);
    SearchReport out;
    out.started_unix_ms = std::min(a.started_unix_ms, b.started_unix_ms);
    out.elapsed_us = a.elapsed_us + b.elapsed_us;
    out.space = {{"mode", "union"}, {"L", L.str()}, {"parts", {a.space, b.space}}};
    out.certificates = std::move(a.certificates);
    out.certificates.insert(out.certificates.end(),
                            std::make_move_iterator(b.certificates.begin()),
                            std::make_move_iterator(b.certificates.end()));
    out.candidates = std::move(a.candidates);
    out.candidates.insert(out.candidates.end(), std::make_move_iterator(b.candidates.begin()),
                          std::make_move_iterator(b.candidates.end()));
    out.checkpoints_consumed = a.checkpoints_consumed + b.checkpoints_consumed;
    out.checkpoints_emitted = a.checkpoints_emitted + b.checkpoints_emitted;
    out.counters = {{"A", a.counters}, {"B", b.counters}};
    return out;
}

// ---------------------------------------------------------------------------
// Certificate re-checking and tiling accounting
// ---------------------------------------------------------------------------

bool recheck_certificate(const Certificate& cert, const LParam& L) {
    const Region& rg = cert.region;
    switch (cert.kind) {
        case CertKind::empty_by_K15: {
            if (cert.rule == "even_K15_all" || cert.rule == "even_K15_low_nu2") {
                // 2^K | g forces K <= nu2(g) <= v_hi, which must sit below 15.
                return rg.g_set == "even_nu2_range" && rg.v_hi < kMinOmega;
            }
            if (cert.rule == "even_K15_point") {
                return rg.g_set == "single" && is_even(rg.g_lo) && nu2(rg.g_lo) < kMinOmega;
            }
            if (cert.rule == "odd_kcap_lt_15") {
                // Largest k_cap in the region is nu2(g+1) + s_le - 1.
                if (rg.g_set != "single" || rg.n_set != "odd_s_le") return false;
                const unsigned long v = nu2(rg.g_lo + 1);
                return v + rg.s_le - 1 < kMinOmega;
            }
            if (cert.rule == "odd_kcap_point") {
                if (rg.g_set != "single" || !rg.n_hi || rg.n_lo != *rg.n_hi) return false;
                OddCandidate c = OddCandidate::make(rg.g_lo, rg.n_lo);
                return c.k_cap < kMinOmega;
            }
            return false;
        }
        case CertKind::empty_by_g_cap: {
            const bool even_side = cert.rule == "even_g_cap" || cert.rule == "even_g_cap_point";
            const unsigned long cap_exp =
                even_side ? L.ceil_value() : L.ceil_value() - 1;
            // All g >= g_lo in the region are at or beyond 2^{2^cap_exp}.
            return !below_double_exp_cap(rg.g_lo, cap_exp);
        }
        case CertKind::empty_by_n_cap: {
            if (cert.rule == "even_n_cap") {
                // g^{n-1} >= 2^{2^ceil(L)} already at the region's lowest n.
                return rg.g_set == "single" &&
                       !pow_check_less(rg.g_lo, rg.n_lo - 1, Nat(2), pow2(L.ceil_value()));
            }
            if (cert.rule == "odd_n_cap_remark") {
                if (rg.g_set != "single" || !rg.n_hi || rg.n_lo != *rg.n_hi) return false;
                OddCandidate c = OddCandidate::make(rg.g_lo, rg.n_lo);
                return !pow_check_less(c.g, 2 * c.m + 1, Nat(2), pow2(L.ceil_value() - 1));
            }
            if (cert.rule == "odd_remark_class") {
                // Covered odd parts start at oddpart_gt + 2; the power bound is
                // monotone in the exponent.
                if (rg.g_set != "single" || rg.n_set != "odd_s_ge_oddpart_gt") return false;
                return !pow_check_less(rg.g_lo, rg.oddpart_gt + 2, Nat(2),
                                       pow2(L.ceil_value() - 1));
            }
            return false;
        }
        case CertKind::rejected_even_n:
            // Parity argument: sum of an odd count of odd terms is odd.
            return rg.n_set == "even" || (rg.n_hi && rg.n_lo == *rg.n_hi && is_even(rg.n_lo));
        case CertKind::candidate_unresolved:
            return true;  // annotation, not an emptiness claim
    }
    return false;
}

namespace {

// Declared-space membership for one (non-union) search part.
bool declared_member(const nlohmann::json& space, const Nat& g, const Nat& n) {
    const std::string mode = space.at("mode").get<std::string>();
    const unsigned long floorL = space.at("floor_L").get<unsigned long>();
    if (n < 2) return false;
    const bool truncated = space.value("truncated", false);
    std::optional<Nat> frontier_g, frontier_n;
    if (truncated && space.contains("frontier")) {
        const auto& fr = space["frontier"];
        if (fr.contains("g")) frontier_g = parse_nat(fr["g"].get<std::string>());
        if (fr.contains("n")) frontier_n = parse_nat(fr["n"].get<std::string>());
    }
    auto within_frontier = [&](bool enumerated_class) {
        if (!truncated || !enumerated_class || !frontier_g) return true;
        if (g < *frontier_g) return true;
        if (g > *frontier_g) return false;
        return frontier_n && n <= *frontier_n;
    };
    if (mode == "A") {
        if (is_odd(g) || g < 2) return false;
        const unsigned long v = nu2(g);
        if (v < 1 || v > floorL) return false;
        return within_frontier(v >= kMinOmega);
    }
    if (mode == "B") {
        if (is_even(g) || g < 3) return false;
        const unsigned long v = nu2(g + 1);
        if (v < 1 || v > floorL) return false;
        if (space.contains("n_max") && n > parse_nat(space["n_max"].get<std::string>())) {
            return false;
        }
        return within_frontier(true);
    }
    throw domain_error("declared_member: unsupported mode " + mode);
}

}  // namespace

bool verify_tiling(const SearchReport& report, const Nat& g_window, const Nat& n_window,
                   std::string* why) {
    std::vector<nlohmann::json> parts;
    if (report.space.at("mode").get<std::string>() == "union") {
        for (const auto& p : report.space.at("parts")) parts.push_back(p);
    } else {
        parts.push_back(report.space);
    }
    for (Nat g = 2; g <= g_window; g += 1) {
        for (Nat n = 2; n <= n_window; n += 1) {
            bool member = false;
            for (const auto& part : parts) member = member || declared_member(part, g, n);
            std::size_t cover = 0;
            for (const Certificate& c : report.certificates) {
                if (c.is_emptiness() && c.region.covers(g, n)) ++cover;
            }
            for (const CandidateRecord& c : report.candidates) {
                if (c.g && c.n && *c.g == g && *c.n == n) ++cover;
            }
            if (member != (cover == 1) && (member || cover != 0)) {
                if (why) {
                    *why = "g=" + to_decimal(g) + " n=" + to_decimal(n) +
                           (member ? " covered " + std::to_string(cover) + " times"
                                   : " covered but not in declared space");
                }
                return false;
            }
        }
    }
    return true;
}

}  // namespace lehmer
