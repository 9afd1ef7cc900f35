#include "lehmer/report.hpp"

#include <sstream>

#include "lehmer/arith.hpp"

namespace lehmer {

const char* to_string(LehmerStatus s) {
    switch (s) {
        case LehmerStatus::prime: return "prime";
        case LehmerStatus::lehmer: return "lehmer";
        case LehmerStatus::not_lehmer: return "not_lehmer";
        case LehmerStatus::unresolved: return "unresolved";
    }
    return "?";
}

const char* to_string(FailedCondition c) {
    switch (c) {
        case FailedCondition::is_prime: return "is_prime";
        case FailedCondition::is_even: return "is_even";
        case FailedCondition::not_squarefree: return "not_squarefree";
        case FailedCondition::divisibility_fails: return "divisibility_fails";
        case FailedCondition::too_few_prime_factors: return "too_few_prime_factors";
        case FailedCondition::three_divides_rule: return "three_divides_rule";
    }
    return "?";
}

const char* to_string(CertKind k) {
    switch (k) {
        case CertKind::empty_by_K15: return "empty_by_K15";
        case CertKind::empty_by_g_cap: return "empty_by_g_cap";
        case CertKind::empty_by_n_cap: return "empty_by_n_cap";
        case CertKind::rejected_even_n: return "rejected_even_n";
        case CertKind::candidate_unresolved: return "candidate_unresolved";
    }
    return "?";
}

CertKind cert_kind_from_string(const std::string& s) {
    if (s == "empty_by_K15") return CertKind::empty_by_K15;
    if (s == "empty_by_g_cap") return CertKind::empty_by_g_cap;
    if (s == "empty_by_n_cap") return CertKind::empty_by_n_cap;
    if (s == "rejected_even_n") return CertKind::rejected_even_n;
    if (s == "candidate_unresolved") return CertKind::candidate_unresolved;
    throw domain_error("unknown certificate kind: " + s);
}

void to_json(nlohmann::json& j, const LehmerVerdict& v) {
    j = nlohmann::json{{"subject", to_decimal(v.subject)}, {"status", to_string(v.status)}};
    if (v.failed_condition) j["failed_condition"] = to_string(*v.failed_condition);
    if (v.phi) j["phi"] = to_decimal(*v.phi);
    if (v.omega) j["omega"] = *v.omega;
    if (v.probable) j["probable"] = true;
    if (v.factorization) {
        nlohmann::json factors = nlohmann::json::array();
        for (const auto& [p, e] : v.factorization->factors) {
            factors.push_back({to_decimal(p), e});
        }
        j["factors"] = std::move(factors);
        j["factorization_complete"] = v.factorization->complete;
        if (!v.factorization->proven) j["factorization_proven"] = false;
    }
}

void to_json(nlohmann::json& j, const PrefilterReport& r) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& [rule, witness] : r.rules_fired) {
        rules.push_back({{"rule", to_string(rule)}, {"witness", witness}});
    }
    j = nlohmann::json{{"subject", to_decimal(r.subject)}, {"rules_fired", std::move(rules)}};
}

bool Region::covers(const Nat& g, const Nat& n) const {
    if (g_set == "none") return false;
    if (g < g_lo) return false;
    if (g_hi && g > *g_hi) return false;
    if (g_set == "single") {
        if (g != g_lo) return false;
    } else if (g_set == "even_nu2_range") {
        if (is_odd(g)) return false;
        unsigned long v = nu2(g);
        if (v < v_lo || v > v_hi) return false;
    } else if (g_set == "odd_nu2p1_range") {
        if (is_even(g)) return false;
        unsigned long v = nu2(g + 1);
        if (v < v_lo || v > v_hi) return false;
    } else {
        throw domain_error("Region: unknown g_set " + g_set);
    }

    if (n < n_lo) return false;
    if (n_hi && n > *n_hi) return false;
    if (n_set == "range") return true;
    if (n_set == "even") return is_even(n);
    if (n_set == "odd_s_le") return is_odd(n) && n >= 3 && nu2(n - 1) <= s_le;
    if (n_set == "odd_s_ge_oddpart_gt") {
        if (is_even(n) || n < 3) return false;
        const unsigned long s = nu2(n - 1);
        return s >= s_ge && Nat((n - 1) >> s) > oddpart_gt;
    }
    throw domain_error("Region: unknown n_set " + n_set);
}

Region Region::single_point(const Nat& g, const Nat& n) {
    Region r;
    r.g_set = "single";
    r.g_lo = g;
    r.g_hi = g;
    r.n_set = "range";
    r.n_lo = n;
    r.n_hi = n;
    return r;
}

void to_json(nlohmann::json& j, const Region& r) {
    j = nlohmann::json{{"g_set", r.g_set}, {"g_lo", to_decimal(r.g_lo)},
                       {"n_set", r.n_set}, {"n_lo", to_decimal(r.n_lo)}};
    if (r.g_hi) j["g_hi"] = to_decimal(*r.g_hi);
    if (r.g_set == "even_nu2_range" || r.g_set == "odd_nu2p1_range") {
        j["v_lo"] = r.v_lo;
        j["v_hi"] = r.v_hi;
    }
    if (r.n_hi) j["n_hi"] = to_decimal(*r.n_hi);
    if (r.n_set == "odd_s_le") j["s_le"] = r.s_le;
    if (r.n_set == "odd_s_ge_oddpart_gt") {
        j["s_ge"] = r.s_ge;
        j["oddpart_gt"] = to_decimal(r.oddpart_gt);
    }
}

void from_json(const nlohmann::json& j, Region& r) {
    r.g_set = j.at("g_set").get<std::string>();
    r.g_lo = parse_nat(j.at("g_lo").get<std::string>());
    if (j.contains("g_hi")) r.g_hi = parse_nat(j.at("g_hi").get<std::string>());
    r.v_lo = j.value("v_lo", 0UL);
    r.v_hi = j.value("v_hi", 0UL);
    r.n_set = j.at("n_set").get<std::string>();
    r.n_lo = parse_nat(j.at("n_lo").get<std::string>());
    if (j.contains("n_hi")) r.n_hi = parse_nat(j.at("n_hi").get<std::string>());
    r.s_le = j.value("s_le", 0UL);
    r.s_ge = j.value("s_ge", 0UL);
    if (j.contains("oddpart_gt")) r.oddpart_gt = parse_nat(j.at("oddpart_gt").get<std::string>());
}

void to_json(nlohmann::json& j, const Certificate& c) {
    j = nlohmann::json{{"kind", to_string(c.kind)}, {"rule", c.rule}, {"region", c.region}};
    if (!c.params.is_null()) j["params"] = c.params;
}

void from_json(const nlohmann::json& j, Certificate& c) {
    c.kind = cert_kind_from_string(j.at("kind").get<std::string>());
    c.rule = j.at("rule").get<std::string>();
    c.region = j.at("region").get<Region>();
    c.params = j.value("params", nlohmann::json());
}

void to_json(nlohmann::json& j, const CandidateRecord& c) {
    j = nlohmann::json::object();
    if (c.g) j["g"] = to_decimal(*c.g);
    if (c.n) j["n"] = to_decimal(*c.n);
    if (c.subject) {
        j["subject"] = to_decimal(*c.subject);
        j["subject_bits"] = static_cast<std::uint64_t>(bit_length(*c.subject));
    }
    if (c.verdict) j["verdict"] = *c.verdict;
    if (!c.note.empty()) j["note"] = c.note;
}

std::size_t SearchReport::lehmer_count() const {
    std::size_t k = 0;
    for (const auto& c : candidates) {
        if (c.verdict && c.verdict->status == LehmerStatus::lehmer) ++k;
    }
    return k;
}

std::size_t SearchReport::unresolved_count() const {
    std::size_t k = 0;
    for (const auto& c : candidates) {
        if (!c.verdict || c.verdict->status == LehmerStatus::unresolved) ++k;
    }
    return k;
}

void to_json(nlohmann::json& j, const SearchReport& r) {
    j = nlohmann::json{
        {"space", r.space},
        {"certificates", r.certificates},
        {"candidates", r.candidates},
        {"checkpoints", {{"consumed", r.checkpoints_consumed}, {"emitted", r.checkpoints_emitted}}},
        {"counters", r.counters},
        {"summary",
         {{"certificates", r.certificates.size()},
          {"candidates", r.candidates.size()},
          {"lehmer_found", r.lehmer_count()},
          {"unresolved", r.unresolved_count()}}},
        {"timestamp", {{"started_unix_ms", r.started_unix_ms}, {"elapsed_us", r.elapsed_us}}},
    };
}

std::string candidates_csv(const SearchReport& r) {
    std::ostringstream out;
    out << "g,n,subject_bits,status,failed_condition,note\n";
    for (const auto& c : r.candidates) {
        out << (c.g ? to_decimal(*c.g) : "") << ',';
        out << (c.n ? to_decimal(*c.n) : "") << ',';
        out << (c.subject ? std::to_string(bit_length(*c.subject)) : "") << ',';
        out << (c.verdict ? to_string(c.verdict->status) : "") << ',';
        out << (c.verdict && c.verdict->failed_condition ? to_string(*c.verdict->failed_condition)
                                                         : "")
            << ',';
        out << c.note << '\n';
    }
    return out.str();
}

}  // namespace lehmer
