// Lehmer-property verdicts and prefilter reports (pure data).
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lehmer/arith.hpp"
#include "lehmer/nat.hpp"

namespace lehmer {

enum class LehmerStatus { prime, lehmer, not_lehmer, unresolved };

enum class FailedCondition {
    is_prime,              // prime or unit: excluded by definition
    is_even,
    not_squarefree,
    divisibility_fails,    // phi(n) does not divide n-1
    too_few_prime_factors, // omega < 15
    three_divides_rule,    // 3 | n with omega or size below the known thresholds
};

const char* to_string(LehmerStatus s);
const char* to_string(FailedCondition c);

struct LehmerVerdict {
    Nat subject;
    LehmerStatus status;
    std::optional<FailedCondition> failed_condition;  // present iff not_lehmer
    std::optional<Nat> phi;
    std::optional<unsigned> omega;
    bool probable = false;  // some primality/factor certification was probabilistic
    std::optional<Factorization> factorization;  // partial when unresolved

    bool decided() const { return status != LehmerStatus::unresolved; }
};

struct PrefilterReport {
    Nat subject;
    // (rule, witness) pairs; each fired rule is re-checkable from subject alone.
    std::vector<std::pair<FailedCondition, nlohmann::json>> rules_fired;

    bool fired(FailedCondition c) const {
        for (const auto& [rule, w] : rules_fired) {
            if (rule == c) return true;
        }
        return false;
    }
};

void to_json(nlohmann::json& j, const LehmerVerdict& v);
void to_json(nlohmann::json& j, const PrefilterReport& r);

}  // namespace lehmer
