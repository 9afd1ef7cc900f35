// ExactRational: non-negative rationals in lowest terms; comparisons are exact.
#pragma once

#include <gmpxx.h>

#include <string>

#include "lehmer/errors.hpp"
#include "lehmer/nat.hpp"

namespace lehmer {

class ExactRational {
public:
    ExactRational() : v_(0) {}

    ExactRational(const Nat& num, const Nat& den) : v_(num, den) {
        if (sgn(den) <= 0) throw domain_error("ExactRational: denominator must be positive");
        if (sgn(num) < 0) throw domain_error("ExactRational: negative value");
        v_.canonicalize();
    }

    explicit ExactRational(const Nat& whole) : v_(whole) {
        if (sgn(whole) < 0) throw domain_error("ExactRational: negative value");
    }

    static ExactRational one() { return ExactRational(Nat(1)); }

    Nat numerator() const { return Nat(v_.get_num()); }
    Nat denominator() const { return Nat(v_.get_den()); }
    const mpq_class& value() const { return v_; }

    bool is_integral() const { return v_.get_den() == 1; }
    bool is_zero() const { return sgn(v_) == 0; }

    ExactRational operator*(const ExactRational& o) const { return ExactRational(mpq_class(v_ * o.v_)); }
    ExactRational operator/(const ExactRational& o) const {
        if (o.is_zero()) throw domain_error("ExactRational: division by zero");
        return ExactRational(mpq_class(v_ / o.v_));
    }

    // 1 - 1/x for integer x > 1.
    static ExactRational one_minus_inverse(const Nat& x) {
        if (x <= 1) throw domain_error("one_minus_inverse: x must exceed 1");
        return ExactRational(Nat(x - 1), x);
    }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const ExactRational& a, const ExactRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return a.v_ >= b.v_; }

    // "num/den" (or plain "num" when integral).
    std::string str() const {
        if (is_integral()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

private:
    explicit ExactRational(const mpq_class& q) : v_(q) {}
    mpq_class v_;  // canonical and >= 0
};

}  // namespace lehmer
