// Nat: the arbitrary-precision non-negative integer carrier (GMP-backed).
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

#include "lehmer/errors.hpp"

namespace lehmer {

using Nat = mpz_class;

// Number of bits in the binary expansion; bit_length(0) == 0.
inline std::size_t bit_length(const Nat& x) {
    if (sgn(x) == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline bool fits_ulong(const Nat& x) { return mpz_fits_ulong_p(x.get_mpz_t()) != 0; }

inline unsigned long to_ulong(const Nat& x) { return mpz_get_ui(x.get_mpz_t()); }

inline bool is_even(const Nat& x) { return mpz_even_p(x.get_mpz_t()) != 0; }
inline bool is_odd(const Nat& x) { return mpz_odd_p(x.get_mpz_t()) != 0; }

// base^exp with the bit budget enforced before any allocation.
Nat pow_nat(const Nat& base, const Nat& exp);

// 2^e, budget-checked.
Nat pow2(unsigned long e);

// Strict decimal parse (digits only); throws domain_error otherwise.
Nat parse_nat(std::string_view text);

inline std::string to_decimal(const Nat& x) { return x.get_str(); }

}  // namespace lehmer
