// Error types and global allocation caps.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lehmer {

// Bad argument values (even g where odd is required, n = 0 valuation, ...).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// A checked operation precondition failed; the message names the violated condition.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// Refusal to allocate: the request exceeds a documented cap.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Hard cap on the bit size of any single constructed integer. Read once from
// LEHMER_HUNT_MAX_BITS; default 1 << 28 bits (32 MiB per number), which admits
// the K = 25 bound evaluations.
std::size_t max_bits();

// Throws resource_error if an integer of `bits` bits would exceed the cap.
void check_bit_budget(std::size_t bits, const char* what);

// Cap on totient_sieve length (entries). 2^27 entries = 512 MiB of phi values.
constexpr std::size_t default_sieve_cap() { return std::size_t{1} << 27; }

}  // namespace lehmer
