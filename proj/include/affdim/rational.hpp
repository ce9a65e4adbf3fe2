#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace affdim {

/// Exact rational number. mpq_class keeps values canonical (reduced,
/// positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", an integer, or a decimal string such as "0.25" or "-1.5e-3"
/// into an exact rational. Throws ValidationError on malformed text.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

Integer floor_int(const Rational& q);
Integer ceil_int(const Rational& q);

/// 2^e for any integer e.
Rational pow2(long e);
Rational pow(const Rational& base, unsigned long exponent);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Base-2 logarithm of a positive rational, accurate for huge numerators and
/// denominators (no overflow through double conversion).
double log2(const Rational& q);

std::size_t hash_value(const Integer& z) noexcept;
std::size_t hash_value(const Rational& q) noexcept;

inline void hash_combine(std::size_t& seed, std::size_t h) noexcept {
  seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

/// Converts a nonnegative integer known to fit in 64 bits.
std::uint64_t to_u64(const Integer& z);

}  // namespace affdim
