#include "affdim/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "affdim/errors.hpp"

namespace affdim {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ValidationError("malformed rational '" + std::string(original) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

Rational parse_decimal(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    Integer z = parse_integer(exp_text, original);
    if (!z.fits_slong_p() || std::abs(z.get_si()) > 100000)
      throw ValidationError("exponent out of range in '" + std::string(original) + "'");
    exponent = z.get_si();
  }
  std::string digits;
  long fraction_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw ValidationError("malformed decimal '" + std::string(original) + "'");
    digits = std::string(whole) + std::string(frac);
    fraction_digits = static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw ValidationError("malformed decimal '" + std::string(original) + "'");
    digits = std::string(s);
  }
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long scale = exponent - fraction_digits;
  Integer ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(scale)));
  Rational q = scale >= 0 ? Rational(mantissa * ten_power) : Rational(mantissa, ten_power);
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ValidationError("empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(s.substr(0, slash), text);
    Integer den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(s, text);
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Integer floor_int(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_int(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::abs(e)));
  return e >= 0 ? Rational(p) : Rational(Integer(1), p);
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational q;
  mpz_pow_ui(q.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(q.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  return q;  // already canonical: powers of coprime integers stay coprime
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

namespace {
double log2_integer(const Integer& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}
}  // namespace

double log2(const Rational& q) {
  if (sgn(q) <= 0) throw DomainError("log2 of a nonpositive rational");
  return log2_integer(q.get_num()) - log2_integer(q.get_den());
}

std::size_t hash_value(const Integer& z) noexcept {
  const mpz_srcptr p = z.get_mpz_t();
  std::size_t seed = static_cast<std::size_t>(p->_mp_size);
  const int limbs = std::abs(p->_mp_size);
  for (int i = 0; i < limbs; ++i) hash_combine(seed, static_cast<std::size_t>(p->_mp_d[i]));
  return seed;
}

std::size_t hash_value(const Rational& q) noexcept {
  std::size_t seed = hash_value(q.get_num());
  hash_combine(seed, hash_value(q.get_den()));
  return seed;
}

std::uint64_t to_u64(const Integer& z) {
  if (sgn(z) < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) throw DomainError("integer does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, z.get_mpz_t());
  return out;
}

}  // namespace affdim
