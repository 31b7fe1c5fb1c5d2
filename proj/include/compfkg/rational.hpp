#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace compfkg {

using Rational = mpq_class;
using Integer = mpz_class;

/// Serializes as "p/q"; integers keep the "/1" suffix so the format is uniform.
inline std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Accepts "p/q", "p" or a plain decimal integer.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline Rational pow(const Rational& base, unsigned long exp) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  return out;
}

inline Integer binomial(long m, long k) {
  // Zero outside 0 <= k <= m.
  if (k < 0 || m < 0 || k > m) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
  return out;
}

inline Integer factorial(long m) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(m));
  return out;
}

/// total! / prod(parts_i!)
inline Integer multinomial(long total, const std::vector<int>& parts) {
  long sum = 0;
  for (int p : parts) {
    if (p < 0) return 0;
    sum += p;
  }
  if (sum != total) return 0;
  Integer out = factorial(total);
  for (int p : parts) out /= factorial(p);
  return out;
}

}  // namespace compfkg
