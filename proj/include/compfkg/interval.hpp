#pragma once

// Certified interval arithmetic on top of MPFR with outward (directed) rounding.
// Used wherever a logarithm enters an otherwise exact comparison.

#include <mpfr.h>

#include <functional>
#include <string>

#include "compfkg/rational.hpp"

namespace compfkg {

class Interval {
 public:
  explicit Interval(mpfr_prec_t prec);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(Interval other) noexcept;
  ~Interval();

  static Interval point(const Rational& q, mpfr_prec_t prec);
  /// Enclosure of ln(q); q must be positive.
  static Interval log(const Rational& q, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }
  Interval& operator+=(const Interval& other);
  Interval& operator-=(const Interval& other);
  Interval& operator*=(const Rational& c);
  Interval& operator/=(const Rational& c);
  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Rational& c) { return a *= c; }
  Interval exp() const;

  bool contains_zero() const;
  /// +1 / -1 when certain, 0 when the enclosure straddles zero.
  int sign() const;
  /// Upper bound on hi - lo as a double (rounded up).
  double width() const;
  /// Width below 2^-bits.
  bool narrower_than_pow2(long bits) const;

  std::string lo_str(int digits = 20) const;
  std::string hi_str(int digits = 20) const;
  double mid() const;

 private:
  void swap(Interval& other) noexcept;
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

struct CertifiedSign {
  /// +1, -1, or 0 when the enclosure still contained zero at tolerance.
  int sign = 0;
  mpfr_prec_t precision = 0;
  std::string lo;
  std::string hi;
};

inline constexpr mpfr_prec_t kDefaultStartPrecision = 128;
inline constexpr long kEqualityToleranceBits = 64;

/// Evaluates `enclose` at increasing precision (doubling from start_bits) until
/// the sign is determined or the enclosure is narrower than 2^-64.
CertifiedSign certify_sign(const std::function<Interval(mpfr_prec_t)>& enclose,
                           mpfr_prec_t start_bits = kDefaultStartPrecision);

}  // namespace compfkg
