#include "compfkg/interval.hpp"

#include <algorithm>
#include <memory>
#include <utility>

#include "compfkg/errors.hpp"

namespace compfkg {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.prec_) { swap(other); }

Interval& Interval::operator=(Interval other) noexcept {
  swap(other);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

void Interval::swap(Interval& other) noexcept {
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval Interval::point(const Rational& q, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_q(out.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_, q.get_mpq_t(), MPFR_RNDU);
  return out;
}

Interval Interval::log(const Rational& q, mpfr_prec_t prec) {
  if (sgn(q) <= 0) throw DomainError("logarithm of non-positive value " + to_string(q));
  Interval out = point(q, prec);
  mpfr_log(out.lo_, out.lo_, MPFR_RNDD);
  mpfr_log(out.hi_, out.hi_, MPFR_RNDU);
  return out;
}

Interval& Interval::operator+=(const Interval& other) {
  mpfr_add(lo_, lo_, other.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator-=(const Interval& other) {
  // [a,b] - [c,d] = [a-d, b-c]
  mpfr_t tmp;
  mpfr_init2(tmp, prec_);
  mpfr_sub(tmp, lo_, other.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, other.lo_, MPFR_RNDU);
  mpfr_swap(lo_, tmp);
  mpfr_clear(tmp);
  return *this;
}

Interval& Interval::operator*=(const Rational& c) {
  if (sgn(c) >= 0) {
    mpfr_mul_q(lo_, lo_, c.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi_, hi_, c.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_t tmp;
    mpfr_init2(tmp, prec_);
    mpfr_mul_q(tmp, hi_, c.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi_, lo_, c.get_mpq_t(), MPFR_RNDU);
    mpfr_swap(lo_, tmp);
    mpfr_clear(tmp);
  }
  return *this;
}

Interval& Interval::operator/=(const Rational& c) {
  if (sgn(c) == 0) throw DomainError("interval division by zero");
  Rational inv = 1 / c;
  return *this *= inv;
}

Interval Interval::exp() const {
  Interval out(prec_);
  mpfr_exp(out.lo_, lo_, MPFR_RNDD);
  mpfr_exp(out.hi_, hi_, MPFR_RNDU);
  return out;
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

int Interval::sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  return 0;
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double out = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return out;
}

bool Interval::narrower_than_pow2(long bits) const {
  mpfr_t w, bound;
  mpfr_init2(w, prec_);
  mpfr_init2(bound, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_set_ui_2exp(bound, 1, -bits, MPFR_RNDN);
  bool out = mpfr_cmp(w, bound) < 0;
  mpfr_clear(w);
  mpfr_clear(bound);
  return out;
}

namespace {

std::string format(const mpfr_t x, int digits, mpfr_rnd_t rnd) {
  char* buf = nullptr;
  std::string fmt = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : "U") + "e";
  mpfr_asprintf(&buf, fmt.c_str(), x);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

std::string Interval::lo_str(int digits) const { return format(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_str(int digits) const { return format(hi_, digits, MPFR_RNDU); }

double Interval::mid() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

CertifiedSign certify_sign(const std::function<Interval(mpfr_prec_t)>& enclose, mpfr_prec_t start_bits) {
  constexpr mpfr_prec_t kMaxPrecision = 1 << 16;
  CertifiedSign out;
  for (mpfr_prec_t prec = std::max<mpfr_prec_t>(start_bits, MPFR_PREC_MIN);; prec *= 2) {
    Interval iv = enclose(prec);
    out.precision = prec;
    out.lo = iv.lo_str();
    out.hi = iv.hi_str();
    out.sign = iv.sign();
    if (out.sign != 0 || iv.narrower_than_pow2(kEqualityToleranceBits) || prec >= kMaxPrecision) return out;
  }
}

}  // namespace compfkg
