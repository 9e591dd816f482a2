#include "hypheat/bigreal.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>

namespace hypheat {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

void widen(mpfr_ptr v, mpfr_prec_t bits) {
  if (mpfr_get_prec(v) < bits) mpfr_prec_round(v, bits, kRnd);
}

template <class Op>
BigReal unary(const BigReal& x, Op op) {
  BigReal r(0.0, x.precision());
  op(r.raw(), x.raw(), kRnd);
  return r;
}

}  // namespace

BigReal::BigReal(double v, int bits) {
  mpfr_init2(v_, std::max<int>(bits, MPFR_PREC_MIN));
  mpfr_set_d(v_, v, kRnd);
}

BigReal::BigReal(const std::string& decimal, int bits) {
  mpfr_init2(v_, std::max<int>(bits, MPFR_PREC_MIN));
  if (mpfr_set_str(v_, decimal.c_str(), 10, kRnd) != 0) {
    mpfr_clear(v_);
    throw std::invalid_argument("BigReal: cannot parse '" + decimal + "'");
  }
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRnd);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Steal the limbs; leave `other` as a valid minimal-precision zero.
  *v_ = *other.v_;
  mpfr_init2(other.v_, MPFR_PREC_MIN);
  mpfr_set_zero(other.v_, 1);
}

BigReal::BigReal(const BigReal& other, int bits) {
  mpfr_init2(v_, std::max<int>(bits, MPFR_PREC_MIN));
  mpfr_set(v_, other.v_, kRnd);
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, kRnd);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

BigReal& BigReal::operator=(double v) {
  mpfr_set_d(v_, v, kRnd);
  return *this;
}

std::string BigReal::to_string(int digits) const {
  if (!is_finite()) {
    if (mpfr_nan_p(v_)) return "nan";
    return sign() > 0 ? "inf" : "-inf";
  }
  if (digits <= 0) digits = static_cast<int>(std::ceil(precision() * 0.30102999566398120)) + 1;
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits - 1 > 0 ? digits : 1, v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

BigReal& BigReal::operator+=(const BigReal& o) {
  widen(v_, mpfr_get_prec(o.v_));
  mpfr_add(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator-=(const BigReal& o) {
  widen(v_, mpfr_get_prec(o.v_));
  mpfr_sub(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator*=(const BigReal& o) {
  widen(v_, mpfr_get_prec(o.v_));
  mpfr_mul(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator/=(const BigReal& o) {
  widen(v_, mpfr_get_prec(o.v_));
  mpfr_div(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator+=(double o) {
  mpfr_add_d(v_, v_, o, kRnd);
  return *this;
}
BigReal& BigReal::operator-=(double o) {
  mpfr_sub_d(v_, v_, o, kRnd);
  return *this;
}
BigReal& BigReal::operator*=(double o) {
  mpfr_mul_d(v_, v_, o, kRnd);
  return *this;
}
BigReal& BigReal::operator/=(double o) {
  mpfr_div_d(v_, v_, o, kRnd);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.v_, r.v_, kRnd);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const BigReal& a, double b) {
  if (mpfr_nan_p(a.v_) || std::isnan(b)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_d(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }
BigReal operator+(BigReal a, double b) { return a += b; }
BigReal operator-(BigReal a, double b) { return a -= b; }
BigReal operator*(BigReal a, double b) { return a *= b; }
BigReal operator/(BigReal a, double b) { return a /= b; }
BigReal operator+(double a, BigReal b) { return b += a; }
BigReal operator-(double a, BigReal b) {
  mpfr_d_sub(b.raw(), a, b.raw(), kRnd);
  return b;
}
BigReal operator*(double a, BigReal b) { return b *= a; }
BigReal operator/(double a, const BigReal& b) {
  BigReal r(0.0, b.precision());
  mpfr_d_div(r.raw(), a, b.raw(), kRnd);
  return r;
}

BigReal abs(const BigReal& x) { return unary(x, mpfr_abs); }
BigReal sqrt(const BigReal& x) { return unary(x, mpfr_sqrt); }
BigReal exp(const BigReal& x) { return unary(x, mpfr_exp); }
BigReal expm1(const BigReal& x) { return unary(x, mpfr_expm1); }
BigReal log(const BigReal& x) { return unary(x, mpfr_log); }
BigReal log1p(const BigReal& x) { return unary(x, mpfr_log1p); }
BigReal log10(const BigReal& x) { return unary(x, mpfr_log10); }
BigReal sin(const BigReal& x) { return unary(x, mpfr_sin); }
BigReal cos(const BigReal& x) { return unary(x, mpfr_cos); }
BigReal sinh(const BigReal& x) { return unary(x, mpfr_sinh); }
BigReal cosh(const BigReal& x) { return unary(x, mpfr_cosh); }
BigReal tanh(const BigReal& x) { return unary(x, mpfr_tanh); }
BigReal asinh(const BigReal& x) { return unary(x, mpfr_asinh); }
BigReal acosh(const BigReal& x) { return unary(x, mpfr_acosh); }
BigReal tgamma(const BigReal& x) { return unary(x, mpfr_gamma); }
BigReal digamma(const BigReal& x) { return unary(x, mpfr_digamma); }

BigReal lgamma(const BigReal& x) {
  BigReal r(0.0, x.precision());
  int sign = 0;
  mpfr_lgamma(r.raw(), &sign, x.raw(), kRnd);
  return r;
}

BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r(0.0, std::max(x.precision(), y.precision()));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), kRnd);
  return r;
}

BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal r(0.0, std::max(x.precision(), y.precision()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), kRnd);
  return r;
}

BigReal pow(const BigReal& x, double y) {
  if (y == std::floor(y) && std::fabs(y) < 1e9) return pow(x, static_cast<int>(y));
  return pow(x, BigReal(y, x.precision()));
}

BigReal pow(const BigReal& x, int n) {
  BigReal r(0.0, x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, kRnd);
  return r;
}

BigReal floor(const BigReal& x) { return unary(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { return mpfr_floor(r, a); }); }

BigReal ldexp(const BigReal& x, long e) {
  BigReal r(x);
  mpfr_mul_2si(r.raw(), r.raw(), e, kRnd);
  return r;
}

BigReal fma(const BigReal& a, const BigReal& b, const BigReal& c) {
  BigReal r(0.0, std::max({a.precision(), b.precision(), c.precision()}));
  mpfr_fma(r.raw(), a.raw(), b.raw(), c.raw(), kRnd);
  return r;
}

BigReal const_pi(int bits) {
  BigReal r(0.0, bits);
  mpfr_const_pi(r.raw(), kRnd);
  return r;
}

BigReal const_ln2(int bits) {
  BigReal r(0.0, bits);
  mpfr_const_log2(r.raw(), kRnd);
  return r;
}

BigReal const_euler(int bits) {
  BigReal r(0.0, bits);
  mpfr_const_euler(r.raw(), kRnd);
  return r;
}

}  // namespace hypheat
