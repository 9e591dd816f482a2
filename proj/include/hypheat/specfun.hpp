#pragma once

// Special functions, templated on the scalar type so the same code runs in
// double and in BigReal.

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hypheat/quad.hpp"
#include "hypheat/scalar.hpp"

namespace hypheat::specfun {

// ---------------------------------------------------------------------------
// Gamma family

/// Exact Bernoulli number B_n (B_1 = -1/2) rounded to the scalar type.
double bernoulli_double(int n);
BigReal bernoulli_big(int n, int bits);

template <Scalar R>
R bernoulli_as(int n, int bits) {
  if constexpr (std::same_as<R, double>) {
    (void)bits;
    return bernoulli_double(n);
  } else {
    return bernoulli_big(n, bits);
  }
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

template <Scalar R>
R gamma_of(const R& x) {
  return sc::tgamma(x);
}

/// 1 / Gamma(x), zero at the poles.
template <Scalar R>
R rgamma(const R& x) {
  if (is_nonpositive_integer(sc::to_double(x)) && x == sc::floor(x)) return x * 0.0;
  return 1.0 / sc::tgamma(x);
}

template <Scalar R>
R digamma_of(const R& x) {
  if constexpr (std::same_as<R, double>) {
    return boost::math::digamma(x);
  } else {
    return hypheat::digamma(x);
  }
}

/// Gamma(x) for x > 0, correctly rounded at the policy's working precision
/// (at least 64 bits).
BigReal gamma(double x, const PrecisionPolicy& prec);

/// Re log Gamma(x + i y) for x > 0: Stirling series after shifting the
/// argument to |z| >= max(10, bits ln2 / (2 pi) + 2).
template <Scalar R>
R re_lngamma(const R& x, const R& y, int bits) {
  using sc::atan2;
  using sc::cos;
  using sc::log;
  using sc::sqrt;
  const int b = bits_of<R>(make_real<R>(0.0, bits));
  const double r0 = std::max(10.0, b * std::numbers::ln2 / (2.0 * std::numbers::pi) + 2.0);
  const double xd = sc::to_double(x);
  const double yd = sc::to_double(y);
  int shift = 0;
  if (xd * xd + yd * yd < r0 * r0) {
    shift = static_cast<int>(std::ceil(std::sqrt(std::max(r0 * r0 - yd * yd, 0.0)) - xd));
    if (shift < 0) shift = 0;
  }
  R acc = make_real<R>(0.0, bits);
  const R y2 = y * y;
  for (int k = 0; k < shift; ++k) {
    const R xk = x + static_cast<double>(k);
    acc += log(xk * xk + y2);
  }
  acc *= 0.5;
  const R X = x + static_cast<double>(shift);
  const R mod2 = X * X + y2;
  const R mod = sqrt(mod2);
  const R arg = atan2(y, X);
  const R half_log_2pi = 0.5 * log(pi_of<R>(bits) * 2.0);
  R s = (X - 0.5) * log(mod) - y * arg - X + half_log_2pi;
  const double eps = std::ldexp(1.0, -b);
  R inv = 1.0 / mod;  // |w|^{-(2j-1)}
  const R inv2 = inv * inv;
  for (int j = 1; j < 400; ++j) {
    const R term = bernoulli_as<R>(2 * j, bits) / (2.0 * j * (2.0 * j - 1.0)) * inv * cos(arg * (2.0 * j - 1.0));
    s += term;
    if (std::fabs(sc::to_double(term)) <= eps * std::fabs(sc::to_double(s))) break;
    inv *= inv2;
  }
  return s - acc;
}

template <Scalar R>
struct GammaRatio {
  R value;
  /// True at p = 0, where the value is the limit 0.
  bool boundary = false;
};

/// |Gamma(ip + nu + 1/2)|^2 / |Gamma(ip)|^2 for p >= 0, nu > -1/2, using
/// |Gamma(ip)|^2 = pi / (p sinh(pi p)).
template <Scalar R>
GammaRatio<R> gamma_ratio_sq(const R& p, double nu, int bits) {
  using sc::exp;
  using sc::log;
  using sc::log1p;
  if (!(nu > -0.5)) throw DomainError("gamma_ratio_sq: nu must exceed -1/2");
  const double pd = sc::to_double(p);
  if (pd < 0.0) throw DomainError("gamma_ratio_sq: p must be nonnegative");
  if (pd == 0.0) return {make_real<R>(0.0, bits), true};
  const R pi = pi_of<R>(bits);
  const R x = make_real<R>(nu + 0.5, bits);
  // log sinh(pi p) = pi p - ln 2 + log1p(-e^{-2 pi p})
  const R pp = pi * p;
  const R log_sinh = pp - log(make_real<R>(2.0, bits)) + log1p(-exp(pp * -2.0));
  const R lg = re_lngamma<R>(x, p, bits) * 2.0 + log(p) + log_sinh - log(pi);
  return {exp(lg), false};
}

inline double gamma_ratio_sq(double p, double nu) { return gamma_ratio_sq<double>(p, nu, 53).value; }

// ---------------------------------------------------------------------------
// Bessel functions

/// K_{n+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_{k=0}^{n} (n+k)! / (k! (n-k)!) (2x)^{-k}.
template <Scalar R>
R bessel_k_half_integer(int n, const R& x, int bits) {
  using sc::exp;
  using sc::sqrt;
  R s = make_real<R>(0.0, bits);
  R coef = make_real<R>(1.0, bits);  // (n+k)!/(k!(n-k)!)
  R pw = make_real<R>(1.0, bits);
  const R inv2x = 1.0 / (x * 2.0);
  for (int k = 0; k <= n; ++k) {
    s += coef * pw;
    coef *= static_cast<double>((n + k + 1) * (n - k));
    coef /= static_cast<double>(k + 1);
    pw *= inv2x;
  }
  return sqrt(pi_of<R>(bits) / (x * 2.0)) * exp(-x) * s;
}

/// K_nu(x) = int_0^inf e^{-x cosh u} cosh(nu u) du, evaluated as
/// e^{-x} int_0^inf e^{-2x sinh^2(u/2)} cosh(nu u) du.
template <Scalar R>
R bessel_k_integral(double nu, const R& x, int bits) {
  using sc::cosh;
  using sc::exp;
  using sc::sinh;
  const int b = bits_of<R>(make_real<R>(0.0, bits));
  quad::QuadOptions o;
  o.rel_tol = std::ldexp(1.0, -(b - 12));
  const R twox = x * 2.0;
  auto f = [&](const R& u) {
    const R sh = sinh(u * 0.5);
    return exp(-twox * sh * sh) * cosh(u * nu);
  };
  const double xd = sc::to_double(x);
  const double len = std::clamp(std::asinh(1.0 / std::sqrt(xd)), 0.05, 1.0);
  auto r = quad::integrate_semi_infinite<R>(f, 0.0, o, bits, {}, len);
  return r.value * exp(-x);
}

template <Scalar R>
R bessel_k(double nu, const R& x, int bits) {
  if (!(sc::to_double(x) > 0.0)) throw DomainError("bessel_k: x must be positive");
  nu = std::fabs(nu);
  const double twice = 2.0 * nu;
  if (twice == std::floor(twice) && static_cast<long>(twice) % 2 == 1 && nu < 200.0) {
    return bessel_k_half_integer<R>(static_cast<int>(nu - 0.5), x, bits);
  }
  return bessel_k_integral<R>(nu, x, bits);
}

BigReal bessel_k(double nu, double x, const PrecisionPolicy& prec);

/// I_nu(x) by its power series.
template <Scalar R>
R bessel_i(double nu, const R& x, int bits) {
  using sc::pow;
  if (sc::to_double(x) < 0.0) throw DomainError("bessel_i: x must be nonnegative");
  if (nu < 0.0) throw DomainError("bessel_i: order must be nonnegative");
  const int b = bits_of<R>(make_real<R>(0.0, bits));
  const R h = x * 0.5;
  if (sc::to_double(x) == 0.0) return make_real<R>(nu == 0.0 ? 1.0 : 0.0, bits);
  const R nu_r = make_real<R>(nu, bits);
  R term = pow(h, nu_r) * rgamma<R>(nu_r + 1.0);
  R s = term;
  const R h2 = h * h;
  const double eps = std::ldexp(1.0, -b);
  const double hd = sc::to_double(h);
  for (int j = 0; j < 100000; ++j) {
    term *= h2 / ((nu_r + (j + 1.0)) * (j + 1.0));
    s += term;
    if (j > hd && std::fabs(sc::to_double(term)) <= eps * std::fabs(sc::to_double(s))) break;
  }
  return s;
}

BigReal bessel_i(double nu, double x, const PrecisionPolicy& prec);

// ---------------------------------------------------------------------------
// Hypergeometric functions

namespace detail {

/// Plain Gauss series, for |z| < 1 or terminating parameters.
template <Scalar R>
R series_2f1(const R& a, const R& b, const R& c, const R& z, int bits, int max_terms = 200000) {
  const int bb = bits_of<R>(make_real<R>(0.0, bits));
  const double eps = std::ldexp(1.0, -bb);
  R term = make_real<R>(1.0, bits);
  R s = term;
  for (int n = 0; n < max_terms; ++n) {
    term *= (a + static_cast<double>(n)) * (b + static_cast<double>(n)) / ((c + static_cast<double>(n)) * (n + 1.0)) * z;
    if (term == 0.0) return s;
    s += term;
    if (std::fabs(sc::to_double(term)) <= eps * std::fabs(sc::to_double(s)) && n > 2) return s;
  }
  throw ConvergenceError("gauss_2f1: series did not converge");
}

/// Connection to w = 1 - z when c - a - b = m is an integer (degenerate case).
template <Scalar R>
R degenerate_2f1(const R& a, const R& b, const R& c, int m, const R& w, int bits) {
  using sc::log;
  using sc::pow;
  const int bb = bits_of<R>(make_real<R>(0.0, bits));
  const double eps = std::ldexp(1.0, -bb);
  const R L = log(w);
  const R one = make_real<R>(1.0, bits);
  auto tail_sum = [&](const R& pa, const R& pb, int mm, R psi_a, R psi_b) {
    // sum_n (pa)_n (pb)_n / (n! (n+mm)!) w^n [L - psi(n+1) - psi(n+mm+1) + psi(pa+n) + psi(pb+n)]
    R psi1 = digamma_of<R>(one);
    R psim = digamma_of<R>(make_real<R>(mm + 1.0, bits));
    R coef = one;
    for (int k = 1; k <= mm; ++k) coef /= static_cast<double>(k);
    R s = make_real<R>(0.0, bits);
    for (int n = 0; n < 200000; ++n) {
      const R term = coef * (L - psi1 - psim + psi_a + psi_b);
      s += term;
      if (n > 2 && std::fabs(sc::to_double(term)) <= eps * std::fabs(sc::to_double(s))) return s;
      coef *= (pa + static_cast<double>(n)) * (pb + static_cast<double>(n)) / ((n + 1.0) * (n + mm + 1.0)) * w;
      psi1 += one / (n + 1.0);
      psim += one / (n + mm + 1.0);
      psi_a += 1.0 / (pa + static_cast<double>(n));
      psi_b += 1.0 / (pb + static_cast<double>(n));
    }
    throw ConvergenceError("gauss_2f1: connection series did not converge");
  };
  if (m >= 0) {
    R finite = make_real<R>(0.0, bits);
    if (m > 0) {
      R t = one;
      for (int n = 0; n < m; ++n) {
        finite += t;
        t *= (a + static_cast<double>(n)) * (b + static_cast<double>(n)) / ((n + 1.0) * (1.0 - m + n)) * w;
      }
      finite *= gamma_of<R>(make_real<R>(m, bits)) * gamma_of<R>(c) * rgamma<R>(a + static_cast<double>(m)) *
                rgamma<R>(b + static_cast<double>(m));
    }
    const R am = a + static_cast<double>(m);
    const R bm = b + static_cast<double>(m);
    const R inf = tail_sum(am, bm, m, digamma_of<R>(am), digamma_of<R>(bm));
    const R pre = pow(w, m) * ((m % 2 == 0) ? 1.0 : -1.0) * gamma_of<R>(c) * rgamma<R>(a) * rgamma<R>(b);
    if (m == 0) return -pre * inf;
    return finite - pre * inf;
  }
  const int k = -m;
  R t = one;
  R finite = make_real<R>(0.0, bits);
  for (int n = 0; n < k; ++n) {
    finite += t;
    t *= (a - static_cast<double>(k - n)) * (b - static_cast<double>(k - n)) / ((n + 1.0) * (1.0 - k + n)) * w;
  }
  finite *= gamma_of<R>(make_real<R>(k, bits)) * gamma_of<R>(c) * rgamma<R>(a) * rgamma<R>(b) * pow(w, -k);
  const R inf = tail_sum(a, b, k, digamma_of<R>(a), digamma_of<R>(b));
  const R pre = ((k % 2 == 0) ? 1.0 : -1.0) * gamma_of<R>(c) * rgamma<R>(a - static_cast<double>(k)) *
                rgamma<R>(b - static_cast<double>(k));
  return finite - pre * inf;
}

/// 2F1 for 0 <= z < 1 with no terminating parameter.
template <Scalar R>
R gauss_2f1_unit(double a, double b, double c, const R& z, int bits) {
  using sc::pow;
  const R A = make_real<R>(a, bits);
  const R B = make_real<R>(b, bits);
  const R C = make_real<R>(c, bits);
  if (sc::to_double(z) <= 0.5) return series_2f1<R>(A, B, C, z, bits);
  const R w = 1.0 - z;
  const R S = C - A - B;
  if (S == sc::floor(S)) return degenerate_2f1<R>(A, B, C, static_cast<int>(std::lround(sc::to_double(S))), w, bits);
  const R gc = gamma_of<R>(C);
  const R t1 = gc * gamma_of<R>(S) * rgamma<R>(C - A) * rgamma<R>(C - B) * series_2f1<R>(A, B, 1.0 - S, w, bits);
  const R t2 = pow(w, S) * gc * gamma_of<R>(-S) * rgamma<R>(A) * rgamma<R>(B) *
               series_2f1<R>(C - A, C - B, S + 1.0, w, bits);
  return t1 + t2;
}

}  // namespace detail

/// Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z < 1.
/// Negative z goes through the Pfaff transformation; z > 1/2 through the
/// connection formulas at 1 - z; terminating cases are finite sums.
template <Scalar R>
R gauss_2f1(double a, double b, double c, const R& z, int bits) {
  using sc::pow;
  const double zd = sc::to_double(z);
  if (!(zd < 1.0)) throw DomainError("gauss_2f1: requires z < 1");
  if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a nonpositive integer");
  if (zd == 0.0) return make_real<R>(1.0, bits);
  const R A = make_real<R>(a, bits);
  const R B = make_real<R>(b, bits);
  const R C = make_real<R>(c, bits);
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return detail::series_2f1<R>(A, B, C, z, bits);
  // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a, c-b; c; z), terminating when c-a or c-b is.
  if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) {
    return pow(1.0 - z, make_real<R>(c - a - b, bits)) *
           detail::series_2f1<R>(make_real<R>(c - a, bits), make_real<R>(c - b, bits), C, z, bits);
  }
  if (zd < 0.0) {
    // Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1)); pick the side that terminates if any.
    const R w = z / (z - 1.0);
    if (is_nonpositive_integer(c - b)) return pow(1.0 - z, -A) * detail::series_2f1<R>(A, C - B, C, w, bits);
    return pow(1.0 - z, -A) * detail::gauss_2f1_unit<R>(a, c - b, c, w, bits);
  }
  return detail::gauss_2f1_unit<R>(a, b, c, z, bits);
}

BigReal gauss_2f1(double a, double b, double c, double z, const PrecisionPolicy& prec);

/// 2F0(-k, k; ; z) = sum_{j=0}^{k} (-k)_j (k)_j / j! z^j, exact integer
/// coefficients.
double bessel_poly_2f0(int k, double z);
BigReal bessel_poly_2f0(int k, const BigReal& z);

template <Scalar R>
R chebyshev_T(int n, const R& x) {
  if (n < 0) throw DomainError("chebyshev_T: negative degree");
  R t0 = x * 0.0 + 1.0;
  if (n == 0) return t0;
  R t1 = x;
  for (int k = 1; k < n; ++k) {
    R t2 = x * t1 * 2.0 - t0;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  return t1;
}

// ---------------------------------------------------------------------------
// Jacobi function

template <Scalar R>
struct JacobiPhiResult {
  R value;
  /// Decimal digits lost to cancellation inside the series.
  double loss_digits = 0.0;
  int terms = 0;
};

/// phi_p(r) = 2F1((nu+1/2-ip)/2, (nu+1/2+ip)/2; nu+1; -sinh^2 r), evaluated as
/// Re[cosh(r)^{-(nu+1/2)} e^{i p ln cosh r} 2F1(A, B; nu+1; tanh^2 r)] with
/// A = (nu+1/2-ip)/2, B = (nu+3/2-ip)/2.
template <Scalar R>
JacobiPhiResult<R> jacobi_phi_series(double nu, const R& p, const R& r, int bits, int max_terms = 400000) {
  using sc::cos;
  using sc::cosh;
  using sc::exp;
  using sc::log;
  using sc::sin;
  using sc::tanh;
  const int b = bits_of<R>(make_real<R>(0.0, bits));
  if (sc::to_double(r) == 0.0) return {make_real<R>(1.0, bits), 0.0, 0};
  const R w = tanh(r) * tanh(r);
  const double wd = sc::to_double(w);
  const double needed = b * std::numbers::ln2 / -std::log(wd);
  if (needed > max_terms) {
    // tanh^2 r_cap = exp(-bits ln2 / max_terms)
    const double wcap = std::exp(-b * std::numbers::ln2 / max_terms);
    throw AccuracyLossError("jacobi_phi: r too large for the series at this precision", std::atanh(std::sqrt(wcap)));
  }
  const double eps = std::ldexp(1.0, -b);
  const R half_p = p * 0.5;
  const R c = make_real<R>(nu, bits) + 1.0;
  const R ar_r = make_real<R>(nu, bits) * 0.5 + 0.25;
  // term = tr + i ti
  R tr = make_real<R>(1.0, bits);
  R ti = make_real<R>(0.0, bits);
  R sr = tr;
  R si = ti;
  double max_abs = 1.0;
  int n = 0;
  for (; n < max_terms; ++n) {
    // multiply by (A+n)(B+n) w / ((c+n)(n+1)), A+n = (ar+n) - i p/2, B+n = (br+n) - i p/2
    const R a_re = ar_r + static_cast<double>(n);
    const R b_re = a_re + 0.5;
    const R pr = a_re * b_re - half_p * half_p;
    const R pim = -(a_re + b_re) * half_p;
    const R scale = w / ((c + static_cast<double>(n)) * (n + 1.0));
    const R nr = (tr * pr - ti * pim) * scale;
    const R ni = (tr * pim + ti * pr) * scale;
    tr = nr;
    ti = ni;
    sr += tr;
    si += ti;
    const double mag = std::fabs(sc::to_double(tr)) + std::fabs(sc::to_double(ti));
    max_abs = std::max(max_abs, mag);
    const double smag = std::fabs(sc::to_double(sr)) + std::fabs(sc::to_double(si));
    if (n > sc::to_double(half_p) && mag <= eps * smag * 0.01) break;
  }
  if (n >= max_terms) throw AccuracyLossError("jacobi_phi: series did not converge", 0.0);
  const R lc = log(cosh(r));
  const R amp = exp(lc * -(nu + 0.5));
  const R ph = p * lc;
  const R val = amp * (cos(ph) * sr - sin(ph) * si);
  const double smag = std::fabs(sc::to_double(sr)) + std::fabs(sc::to_double(si));
  const double vd = std::fabs(sc::to_double(val / amp));
  const double loss = std::log10(std::max(max_abs, smag) / std::max(vd, 1e-300));
  return {val, std::max(loss, 0.0), n + 1};
}

/// Jacobi function at the policy's target accuracy; the working precision
/// is raised until the series' cancellation fits.
BigReal jacobi_phi(double nu, double p, double r, const PrecisionPolicy& prec);

/// Same in double when the cancellation allows it, else escalated.
double jacobi_phi_double(double nu, double p, double r, double rel_tol = 1e-12);

}  // namespace hypheat::specfun
