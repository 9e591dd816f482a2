#include "hypheat/specfun.hpp"

#include <gmpxx.h>

#include <mutex>

namespace hypheat::specfun {

namespace {

const mpq_class& bernoulli_exact(int n) {
  static std::mutex mu;
  static std::vector<mpq_class> table;
  std::lock_guard<std::mutex> lk(mu);
  if (n < static_cast<int>(table.size())) return table[n];
  // Akiyama-Tanigawa gives B_n with B_1 = +1/2; recompute the table up to n.
  const int top = std::max(n, 2 * static_cast<int>(table.size()) + 8);
  std::vector<mpq_class> a(top + 1);
  std::vector<mpq_class> out(top + 1);
  for (int m = 0; m <= top; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (int j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
    out[m] = a[0];
  }
  out[1] = mpq_class(-1, 2);
  table = std::move(out);
  return table[n];
}

const std::vector<mpz_class>& bessel_poly_coefficients(int k) {
  static std::mutex mu;
  static std::vector<std::vector<mpz_class>> cache;
  std::lock_guard<std::mutex> lk(mu);
  if (k >= static_cast<int>(cache.size())) cache.resize(k + 1);
  auto& c = cache[k];
  if (c.empty()) {
    // c_j = (-k)_j (k)_j / j!
    mpq_class t = 1;
    for (int j = 0; j <= k; ++j) {
      c.push_back(t.get_num());
      t *= mpq_class((j - k) * (k + j), j + 1);
      t.canonicalize();
    }
  }
  return c;
}

int policy_bits(const PrecisionPolicy& prec) { return std::max(prec.working_bits(), 64); }

}  // namespace

double bernoulli_double(int n) { return bernoulli_exact(n).get_d(); }

BigReal bernoulli_big(int n, int bits) {
  BigReal r(0.0, bits);
  mpfr_set_q(r.raw(), bernoulli_exact(n).get_mpq_t(), MPFR_RNDN);
  return r;
}

BigReal gamma(double x, const PrecisionPolicy& prec) {
  if (!(x > 0.0)) throw DomainError("gamma: x must be positive");
  return tgamma(BigReal(x, policy_bits(prec)));
}

BigReal bessel_k(double nu, double x, const PrecisionPolicy& prec) {
  const int bits = policy_bits(prec);
  return bessel_k<BigReal>(nu, BigReal(x, bits), bits);
}

BigReal bessel_i(double nu, double x, const PrecisionPolicy& prec) {
  const int bits = policy_bits(prec);
  return bessel_i<BigReal>(nu, BigReal(x, bits), bits);
}

BigReal gauss_2f1(double a, double b, double c, double z, const PrecisionPolicy& prec) {
  const int bits = policy_bits(prec);
  return gauss_2f1<BigReal>(a, b, c, BigReal(z, bits), bits);
}

double bessel_poly_2f0(int k, double z) {
  if (k < 0) throw DomainError("bessel_poly_2f0: k must be nonnegative");
  const auto& c = bessel_poly_coefficients(k);
  double s = 0.0;
  for (int j = k; j >= 0; --j) s = s * z + c[j].get_d();
  return s;
}

BigReal bessel_poly_2f0(int k, const BigReal& z) {
  if (k < 0) throw DomainError("bessel_poly_2f0: k must be nonnegative");
  const auto& c = bessel_poly_coefficients(k);
  BigReal s(0.0, z.precision());
  BigReal cj(0.0, z.precision());
  for (int j = k; j >= 0; --j) {
    mpfr_set_z(cj.raw(), c[j].get_mpz_t(), MPFR_RNDN);
    s = s * z + cj;
  }
  return s;
}

BigReal jacobi_phi(double nu, double p, double r, const PrecisionPolicy& prec) {
  if (!(nu > -0.5)) throw DomainError("jacobi_phi: nu must exceed -1/2");
  if (r < 0.0) throw DomainError("jacobi_phi: r must be nonnegative");
  const int target = prec.target_digits();
  int bits = PrecisionPolicy::digits_to_bits(target + 8);
  while (true) {
    auto res = jacobi_phi_series<BigReal>(nu, BigReal(p, bits), BigReal(r, bits), bits);
    const double have = PrecisionPolicy::bits_to_digits(bits) - res.loss_digits;
    if (have >= target + 2) return res.value;
    const int need = PrecisionPolicy::digits_to_bits(target + 4 + res.loss_digits);
    if (prec.is_fixed() || need > prec.max_bits) {
      throw PrecisionError("jacobi_phi: cancellation exceeds the available precision", need);
    }
    bits = std::max(need, bits + 32);
  }
}

double jacobi_phi_double(double nu, double p, double r, double rel_tol) {
  const double target = -std::log10(rel_tol);
  auto res = jacobi_phi_series<double>(nu, p, r, 53);
  if (15.0 - res.loss_digits >= target) return res.value;
  return jacobi_phi(nu, p, r, PrecisionPolicy::automatic(rel_tol)).to_double();
}

}  // namespace hypheat::specfun
