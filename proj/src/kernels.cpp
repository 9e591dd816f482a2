#include "hypheat/kernels.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "hypheat/specfun.hpp"
#include "hypheat/symop.hpp"

namespace hypheat::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::string s = std::to_string(v);
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

/// Kernel value from a BigReal of arbitrary precision, carrying at least 64 bits.
KernelValue make_value(BigReal v, Rep rep, double err, int bits) {
  KernelValue kv;
  kv.value = std::move(v);
  kv.rep = rep;
  kv.err_est = err;
  kv.precision_bits = bits;
  return kv;
}

int value_bits(const PrecisionPolicy& prec) { return std::max(prec.working_bits(), 64); }

// ---------------------------------------------------------------------------
// Term sums evaluated inside quadratures

/// G(x) at fixed t in scalar R. In double, cancellation beyond what the
/// tolerance allows is redone in extended precision.
template <Scalar R>
struct TermFn {
  symop::TermEvaluator ev;
  R t;
  int bits;
  double tol;

  R operator()(const R& x) const {
    if constexpr (std::same_as<R, double>) {
      double loss = 0.0;
      const double v = ev.eval<double>(x, t, 53, &loss);
      if (15.5 - loss >= -std::log10(tol) + 1.0 && std::isfinite(v)) return v;
      return ev.eval_auto(x, t, tol * 1e-3).to_double();
    } else {
      double loss = 0.0;
      BigReal v = ev.eval<BigReal>(x, t, bits, &loss);
      const double spare = PrecisionPolicy::bits_to_digits(bits) + std::log10(tol) - 2.0;
      if (loss <= spare) return v;
      const int nb = bits + PrecisionPolicy::digits_to_bits(loss - spare + 2.0);
      return BigReal(ev.eval<BigReal>(BigReal(x, nb), BigReal(t, nb), nb), bits);
    }
  }
};

/// int_0^inf u^{-1/2} W(theta(u), u) du with cosh theta(u) = cosh r + u.
/// theta is formed from sinh^2(theta/2) = sinh^2(r/2) + u/2, which keeps full
/// relative accuracy near the diagonal.
template <Scalar R, class W>
quad::QuadResultT<R> radial_sqrt_integral(double t, double r, const W& weight, double tol, int bits) {
  const R shr = sc::sinh(make_real<R>(r, bits) * 0.5);
  const R shr2 = shr * shr;
  auto g = [&](const R& u) {
    const R s2 = shr2 + u * 0.5;
    const R theta = sc::asinh(sc::sqrt(s2)) * 2.0;
    return weight(theta, u, s2);
  };
  quad::QuadOptions o;
  o.rel_tol = tol;
  o.gauss_points = 10;
  o.max_intervals = 20000;
  // u-scale over which the Gaussian factor changes appreciably.
  const double dtheta = r > 0.0 ? std::min(std::sqrt(t), t / r) : std::sqrt(t);
  const double uscale = std::max(1e-6, std::max(std::sinh(r), r + dtheta) * dtheta);
  return quad::integrate_sqrt_singular<R>(g, o, bits, {}, std::sqrt(uscale));
}

template <Scalar R>
quad::QuadResultT<R> term_sqrt_integral(const symop::TermSum& ts, double t, double r, double tol, int bits,
                                        bool matsumoto = false, int maass_k = 0) {
  TermFn<R> G{symop::TermEvaluator(ts), make_real<R>(t, bits), bits, tol};
  const double chr = std::cosh(r);
  const R chr2 = sc::cosh(make_real<R>(r, bits) * 0.5);
  auto weight = [&](const R& theta, const R& u, const R& sh2) {
    R v = G(theta);
    if (matsumoto) v /= sc::sqrt(u + 2.0 * chr);
    if (maass_k > 0) {
      const R x = sc::sqrt(sh2 + 1.0) / chr2;
      v *= specfun::chebyshev_T<R>(2 * maass_k, x);
    }
    return v;
  };
  return radial_sqrt_integral<R>(t, r, weight, tol, bits);
}

/// Runs a sqrt-singular integral in double or BigReal per the policy.
KernelValue sqrt_integral_value(const symop::TermSum& ts, double t, double r, const PrecisionPolicy& prec,
                                const BigReal& prefactor, Rep rep, bool matsumoto = false, int maass_k = 0) {
  const double tol = prec.target_rel_tol;
  const int bits = prec.working_bits();
  quad::QuadResult res;
  if (bits <= 53) {
    res = quad::to_big(term_sqrt_integral<double>(ts, t, r, tol, 53, matsumoto, maass_k));
  } else {
    res = term_sqrt_integral<BigReal>(ts, t, r, tol, bits, matsumoto, maass_k);
  }
  if (!res.converged) throw ConvergenceError(to_string(rep) + ": radial quadrature did not converge");
  const int b = std::max(bits, 64);
  KernelValue kv = make_value(BigReal(prefactor, b) * BigReal(res.value, b), rep,
                              std::fabs(prefactor.to_double()) * res.err_est, bits);
  kv.diagnostics.push_back(res);
  return kv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Names

std::string to_string(Space s) {
  switch (s) {
    case Space::real_hyperbolic: return "real";
    case Space::gruet_real: return "gruet";
    case Space::jacobi: return "jacobi";
    case Space::damek_ricci: return "damek-ricci";
    case Space::maass: return "maass";
    case Space::complex_hyperbolic: return "complex";
  }
  return "?";
}

std::string to_string(Rep r) {
  switch (r) {
    case Rep::millson: return "millson";
    case Rep::gruet: return "gruet";
    case Rep::spectral: return "spectral";
    case Rep::parity: return "parity";
    case Rep::hw: return "hw";
    case Rep::single: return "single";
    case Rep::theta: return "theta";
    case Rep::hw_2f0: return "hw2f0";
    case Rep::matsumoto: return "matsumoto";
  }
  return "?";
}

std::optional<Space> parse_space(const std::string& s) {
  for (Space v : {Space::real_hyperbolic, Space::gruet_real, Space::jacobi, Space::damek_ricci, Space::maass,
                  Space::complex_hyperbolic}) {
    if (to_string(v) == s) return v;
  }
  if (s == "dr" || s == "damek_ricci") return Space::damek_ricci;
  return std::nullopt;
}

std::optional<Rep> parse_rep(const std::string& s) {
  for (Rep v : {Rep::millson, Rep::gruet, Rep::spectral, Rep::parity, Rep::hw, Rep::single, Rep::theta,
                Rep::hw_2f0, Rep::matsumoto}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::vector<Rep> representations(Space s) {
  switch (s) {
    case Space::real_hyperbolic: return {Rep::millson, Rep::gruet};
    case Space::gruet_real: return {Rep::gruet};
    case Space::jacobi: return {Rep::spectral, Rep::gruet};
    case Space::damek_ricci: return {Rep::parity, Rep::hw, Rep::single};
    case Space::maass: return {Rep::theta, Rep::hw_2f0};
    case Space::complex_hyperbolic: return {Rep::matsumoto};
  }
  return {};
}

void KernelQuery::validate() const {
  require(t > 0.0 && std::isfinite(t), "t must be positive");
  const auto reps = representations(space);
  require(std::find(reps.begin(), reps.end(), rep) != reps.end(),
          "representation " + to_string(rep) + " is not available for space " + to_string(space));
  switch (space) {
    case Space::real_hyperbolic:
      require(n >= 2.0 && n == std::floor(n), "real hyperbolic dimension must be an integer >= 2");
      break;
    case Space::gruet_real:
      require(n > 1.0, "dimension must exceed 1");
      break;
    case Space::jacobi:
      require(nu > -0.5, "nu must exceed -1/2");
      break;
    case Space::damek_ricci:
      require(k >= 0 && m >= 0 && m % 2 == 0 && k + m >= 1, "Damek-Ricci needs k >= 0, m even >= 0, k + m >= 1");
      break;
    case Space::maass:
      require(k >= 0, "Maass parameter k must be >= 0");
      require(y > 0.0, "Maass point needs y > 0");
      break;
    case Space::complex_hyperbolic:
      require(n >= 1.0 && n == std::floor(n), "complex dimension must be an integer >= 1");
      break;
  }
  if (space != Space::maass) require(r >= 0.0 && std::isfinite(r), "r must be nonnegative");
}

KernelValue evaluate(const KernelQuery& q) {
  q.validate();
  switch (q.space) {
    case Space::real_hyperbolic: {
      const int n = static_cast<int>(q.n);
      if (q.rep == Rep::gruet) return gruet(q.n, q.t, q.r, q.prec);
      if (n % 2 == 1) return real_hyperbolic_odd((n - 1) / 2, q.t, q.r, q.prec);
      return real_hyperbolic_even((n - 2) / 2, q.t, q.r, q.prec);
    }
    case Space::gruet_real:
      return gruet(q.n, q.t, q.r, q.prec);
    case Space::jacobi:
      if (q.rep == Rep::gruet) return gruet(2.0 * q.nu + 2.0, q.t, q.r, q.prec);
      return jacobi_spectral(q.nu, q.t, q.r, q.prec, q.gamma);
    case Space::damek_ricci:
      if (q.rep == Rep::parity) return damek_ricci_parity(q.k, q.m, q.t, q.r, q.prec);
      if (q.rep == Rep::hw) return damek_ricci_hw(q.k, q.m, q.t, q.r, q.prec);
      return damek_ricci_single(q.k, q.m, q.t, q.r, q.prec);
    case Space::maass:
      if (q.rep == Rep::theta) return maass_theta(q.k, q.t, q.w, q.y, q.prec);
      return maass_hw(q.k, q.t, q.w, q.y, q.prec);
    case Space::complex_hyperbolic:
      return complex_hyperbolic_matsumoto(static_cast<int>(q.n), q.t, q.r, q.prec);
  }
  throw DomainError("unknown space");
}

double radial_weight(const KernelQuery& q, double r) {
  switch (q.space) {
    case Space::real_hyperbolic:
    case Space::gruet_real: {
      const double omega = 2.0 * std::pow(kPi, q.n / 2.0) / std::tgamma(q.n / 2.0);
      return omega * std::pow(std::sinh(r), q.n - 1.0);
    }
    case Space::jacobi:
      return 2.0 * std::pow(kPi, q.nu + 1.0) * std::pow(std::sinh(r), 2.0 * q.nu + 1.0) / std::tgamma(q.nu + 1.0);
    case Space::damek_ricci:
      return std::pow(std::sinh(r / 2.0), q.m + q.k) * std::pow(std::cosh(r / 2.0), q.k);
    case Space::complex_hyperbolic: {
      const double n = q.n;
      return std::pow(std::sinh(r), 2.0 * n - 1.0) * std::cosh(r);
    }
    case Space::maass:
      return std::sinh(r);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Real hyperbolic

KernelValue real_hyperbolic_odd(int m, double t, double r, const PrecisionPolicy& prec) {
  require(m >= 0, "real_hyperbolic_odd: m must be >= 0");
  require(t > 0.0, "real_hyperbolic_odd: t must be positive");
  require(r >= 0.0, "real_hyperbolic_odd: r must be >= 0");
  const auto ts = symop::apply_d_full(symop::seed_gaussian(), m);
  const BigReal g = symop::eval_termsum_limit(ts, r, t, prec);
  const int b = std::max(g.precision(), value_bits(prec));
  const BigReal pi = const_pi(b);
  const BigReal pre = exp(BigReal(-0.5 * m * m, b) * t) / (pow(pi * 2.0, m) * sqrt(pi * (2.0 * t)));
  return make_value(pre * BigReal(g, b), Rep::millson, std::fabs((pre * g).to_double()) * prec.target_rel_tol,
                    g.precision());
}

namespace {

BigReal even_prefactor(int m, double t, int b) {
  const BigReal pi = const_pi(b);
  const double e = (2.0 * m + 1.0) * (2.0 * m + 1.0) / 8.0;
  const BigReal two_pi_t = pi * (2.0 * t);
  return sqrt(BigReal(2.0, b)) * exp(BigReal(-e * t, b)) / (two_pi_t * sqrt(two_pi_t) * pow(pi * 2.0, m));
}

KernelValue even_family(int m, double t, double r, const PrecisionPolicy& prec, int maass_k, Rep rep) {
  const auto ts = symop::apply_d_full(symop::seed_even_dim(), m);
  return sqrt_integral_value(ts, t, r, prec, even_prefactor(m, t, value_bits(prec)), rep, false, maass_k);
}

}  // namespace

KernelValue real_hyperbolic_even(int m, double t, double r, const PrecisionPolicy& prec) {
  require(m >= 0, "real_hyperbolic_even: m must be >= 0");
  require(t > 0.0, "real_hyperbolic_even: t must be positive");
  require(r >= 0.0, "real_hyperbolic_even: r must be >= 0");
  return even_family(m, t, r, prec, 0, Rep::millson);
}

KernelValue real_hyperbolic_even_direct(double t, double r, const PrecisionPolicy& prec) {
  require(t > 0.0 && r >= 0.0, "real_hyperbolic_even_direct: bad arguments");
  // theta = r + s^2: int_0^inf 2 s theta e^{-theta^2/2t} (cosh theta - cosh r)^{-1/2} ds.
  const double chr = std::cosh(r);
  const double shr = std::sinh(r);
  auto f = [&](double s) {
    const double h = s * s;
    const double theta = r + h;
    // cosh(r + h) - cosh r = sinh r sinh h + cosh r (cosh h - 1)
    const double diff = shr * std::sinh(h) + chr * 2.0 * std::pow(std::sinh(h / 2.0), 2);
    return 2.0 * s * theta * std::exp(-theta * theta / (2.0 * t)) / std::sqrt(diff);
  };
  quad::QuadOptions o;
  o.rel_tol = prec.target_rel_tol;
  o.max_intervals = 20000;
  auto res = quad::integrate_semi_infinite<double>(f, 0.0, o, 53, {}, 0.5);
  const BigReal pre = even_prefactor(0, t, 64);
  KernelValue kv = make_value(pre * res.value, Rep::millson, pre.to_double() * res.err_est, 53);
  kv.diagnostics.push_back(quad::to_big(res));
  return kv;
}

KernelValue gruet(double n, double t, double r, const PrecisionPolicy& prec) {
  require(n > 1.0, "gruet: n must exceed 1");
  require(t > 0.0, "gruet: t must be positive");
  require(r >= 0.0, "gruet: r must be >= 0");
  require(t >= prec.t_min, "gruet: t = " + fmt(t) + " is below t_min = " + fmt(prec.t_min));
  const double expo = -(n + 1.0) / 2.0;
  auto phi = [r, expo](const BigReal& /*rho*/, const BigReal& ch) {
    return pow(ch + cosh(BigReal(r, ch.precision())), expo);
  };
  const double chr = std::cosh(r);
  auto env = [chr, expo](double rho) { return std::pow(std::cosh(rho) + chr, expo); };
  const quad::QuadResult res = quad::gruet_oscillatory(t, phi, prec, {}, env);
  const int b = res.precision_bits;
  const BigReal pi = const_pi(b);
  const BigReal pre = exp(BigReal(-(n - 1.0) * (n - 1.0) / 8.0, b) * t) * tgamma(BigReal((n + 1.0) / 2.0, b)) /
                      (pi * pow(pi * 2.0, n / 2.0) * sqrt(BigReal(t, b)));
  KernelValue kv = make_value(pre * res.value, Rep::gruet, std::fabs(pre.to_double()) * res.err_est, b);
  kv.cancellation_digits = res.cancellation_digits;
  kv.diagnostics.push_back(res);
  return kv;
}

// ---------------------------------------------------------------------------
// Jacobi

KernelValue jacobi_spectral(double nu, double t, double r, const PrecisionPolicy& prec, double gamma) {
  require(nu > -0.5, "jacobi_spectral: nu must exceed -1/2");
  require(t > 0.0 && r >= 0.0, "jacobi_spectral: bad arguments");
  const double tol = prec.target_rel_tol;
  auto f = [&](double p) {
    if (p == 0.0) return 0.0;
    const double w = specfun::gamma_ratio_sq(p, nu);
    const double phi = r == 0.0 ? 1.0 : specfun::jacobi_phi_double(nu, p, r, tol * 0.1);
    return std::exp(-p * p * t / 2.0) * phi * w;
  };
  // Gaussian cutoff: the weight grows like p^{2 nu + 1} and |phi| <= 1.
  const double L = -std::log(tol) + 8.0;
  double P = std::sqrt(2.0 * L / t);
  for (int i = 0; i < 8; ++i) P = std::sqrt(2.0 * (L + (2.0 * nu + 1.0) * std::log(1.0 + P)) / t);
  quad::QuadOptions o;
  o.rel_tol = tol;
  o.max_intervals = 20000;
  auto res = quad::integrate_adaptive<double>(f, 0.0, P, o, 53);
  if (!res.converged) throw ConvergenceError("jacobi_spectral: quadrature did not converge");
  const int b = 64;
  const BigReal pi = const_pi(b);
  const BigReal pre = exp(BigReal(-(2.0 * nu + 1.0) * (2.0 * nu + 1.0) * gamma * t, b)) /
                      (pow(pi, nu + 1.0) * pow(BigReal(2.0, b), 2.0 * nu + 1.0) * tgamma(BigReal(nu + 1.0, b)));
  KernelValue kv = make_value(pre * res.value, Rep::spectral, pre.to_double() * res.err_est, 53);
  kv.diagnostics.push_back(quad::to_big(res));
  return kv;
}

// ---------------------------------------------------------------------------
// Damek-Ricci

namespace {

void check_dr(int k, int m, double t, double r, const char* who) {
  require(k >= 0 && m >= 0 && m % 2 == 0 && k + m >= 1, std::string(who) + ": needs k >= 0, m even, k + m >= 1");
  require(t > 0.0 && r >= 0.0, std::string(who) + ": bad t or r");
}

/// Prefactor of the HW representation without the cosh(r/2) power.
BigReal dr_hw_prefactor(int k, int m, double t, int b) {
  const double Q = k + m / 2.0;
  const double M = m + k + 1.0;
  const BigReal pi = const_pi(b);
  return exp(BigReal(-Q * Q / 8.0, b) * t) / (pow(BigReal(2.0, b), 1.5 * (m + k) + 1.0) * pow(pi, M / 2.0));
}

template <class F>
quad::QuadResultT<double> outer_integral(const F& f, double start, double tol) {
  quad::QuadOptions o;
  o.rel_tol = tol;
  return quad::integrate_zero_to_inf<double>(f, start, o, 53);
}

}  // namespace

KernelValue damek_ricci_parity(int k, int m, double t, double r, const PrecisionPolicy& prec) {
  check_dr(k, m, t, r, "damek_ricci_parity");
  const double Q = k + m / 2.0;
  const double M = m + k + 1.0;
  const int b = value_bits(prec);
  const BigReal pi = const_pi(b);
  const BigReal base = exp(BigReal(-Q * Q / 8.0, b) * t) /
                       (pow(BigReal(2.0, b), m + 1.0 + k / 2.0) * sqrt(BigReal(t, b)));
  const auto half = symop::apply_d_half(symop::seed_gaussian(), m / 2);
  if (k % 2 == 0) {
    const auto ts = symop::apply_d_full(half, k / 2);
    const BigReal g = symop::eval_termsum_limit(ts, r, t, prec);
    const int bb = std::max(b, g.precision());
    const BigReal pre = BigReal(base, bb) / pow(const_pi(bb), M / 2.0);
    return make_value(pre * BigReal(g, bb), Rep::parity, std::fabs((pre * g).to_double()) * prec.target_rel_tol,
                      g.precision());
  }
  const auto ts = symop::apply_d_full(half, (k + 1) / 2);
  return sqrt_integral_value(ts, t, r, prec, base / pow(pi, (M + 1.0) / 2.0), Rep::parity);
}

KernelValue damek_ricci_hw(int k, int m, double t, double r, const PrecisionPolicy& prec) {
  check_dr(k, m, t, r, "damek_ricci_hw");
  const double tau = t / 4.0;
  require(tau >= prec.t_min, "damek_ricci_hw: t/4 = " + fmt(tau) + " is below t_min = " + fmt(prec.t_min));
  auto ev = hw::shared_evaluator(tau, prec.is_fixed() ? prec : prec.with_tol(std::min(prec.target_rel_tol, 1e-12)));
  const double beta = std::cosh(r / 2.0);
  const double nu = (k - 1) / 2.0;
  const double pw = (m + k - 1) / 2.0;
  const double tol = std::max(prec.target_rel_tol, 1e-13);
  auto f = [&](double y) {
    return std::pow(y, pw) * ev->density_double(y) * specfun::bessel_k<double>(nu, y * beta, 53);
  };
  auto res = outer_integral(f, 1.0, tol);
  if (!res.converged) throw ConvergenceError("damek_ricci_hw: outer quadrature did not converge");
  const int b = 64;
  const BigReal pre = dr_hw_prefactor(k, m, t, b) / pow(BigReal(beta, b), nu);
  KernelValue kv = make_value(pre * res.value, Rep::hw, pre.to_double() * res.err_est, 53);
  kv.diagnostics.push_back(quad::to_big(res));
  return kv;
}

KernelValue damek_ricci_single(int k, int m, double t, double r, const PrecisionPolicy& prec) {
  check_dr(k, m, t, r, "damek_ricci_single");
  const double tau = t / 4.0;
  require(tau >= prec.t_min, "damek_ricci_single: t/4 = " + fmt(tau) + " is below t_min = " + fmt(prec.t_min));
  // Inner y-integral in closed form:
  // int_0^inf y^{mu-1} e^{-alpha y} K_nu(beta y) dy
  //   = sqrt(pi) (2 beta)^nu G(mu+nu) G(mu-nu) / ((alpha+beta)^{mu+nu} G(mu+1/2))
  //     * 2F1(mu+nu, nu+1/2; mu+1/2; (alpha-beta)/(alpha+beta)).
  const double mu = (m + k + 3) / 2.0;
  const double nu = (k - 1) / 2.0;
  const double a = mu + nu;
  const double bpar = nu + 0.5;
  const double c = mu + 0.5;
  std::map<int, std::pair<BigReal, BigReal>> consts;  // bits -> (constant, beta)
  auto constants = [&](int bits) -> const std::pair<BigReal, BigReal>& {
    auto it = consts.find(bits);
    if (it != consts.end()) return it->second;
    const BigReal beta = cosh(BigReal(r, bits) * 0.5);
    const BigReal C = sqrt(const_pi(bits)) * pow(beta * 2.0, nu) * tgamma(BigReal(mu + nu, bits)) *
                      tgamma(BigReal(mu - nu, bits)) / tgamma(BigReal(mu + 0.5, bits));
    return consts.emplace(bits, std::make_pair(C, beta)).first->second;
  };
  auto phi = [&](const BigReal& /*rho*/, const BigReal& alpha) {
    const int bits = alpha.precision();
    const auto& [C, beta] = constants(bits);
    const BigReal s = alpha + beta;
    const BigReal z = (alpha - beta) / s;
    return C * specfun::gauss_2f1<BigReal>(a, bpar, c, z, bits) / pow(s, a);
  };
  const double beta_d = std::cosh(r / 2.0);
  const double phi1 = phi(BigReal(0.0, 64), BigReal(1.0, 64)).to_double();
  const double decay = mu - std::fabs(nu) - 0.5;
  auto env = [=](double rho) { return phi1 * std::pow((1.0 + beta_d) / (std::cosh(rho) + beta_d), decay); };
  const quad::QuadResult res = quad::gruet_oscillatory(tau, phi, prec, {}, env);
  const int b = res.precision_bits;
  const BigReal pi = const_pi(b);
  const BigReal pre = dr_hw_prefactor(k, m, t, b) / pow(BigReal(beta_d, b), nu) / (pi * sqrt(pi * (2.0 * tau)));
  KernelValue kv = make_value(pre * res.value, Rep::single, std::fabs(pre.to_double()) * res.err_est, b);
  kv.cancellation_digits = res.cancellation_digits;
  kv.diagnostics.push_back(res);
  return kv;
}

// ---------------------------------------------------------------------------
// Complex hyperbolic

KernelValue complex_hyperbolic_matsumoto(int n, double t, double r, const PrecisionPolicy& prec) {
  require(n >= 1, "complex_hyperbolic_matsumoto: n must be >= 1");
  require(t > 0.0 && r >= 0.0, "complex_hyperbolic_matsumoto: bad t or r");
  const int b = value_bits(prec);
  const BigReal pi = const_pi(b);
  const BigReal pre = exp(BigReal(-0.5 * n * n, b) * t) * 2.0 / (sqrt(pi * (2.0 * t)) * pow(pi * 2.0, n));
  const auto ts = symop::apply_d_full(symop::seed_gaussian(), n);
  return sqrt_integral_value(ts, t, r, prec, pre, Rep::matsumoto, true);
}

// ---------------------------------------------------------------------------
// Maass

double hyperbolic_distance_h2(double w, double y) {
  require(y > 0.0, "hyperbolic_distance_h2: y must be positive");
  // cosh r - 1 = (w^2 + (y-1)^2) / (2y) = 2 sinh^2(r/2)
  const double q = (w * w + (y - 1.0) * (y - 1.0)) / (4.0 * y);
  return 2.0 * std::asinh(std::sqrt(q));
}

std::complex<double> maass_phase(int k, double w, double y) {
  const std::complex<double> num(w, y + 1.0);
  const std::complex<double> den(-w, y + 1.0);
  std::complex<double> z = num / den;
  z /= std::abs(z);
  std::complex<double> out(1.0, 0.0);
  for (int i = 0; i < k; ++i) out *= z;
  return out / std::abs(out);
}

KernelValue maass_theta(int k, double t, double w, double y, const PrecisionPolicy& prec) {
  require(k >= 0, "maass_theta: k must be >= 0");
  require(t > 0.0 && y > 0.0, "maass_theta: bad t or y");
  const double r = hyperbolic_distance_h2(w, y);
  KernelValue kv = even_family(0, t, r, prec, k, Rep::theta);
  if (k > 0) {
    const int b = std::max(kv.value.precision(), 64);
    const BigReal factor = exp(BigReal(-0.5 * k * k, b) * t);
    kv.value = kv.value * factor;
    kv.err_est *= factor.to_double();
  }
  kv.phase = maass_phase(k, w, y);
  return kv;
}

KernelValue maass_hw(int k, double t, double w, double y, const PrecisionPolicy& prec) {
  require(k >= 0, "maass_hw: k must be >= 0");
  require(t > 0.0 && y > 0.0, "maass_hw: bad t or y");
  require(t >= prec.t_min, "maass_hw: t = " + fmt(t) + " is below t_min = " + fmt(prec.t_min));
  const double r = hyperbolic_distance_h2(w, y);
  const double chr = std::cosh(r);
  auto ev = hw::shared_evaluator(t, prec.is_fixed() ? prec : prec.with_tol(std::min(prec.target_rel_tol, 1e-12)));
  auto f = [&](double z) {
    const double poly = specfun::bessel_poly_2f0(k, -1.0 / (z * (1.0 + chr)));
    return ev->density_double(z) * std::exp(-z * chr) * poly / std::sqrt(z);
  };
  const double tol = std::max(prec.target_rel_tol, 1e-13);
  auto res = outer_integral(f, 1.0, tol);
  if (!res.converged) throw ConvergenceError("maass_hw: outer quadrature did not converge");
  const int b = 64;
  const BigReal pre = exp(BigReal(-t / 8.0 - 0.5 * k * k * t, b)) / sqrt(const_pi(b) * 2.0);
  KernelValue kv = make_value(pre * res.value, Rep::hw_2f0, pre.to_double() * res.err_est, 53);
  if (kv.value.sign() < 0) throw CancellationError("maass_hw: negative modulus", 113);
  kv.phase = maass_phase(k, w, y);
  kv.diagnostics.push_back(quad::to_big(res));
  return kv;
}

}  // namespace hypheat::kernels
