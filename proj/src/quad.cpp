#include "hypheat/quad.hpp"

#include <gmpxx.h>

#include <map>
#include <numbers>

namespace hypheat::quad {

namespace {

using Poly = std::vector<mpq_class>;  // coefficients by ascending power

Poly legendre_coefficients(int n) {
  Poly p0{1};
  if (n == 0) return p0;
  Poly p1{0, 1};
  for (int k = 1; k < n; ++k) {
    // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
    Poly next(k + 2, 0);
    for (int i = 0; i <= k; ++i) next[i + 1] += mpq_class(2 * k + 1) * p1[i];
    for (int i = 0; i < static_cast<int>(p0.size()); ++i) next[i] -= mpq_class(k) * p0[i];
    for (auto& c : next) c /= (k + 1);
    p0 = std::move(p1);
    p1 = std::move(next);
  }
  return p1;
}

/// int_{-1}^{1} P(x) x^e dx
mpq_class moment(const Poly& p, int e) {
  mpq_class s = 0;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (((i + e) & 1) == 0 && p[i] != 0) s += p[i] * mpq_class(2, i + e + 1);
  }
  return s;
}

/// Monic Stieltjes polynomial E_{n+1}: orthogonal to x^k P_n(x), k = 0..n.
Poly stieltjes_coefficients(int n) {
  const Poly pn = legendre_coefficients(n);
  const int deg = n + 1;
  const int unknowns = (n + 1) / 2;
  std::vector<int> ks;
  for (int k = 1; k <= n; k += 2) ks.push_back(k);
  // Rows: conditions k; columns: coefficient of x^{deg-2j}, j = 1..unknowns.
  std::vector<std::vector<mpq_class>> a(unknowns, std::vector<mpq_class>(unknowns + 1));
  for (int r = 0; r < unknowns; ++r) {
    for (int j = 1; j <= unknowns; ++j) a[r][j - 1] = moment(pn, deg - 2 * j + ks[r]);
    a[r][unknowns] = -moment(pn, deg + ks[r]);
  }
  for (int col = 0; col < unknowns; ++col) {
    int piv = col;
    while (piv < unknowns && a[piv][col] == 0) ++piv;
    if (piv == unknowns) throw std::logic_error("stieltjes: singular system");
    std::swap(a[col], a[piv]);
    for (int r = 0; r < unknowns; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class f = a[r][col] / a[col][col];
      for (int c = col; c <= unknowns; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Poly e(deg + 1, 0);
  e[deg] = 1;
  for (int j = 1; j <= unknowns; ++j) e[deg - 2 * j] = a[j - 1][unknowns] / a[j - 1][j - 1];
  return e;
}

BigReal from_mpq(const mpq_class& q, int bits) {
  BigReal r(0.0, bits);
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

struct PolyEval {
  BigReal value;
  BigReal deriv;
};

PolyEval eval_poly(const std::vector<BigReal>& c, const BigReal& x) {
  BigReal v(0.0, x.precision());
  BigReal d(0.0, x.precision());
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    d = d * x + v;
    v = v * x + c[i];
  }
  return {v, d};
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
PolyEval legendre_eval(int n, const BigReal& x) {
  BigReal p0(1.0, x.precision());
  BigReal p1(x);
  if (n == 0) return {p0, BigReal(0.0, x.precision())};
  for (int k = 1; k < n; ++k) {
    BigReal p2 = ((2.0 * k + 1.0) * x * p1 - static_cast<double>(k) * p0) / (k + 1.0);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  const BigReal d = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
  return {p1, d};
}

std::shared_ptr<const KronrodRule<BigReal>> build_rule(int n, int bits) {
  if (n < 1) throw DomainError("kronrod_rule: need at least one Gauss point");
  const int wb = bits + 64 + 4 * n;
  const double tol_exp = -(bits + 16);

  // Gauss nodes in [0, 1).
  std::vector<BigReal> gauss;
  std::vector<BigReal> gauss_w;
  for (int i = 1; i <= n / 2; ++i) {
    BigReal x(std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5)), wb);
    for (int it = 0; it < 200; ++it) {
      const auto pe = legendre_eval(n, x);
      const BigReal dx = pe.value / pe.deriv;
      x -= dx;
      if (dx.is_zero() || dx.exponent() - x.exponent() < tol_exp) break;
    }
    const auto pe = legendre_eval(n, x);
    gauss_w.push_back(2.0 / ((1.0 - x * x) * pe.deriv * pe.deriv));
    gauss.push_back(x);
  }
  if (n % 2 == 1) {
    const BigReal z(0.0, wb);
    const auto pe = legendre_eval(n, z);
    gauss_w.push_back(2.0 / (pe.deriv * pe.deriv));
    gauss.push_back(z);
  }

  // Kronrod-only nodes: roots of E_{n+1} in [0, 1).
  const Poly e = stieltjes_coefficients(n);
  std::vector<BigReal> ec;
  std::vector<double> ecd;
  for (const auto& q : e) {
    ec.push_back(from_mpq(q, wb));
    ecd.push_back(q.get_d());
  }
  auto ed = [&](double x) {
    double v = 0.0;
    for (int i = static_cast<int>(ecd.size()) - 1; i >= 0; --i) v = v * x + ecd[i];
    return v;
  };
  std::vector<BigReal> kron;
  if (n % 2 == 0) kron.emplace_back(0.0, wb);
  const int grid = 40000;
  double prev_x = 1e-9;
  double prev_v = ed(prev_x);
  for (int i = 1; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double v = ed(x);
    if ((prev_v < 0) != (v < 0) && prev_v != 0.0) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((ed(mid) < 0) == (prev_v < 0)) lo = mid; else hi = mid;
      }
      BigReal r(0.5 * (lo + hi), wb);
      for (int it = 0; it < 200; ++it) {
        const auto pe = eval_poly(ec, r);
        const BigReal dx = pe.value / pe.deriv;
        r -= dx;
        if (dx.is_zero() || dx.exponent() - r.exponent() < tol_exp) break;
      }
      kron.push_back(r);
    }
    prev_x = x;
    prev_v = v;
  }

  struct Raw {
    BigReal x;
    bool is_gauss;
    BigReal wg;
  };
  std::vector<Raw> raw;
  for (std::size_t i = 0; i < gauss.size(); ++i) raw.push_back({gauss[i], true, gauss_w[i]});
  for (const auto& k : kron) raw.push_back({k, false, BigReal(0.0, wb)});
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.x > b.x; });
  const int m = static_cast<int>(raw.size());
  if (m != n + 1) throw std::logic_error("kronrod_rule: wrong node count");

  // Kronrod weights from the even moments: sum_i mult_i w_i x_i^{2j} = 2/(2j+1).
  std::vector<std::vector<BigReal>> a(m, std::vector<BigReal>(m + 1, BigReal(0.0, wb)));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const double mult = raw[i].x.is_zero() ? 1.0 : 2.0;
      a[j][i] = mult * pow(raw[i].x * raw[i].x, j);
      if (j == 0) a[j][i] = BigReal(mult, wb);
    }
    a[j][m] = BigReal(2.0, wb) / (2.0 * j + 1.0);
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (int r = col + 1; r < m; ++r) {
      const BigReal f = a[r][col] / a[col][col];
      for (int c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<BigReal> w(m, BigReal(0.0, wb));
  for (int r = m - 1; r >= 0; --r) {
    BigReal s = a[r][m];
    for (int c = r + 1; c < m; ++c) s -= a[r][c] * w[c];
    w[r] = s / a[r][r];
  }

  auto rule = std::make_shared<KronrodRule<BigReal>>();
  rule->gauss_points = n;
  rule->bits = bits;
  for (int i = 0; i < m; ++i) {
    rule->nodes.push_back({BigReal(raw[i].x, bits), BigReal(w[i], bits), BigReal(raw[i].wg, bits)});
  }
  return rule;
}

}  // namespace

std::shared_ptr<const KronrodRule<BigReal>> kronrod_rule_big(int gauss_points, int bits) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const KronrodRule<BigReal>>> cache;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find({gauss_points, bits});
    if (it != cache.end()) return it->second;
  }
  auto rule = build_rule(gauss_points, bits);
  std::lock_guard<std::mutex> lk(mu);
  return cache.emplace(std::pair{gauss_points, bits}, rule).first->second;
}

std::shared_ptr<const KronrodRule<double>> kronrod_rule_double(int gauss_points) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const KronrodRule<double>>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(gauss_points);
  if (it != cache.end()) return it->second;
  const auto big = kronrod_rule_big(gauss_points, 128);
  auto rule = std::make_shared<KronrodRule<double>>();
  rule->gauss_points = gauss_points;
  rule->bits = 53;
  for (const auto& nd : big->nodes) rule->nodes.push_back({nd.x.to_double(), nd.wk.to_double(), nd.wg.to_double()});
  return cache.emplace(gauss_points, rule).first->second;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const OscillatoryNodeCache::Block> OscillatoryNodeCache::find(std::uint64_t key) const {
  std::shared_lock lk(mu_);
  auto it = blocks_.find(key);
  return it == blocks_.end() ? nullptr : it->second;
}

std::shared_ptr<const OscillatoryNodeCache::Block> OscillatoryNodeCache::insert(std::uint64_t key, Block block) {
  auto p = std::make_shared<const Block>(std::move(block));
  std::unique_lock lk(mu_);
  return blocks_.emplace(key, std::move(p)).first->second;
}

std::size_t OscillatoryNodeCache::size() const {
  std::shared_lock lk(mu_);
  return blocks_.size();
}

namespace {

struct LobeContext {
  double tau;
  int bits;
  BigReal pi;
  BigReal pi2_over_2tau;
  BigReal tau_big;
  const KronrodRule<BigReal>* rule;
  const OscPhi* phi;
  OscillatoryNodeCache* cache;
  int max_depth;
  double precision_floor;
  long evals = 0;
};

struct LobePanel {
  BigReal value;
  double err;
  double absval;
};

std::uint64_t panel_key(long lobe, int level, long index) {
  return (static_cast<std::uint64_t>(lobe) << 32) | (static_cast<std::uint64_t>(level) << 26) |
         static_cast<std::uint64_t>(index);
}

OscillatoryNodeCache::Block make_block(LobeContext& ctx, long lobe, int level, long index) {
  OscillatoryNodeCache::Block b;
  const int bits = ctx.bits;
  const BigReal scale = ldexp(BigReal(1.0, bits), -level);  // panel width in x
  const BigReal half = scale * 0.5;
  const BigReal mid = (BigReal(static_cast<double>(index), bits) + 0.5) * scale;
  const double sign = (lobe % 2 == 0) ? 1.0 : -1.0;
  auto push = [&](const BigReal& xloc) {
    BigReal rho = ctx.tau_big * (xloc + static_cast<double>(lobe));
    BigReal w = exp(ctx.pi2_over_2tau - rho * rho / (2.0 * ctx.tau)) * sinh(rho) * sin(ctx.pi * xloc) * sign;
    w *= ctx.tau_big * half;  // d rho = tau dx, panel half-width
    b.cosh_rho.push_back(cosh(rho));
    b.rho.push_back(std::move(rho));
    b.weight.push_back(std::move(w));
  };
  for (const auto& nd : ctx.rule->nodes) {
    if (nd.x.is_zero()) {
      push(mid);
    } else {
      const BigReal dx = half * nd.x;
      push(mid - dx);
      push(mid + dx);
    }
  }
  return b;
}

LobePanel eval_panel(LobeContext& ctx, long lobe, int level, long index) {
  std::shared_ptr<const OscillatoryNodeCache::Block> block;
  const auto key = panel_key(lobe, level, index);
  if (ctx.cache) block = ctx.cache->find(key);
  if (!block) {
    auto fresh = make_block(ctx, lobe, level, index);
    block = ctx.cache ? ctx.cache->insert(key, std::move(fresh))
                      : std::make_shared<const OscillatoryNodeCache::Block>(std::move(fresh));
  }
  BigReal k(0.0, ctx.bits), g(0.0, ctx.bits), kabs(0.0, ctx.bits);
  std::size_t i = 0;
  for (const auto& nd : ctx.rule->nodes) {
    if (nd.x.is_zero()) {
      const BigReal f = block->weight[i] * (*ctx.phi)(block->rho[i], block->cosh_rho[i]);
      ++i;
      k += nd.wk * f;
      g += nd.wg * f;
      kabs += nd.wk * abs(f);
    } else {
      const BigReal f1 = block->weight[i] * (*ctx.phi)(block->rho[i], block->cosh_rho[i]);
      const BigReal f2 = block->weight[i + 1] * (*ctx.phi)(block->rho[i + 1], block->cosh_rho[i + 1]);
      i += 2;
      const BigReal s = f1 + f2;
      k += nd.wk * s;
      g += nd.wg * s;
      kabs += nd.wk * (abs(f1) + abs(f2));
    }
  }
  ctx.evals += static_cast<long>(block->rho.size());
  const double absval = kabs.to_double();
  const double err = std::max(std::fabs((k - g).to_double()), ctx.precision_floor * absval);
  return {std::move(k), err, absval};
}

LobePanel integrate_panel(LobeContext& ctx, long lobe, int level, long index, double tol_abs) {
  LobePanel p = eval_panel(ctx, lobe, level, index);
  if (p.err <= tol_abs || level >= ctx.max_depth) return p;
  LobePanel l = integrate_panel(ctx, lobe, level + 1, 2 * index, 0.5 * tol_abs);
  LobePanel r = integrate_panel(ctx, lobe, level + 1, 2 * index + 1, 0.5 * tol_abs);
  return {l.value + r.value, l.err + r.err, l.absval + r.absval};
}

double log_abs(const BigReal& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  return log(abs(x)).to_double();
}

}  // namespace

QuadResult gruet_oscillatory_at(double tau, const OscPhi& phi, int bits, double rel_tol,
                                const OscillatoryOptions& opts, const OscEnvelope& envelope,
                                OscillatoryNodeCache* cache) {
  if (!(tau > 0.0)) throw DomainError("gruet_oscillatory: tau must be positive");
  const auto rule = kronrod_rule_big(opts.gauss_points, bits);
  if (cache && !cache->matches(tau, bits, opts.gauss_points)) cache = nullptr;

  LobeContext ctx{tau,
                  bits,
                  const_pi(bits),
                  BigReal(0.0, bits),
                  BigReal(tau, bits),
                  rule.get(),
                  &phi,
                  cache,
                  opts.max_depth,
                  std::ldexp(1.0, -bits + 12)};
  ctx.pi2_over_2tau = ctx.pi * ctx.pi / (2.0 * tau);
  const double log_peak = std::numbers::pi * std::numbers::pi / (2.0 * tau);
  const double digits = PrecisionPolicy::bits_to_digits(bits);
  const double lobe_tol = std::max(std::min(rel_tol * 0.1, std::pow(10.0, -(digits - 14.0))),
                                   std::max(std::pow(10.0, -(digits - 3.0)), std::ldexp(1.0, -bits + 14)));

  BigReal sum(0.0, bits), comp(0.0, bits);  // Neumaier summation
  double err = 0.0;
  double max_lobe = 0.0;
  double abs_total = 0.0;
  int violations = 0;
  int prev_sign = 0;
  double tail = 0.0;
  bool truncated = false;

  auto log_env = [&](double rho) {
    // log bound of |integrand| * tau on the lobe starting at rho
    double lphi;
    if (envelope) {
      lphi = std::log(envelope(rho));
    } else {
      const BigReal r(rho, bits);
      lphi = log_abs(phi(r, cosh(r)));
    }
    const double rr = rho + tau;
    const double lsinh = rr > 20.0 ? rr - std::numbers::ln2 : std::log(std::sinh(rr));
    return log_peak - rho * rho / (2.0 * tau) + lsinh + lphi + std::log(tau);
  };

  long lobe = 0;
  for (; lobe < opts.max_lobes; ++lobe) {
    LobePanel lp;
    if (opts.rule == QuadRule::tanh_sinh) {
      const double sign = (lobe % 2 == 0) ? 1.0 : -1.0;
      auto f = [&](const BigReal& xloc) {
        const BigReal rho = ctx.tau_big * (xloc + static_cast<double>(lobe));
        const BigReal ch = cosh(rho);
        return exp(ctx.pi2_over_2tau - rho * rho / (2.0 * tau)) * sinh(rho) * sin(ctx.pi * xloc) * sign *
               phi(rho, ch) * ctx.tau_big;
      };
      QuadOptions qo;
      qo.rel_tol = lobe_tol;
      auto r = integrate_tanh_sinh<BigReal>(f, BigReal(0.0, bits), BigReal(1.0, bits), qo, bits);
      ctx.evals += r.evals;
      lp = {r.value, r.err_est, std::fabs(r.value.to_double())};
    } else {
      LobePanel first = eval_panel(ctx, lobe, 0, 0);
      const double tol_abs = lobe_tol * first.absval;
      if (first.err <= tol_abs) {
        lp = first;
      } else {
        LobePanel l = integrate_panel(ctx, lobe, 1, 0, 0.5 * tol_abs);
        LobePanel r = integrate_panel(ctx, lobe, 1, 1, 0.5 * tol_abs);
        lp = {l.value + r.value, l.err + r.err, l.absval + r.absval};
      }
    }
    // Neumaier compensated add
    BigReal t = sum + lp.value;
    if (abs(sum) >= abs(lp.value)) comp += (sum - t) + lp.value;
    else comp += (lp.value - t) + sum;
    sum = std::move(t);
    err += lp.err;
    const double lv = std::fabs(lp.value.to_double());
    max_lobe = std::max(max_lobe, lv);
    abs_total += lp.absval;
    const int sgn = lp.value.sign();
    if (lobe > 0 && sgn != 0 && prev_sign != 0 && sgn == prev_sign) ++violations;
    if (sgn != 0) prev_sign = sgn;

    const double rho_next = (lobe + 1) * tau;
    const double e1 = log_env(rho_next);
    const double e2 = log_env(rho_next + tau);
    const BigReal total = sum + comp;
    const double scale = std::max(log_abs(total), log_peak - digits * std::numbers::ln10);
    if (e2 <= e1 - std::numbers::ln2 && e1 + std::numbers::ln2 <= std::log(0.1 * rel_tol) + scale) {
      tail = 2.0 * std::exp(e1);
      truncated = true;
      ++lobe;
      break;
    }
    if (!std::isfinite(e1) && e1 < 0) {  // phi vanished identically beyond this point
      truncated = true;
      ++lobe;
      break;
    }
  }
  if (!truncated) throw ConvergenceError("gruet_oscillatory: lobe limit reached before truncation");

  QuadResult res;
  res.value = sum + comp;
  res.precision_bits = bits;
  res.evals = ctx.evals;
  res.lobes = static_cast<int>(lobe);
  res.alternation_violations = violations;
  const double rounding = abs_total * std::ldexp(1.0, -bits) * (4.0 + lobe);
  res.err_est = err + tail + rounding;
  const double av = std::fabs(res.value.to_double());
  res.cancellation_digits = av > 0.0 ? std::max(0.0, std::log10(max_lobe / av)) : std::numeric_limits<double>::infinity();
  res.converged = std::isfinite(res.err_est) && res.err_est <= rel_tol * av;
  return res;
}

QuadResult gruet_oscillatory(double tau, const OscPhi& phi, const PrecisionPolicy& prec,
                             const OscillatoryOptions& opts, const OscEnvelope& envelope,
                             std::shared_ptr<OscillatoryNodeCache> cache) {
  const double tol = prec.target_rel_tol;
  int bits = prec.oscillatory_bits(tau);
  while (true) {
    OscillatoryNodeCache* c = cache && cache->matches(tau, bits, opts.gauss_points) ? cache.get() : nullptr;
    QuadResult r = gruet_oscillatory_at(tau, phi, bits, tol, opts, envelope, c);
    if (r.converged) return r;
    const double cancel = std::isfinite(r.cancellation_digits) ? r.cancellation_digits : 2.0 * PrecisionPolicy::bits_to_digits(bits);
    const int required = std::max(PrecisionPolicy::digits_to_bits(16.0 + std::ceil(cancel) + prec.target_digits()), bits + 32);
    if (prec.is_fixed()) {
      throw PrecisionError("gruet_oscillatory: tolerance unreachable at " + std::to_string(bits) + " bits", required);
    }
    if (required > prec.max_bits) {
      throw PrecisionError("gruet_oscillatory: escalation exceeded the precision ceiling", required);
    }
    bits = required;
  }
}

}  // namespace hypheat::quad
