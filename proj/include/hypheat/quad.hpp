#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "hypheat/scalar.hpp"

namespace hypheat::quad {

enum class QuadRule { kronrod, tanh_sinh };

struct QuadOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
  QuadRule rule = QuadRule::kronrod;
  /// Gauss points of the Gauss-Kronrod pair; the Kronrod rule has 2n+1.
  int gauss_points = 10;
};

template <Scalar R>
struct QuadResultT {
  R value{};
  double err_est = 0.0;
  long evals = 0;
  bool converged = false;
  /// Decimal digits lost to cancellation (oscillatory integrals only).
  double cancellation_digits = 0.0;
  int precision_bits = 53;
  /// Oscillatory diagnostics.
  int lobes = 0;
  int alternation_violations = 0;
};

using QuadResult = QuadResultT<BigReal>;

template <Scalar R>
QuadResult to_big(const QuadResultT<R>& r) {
  QuadResult out;
  out.value = hypheat::to_big(r.value, std::max(r.precision_bits, 53));
  out.err_est = r.err_est;
  out.evals = r.evals;
  out.converged = r.converged;
  out.cancellation_digits = r.cancellation_digits;
  out.precision_bits = r.precision_bits;
  out.lobes = r.lobes;
  out.alternation_violations = r.alternation_violations;
  return out;
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod rules at arbitrary precision

template <Scalar R>
struct KronrodNode {
  R x;   // >= 0; the node at 0 is stored once
  R wk;  // Kronrod weight
  R wg;  // Gauss weight, zero for Kronrod-only nodes
};

template <Scalar R>
struct KronrodRule {
  int gauss_points = 0;
  int bits = 53;
  std::vector<KronrodNode<R>> nodes;  // descending x, last may be x = 0
};

/// Cached Gauss-Kronrod (n, 2n+1) rule with nodes and weights correct to
/// `bits`. The Kronrod extension is built from the exact rational Stieltjes
/// polynomial, so any n and any precision are available.
std::shared_ptr<const KronrodRule<BigReal>> kronrod_rule_big(int gauss_points, int bits);
std::shared_ptr<const KronrodRule<double>> kronrod_rule_double(int gauss_points);

template <Scalar R>
std::shared_ptr<const KronrodRule<R>> kronrod_rule(int gauss_points, int bits) {
  if constexpr (std::same_as<R, double>) {
    (void)bits;
    return kronrod_rule_double(gauss_points);
  } else {
    return kronrod_rule_big(gauss_points, bits);
  }
}

namespace detail {

template <Scalar R>
struct Panel {
  R a, b;
  R value;
  double err = 0.0;
  double absval = 0.0;
};

template <Scalar R, class F>
Panel<R> gk_panel(const F& f, const R& a, const R& b, const KronrodRule<R>& rule) {
  using sc::abs;
  const R half = (b - a) * 0.5;
  const R mid = a + half;
  R k = make_real<R>(0.0, rule.bits);
  R g = make_real<R>(0.0, rule.bits);
  R kabs = make_real<R>(0.0, rule.bits);
  for (const auto& nd : rule.nodes) {
    if (nd.x == 0.0) {
      const R fv = f(mid);
      k += nd.wk * fv;
      g += nd.wg * fv;
      kabs += nd.wk * abs(fv);
    } else {
      const R dx = half * nd.x;
      const R f1 = f(mid - dx);
      const R f2 = f(mid + dx);
      const R s = f1 + f2;
      k += nd.wk * s;
      g += nd.wg * s;
      kabs += nd.wk * (abs(f1) + abs(f2));
    }
  }
  Panel<R> p{a, b, k * half, 0.0, 0.0};
  const double ahalf = std::fabs(sc::to_double(half));
  p.absval = sc::to_double(kabs) * ahalf;
  const double eps = std::ldexp(1.0, -rule.bits);
  p.err = std::max(std::fabs(sc::to_double(k - g)) * ahalf, 50.0 * eps * p.absval);
  return p;
}

inline long gk_evals(int gauss_points) { return 2L * gauss_points + 1; }

}  // namespace detail

/// Globally adaptive bisection with a Gauss-Kronrod pair. Converged when the
/// summed |K - G| estimates fall below max(abs_tol, rel_tol * |I|).
template <Scalar R, class F>
QuadResultT<R> integrate_adaptive(const F& f, const R& a, const R& b, const QuadOptions& opts, int bits) {
  QuadResultT<R> res;
  res.precision_bits = bits_of<R>(make_real<R>(0.0, bits));
  if (!(a < b)) {
    if (a == b) {
      res.value = make_real<R>(0.0, bits);
      res.converged = true;
      res.evals = 1;
      return res;
    }
    throw DomainError("integrate_adaptive: requires a < b");
  }
  const auto rule = kronrod_rule<R>(opts.gauss_points, bits);
  std::vector<detail::Panel<R>> panels;
  panels.push_back(detail::gk_panel<R>(f, a, b, *rule));
  long evals = detail::gk_evals(opts.gauss_points);
  const double eps = std::ldexp(1.0, -res.precision_bits);

  auto total = [&]() {
    R s = make_real<R>(0.0, bits);
    double e = 0.0;
    for (const auto& p : panels) {
      s += p.value;
      e += p.err;
    }
    return std::pair<R, double>{s, e};
  };

  auto [sum, err] = total();
  double absval = panels.front().absval;
  // Tolerances below the rounding level of the summed panels are clipped to it.
  auto target_of = [&](const R& s) {
    return std::max({opts.abs_tol, opts.rel_tol * std::fabs(sc::to_double(s)), 128.0 * eps * absval});
  };
  while (true) {
    const double target = target_of(sum);
    if (err <= target) break;
    if (static_cast<int>(panels.size()) >= opts.max_intervals) break;
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& x, const auto& y) { return x.err < y.err; });
    const R lo = worst->a;
    const R hi = worst->b;
    const R mid = (lo + hi) * 0.5;
    // Stop splitting intervals that have shrunk to the rounding level.
    if (std::fabs(sc::to_double(hi - lo)) <= 8.0 * eps * std::max(std::fabs(sc::to_double(lo)), std::fabs(sc::to_double(hi)))) break;
    auto left = detail::gk_panel<R>(f, lo, mid, *rule);
    auto right = detail::gk_panel<R>(f, mid, hi, *rule);
    evals += 2 * detail::gk_evals(opts.gauss_points);
    sum -= worst->value;
    sum += left.value;
    sum += right.value;
    *worst = std::move(left);
    panels.push_back(std::move(right));
    // Plain double sums; updating them incrementally drifts.
    err = 0.0;
    absval = 0.0;
    for (const auto& p : panels) {
      err += p.err;
      absval += p.absval;
    }
  }
  // Deterministic final sum in left-to-right order.
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  std::tie(sum, err) = total();
  res.value = sum;
  res.err_est = err;
  res.evals = evals;
  res.converged = err <= target_of(sum);
  return res;
}

/// Double-exponential (tanh-sinh) rule on [a, b], refined by halving the step
/// until successive levels agree to the tolerance.
template <Scalar R, class F>
QuadResultT<R> integrate_tanh_sinh(const F& f, const R& a, const R& b, const QuadOptions& opts, int bits) {
  using sc::abs;
  using sc::cosh;
  using sc::exp;
  using sc::sinh;
  QuadResultT<R> res;
  res.precision_bits = bits_of<R>(make_real<R>(0.0, bits));
  const R half = (b - a) * 0.5;
  const R mid = a + half;
  const R pi_half = pi_of<R>(bits) * 0.5;
  const double eps = std::ldexp(1.0, -res.precision_bits);
  // Largest abscissa parameter: beyond it the weights underflow the precision.
  const double tmax = std::asinh((res.precision_bits * 0.6931471805599453 + 10.0) / std::numbers::pi) + 0.5;

  auto node_sum = [&](double h, int level, R& absacc, long& evals) {
    R s = make_real<R>(0.0, bits);
    const int step = level == 0 ? 1 : 2;  // only new odd points after level 0
    const int start = level == 0 ? 0 : 1;
    for (int j = start;; j += step) {
      const R t = make_real<R>(j * h, bits);
      const R u = pi_half * sinh(t);
      const R e2 = exp(u * 2.0);
      // x = tanh(u); 1 - x = 2 / (1 + e^{2u})
      const R comp = 2.0 / (1.0 + e2);
      const R x = 1.0 - comp;
      const R ch = cosh(u);
      const R w = pi_half * cosh(t) / (ch * ch);
      R contrib = make_real<R>(0.0, bits);
      if (j == 0) {
        contrib = w * f(mid);
        ++evals;
      } else {
        const R fp = f(mid + half * x);
        const R fm = f(mid - half * x);
        contrib = w * (fp + fm);
        evals += 2;
      }
      s += contrib;
      absacc += abs(contrib);
      if (j * h > tmax || (j > 0 && std::fabs(sc::to_double(contrib)) <= eps * std::fabs(sc::to_double(s)) * 1e-3)) break;
    }
    return s;
  };

  long evals = 0;
  double h = 1.0;
  R absacc = make_real<R>(0.0, bits);
  R sum = node_sum(h, 0, absacc, evals);
  R est = sum * h * half;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    sum += node_sum(h, level, absacc, evals);
    const R next = sum * h * half;
    err = std::fabs(sc::to_double(next - est));
    est = next;
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(sc::to_double(est)));
    // Double-exponential convergence: the next error is roughly err^2.
    if (err <= target || err <= 50.0 * eps * std::fabs(sc::to_double(absacc * h * half))) {
      err = std::max(err * err / std::max(std::fabs(sc::to_double(est)), 1e-300), 50.0 * eps * std::fabs(sc::to_double(absacc * h * half)));
      res.converged = true;
      break;
    }
  }
  res.value = est;
  res.err_est = err;
  res.evals = evals;
  return res;
}

/// Integral over [a, inf). Panels of doubling length are added until
/// `tail_bound(B)` (an upper bound for |int_B^inf f|) is below half the
/// tolerance; without a tail bound the size of the last panels is used.
template <Scalar R, class F>
QuadResultT<R> integrate_semi_infinite(const F& f, double a, const QuadOptions& opts, int bits,
                                       const std::function<double(double)>& tail_bound = {},
                                       double initial_length = 1.0, int max_doublings = 60) {
  QuadResultT<R> res;
  res.precision_bits = bits_of<R>(make_real<R>(0.0, bits));
  R sum = make_real<R>(0.0, bits);
  double err = 0.0;
  long evals = 0;
  double lo = a;
  double len = initial_length;
  double prev_panel = std::numeric_limits<double>::infinity();
  bool all_converged = true;
  for (int i = 0; i < max_doublings; ++i) {
    const double hi = lo + len;
    QuadOptions po = opts;
    po.abs_tol = std::max(opts.abs_tol, 0.25 * opts.rel_tol * std::fabs(sc::to_double(sum)));
    auto piece = integrate_adaptive<R>(f, make_real<R>(lo, bits), make_real<R>(hi, bits), po, bits);
    sum += piece.value;
    err += piece.err_est;
    evals += piece.evals;
    all_converged = all_converged && piece.converged;
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(sc::to_double(sum)));
    if (tail_bound) {
      const double tb = tail_bound(hi);
      if (tb <= 0.5 * target) {
        res.value = sum;
        res.err_est = err + tb;
        res.evals = evals;
        res.converged = all_converged && res.err_est <= target * 1.5;
        return res;
      }
    } else {
      const double pv = std::fabs(sc::to_double(piece.value)) + piece.err_est;
      // The tail is estimated by the last panel once panels shrink geometrically.
      if (i >= 2 && pv <= 0.25 * target && pv <= 0.5 * prev_panel) {
        res.value = sum;
        res.err_est = err + pv;
        res.evals = evals;
        res.converged = all_converged && res.err_est <= target * 1.5;
        return res;
      }
      prev_panel = pv;
    }
    lo = hi;
    len *= 2.0;
  }
  throw ConvergenceError("integrate_semi_infinite: tail bound never reached the tolerance");
}

/// int_0^inf u^{-1/2} g(u) du, computed as 2 int_0^inf g(s^2) ds.
template <Scalar R, class G>
QuadResultT<R> integrate_sqrt_singular(const G& g, const QuadOptions& opts, int bits,
                                       const std::function<double(double)>& tail_bound_s = {},
                                       double initial_length = 1.0) {
  auto h = [&](const R& s) { return g(s * s); };
  auto r = integrate_semi_infinite<R>(h, 0.0, opts, bits, tail_bound_s, initial_length);
  r.value *= 2.0;
  r.err_est *= 2.0;
  return r;
}

/// Integral over (0, B] of an integrand that vanishes faster than any power
/// at 0: integrates [start, B] and then halves the lower limit until the
/// newest slice is negligible `needed_small` times in a row.
template <Scalar R, class F>
QuadResultT<R> integrate_lower_truncated(const F& f, double start, double upper, const QuadOptions& opts, int bits,
                                         int max_halvings = 60, int needed_small = 2) {
  auto res = integrate_adaptive<R>(f, make_real<R>(start, bits), make_real<R>(upper, bits), opts, bits);
  double lo = start;
  int small = 0;
  for (int i = 0; i < max_halvings && small < needed_small; ++i) {
    const double nlo = lo * 0.5;
    QuadOptions po = opts;
    po.abs_tol = std::max(opts.abs_tol, 0.05 * opts.rel_tol * std::fabs(sc::to_double(res.value)));
    auto piece = integrate_adaptive<R>(f, make_real<R>(nlo, bits), make_real<R>(lo, bits), po, bits);
    res.value += piece.value;
    res.err_est += piece.err_est;
    res.evals += piece.evals;
    res.converged = res.converged && piece.converged;
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(sc::to_double(res.value)));
    if (std::fabs(sc::to_double(piece.value)) <= 0.1 * target) {
      ++small;
      if (small == needed_small) res.err_est += std::fabs(sc::to_double(piece.value));
    } else {
      small = 0;
    }
    lo = nlo;
  }
  return res;
}

/// int_0^inf f for an integrand that dies faster than any power at 0:
/// [start, inf) by doubling panels, then (0, start] by halving slices until
/// one slice is negligible.
template <Scalar R, class F>
QuadResultT<R> integrate_zero_to_inf(const F& f, double start, const QuadOptions& opts, int bits) {
  auto hi = integrate_semi_infinite<R>(f, start, opts, bits, {}, start);
  QuadOptions lo_opts = opts;
  lo_opts.abs_tol = std::max(opts.abs_tol, 0.1 * opts.rel_tol * std::fabs(sc::to_double(hi.value)));
  auto lo = integrate_lower_truncated<R>(f, start, start, lo_opts, bits, 60, 1);
  hi.value += lo.value;
  hi.err_est += lo.err_est;
  hi.evals += lo.evals;
  hi.converged = hi.converged && lo.converged;
  return hi;
}

// ---------------------------------------------------------------------------
// Oscillatory integrals of Gruet / Hartman-Watson type

/// phi(rho, cosh(rho)) for the oscillatory engine.
using OscPhi = std::function<BigReal(const BigReal& rho, const BigReal& cosh_rho)>;
/// Upper bound for |phi| on [rho, inf); nonincreasing in rho.
using OscEnvelope = std::function<double(double rho)>;

struct OscillatoryOptions {
  QuadRule rule = QuadRule::kronrod;
  int gauss_points = 15;
  int max_depth = 24;
  int max_lobes = 200000;
};

/// Stores the phi-independent part of the integrand at every quadrature node
/// for one (tau, precision, rule); shared by all phi evaluated at that tau.
class OscillatoryNodeCache {
public:
  OscillatoryNodeCache(double tau, int bits, int gauss_points)
      : tau_(tau), bits_(bits), gauss_points_(gauss_points) {}

  struct Block {
    std::vector<BigReal> rho;
    std::vector<BigReal> cosh_rho;
    std::vector<BigReal> weight;  // e^{(pi^2-rho^2)/(2 tau)} sinh(rho) sin(pi rho/tau)
  };

  bool matches(double tau, int bits, int gauss_points) const {
    return tau == tau_ && bits == bits_ && gauss_points == gauss_points_;
  }
  std::shared_ptr<const Block> find(std::uint64_t key) const;
  std::shared_ptr<const Block> insert(std::uint64_t key, Block block);
  std::size_t size() const;

private:
  double tau_;
  int bits_;
  int gauss_points_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const Block>> blocks_;
};

/// int_0^inf e^{(pi^2 - rho^2)/(2 tau)} sinh(rho) sin(pi rho / tau) phi(rho) d rho.
///
/// The axis is split at the sine zeros rho_j = j tau and each lobe is
/// integrated adaptively at the working precision chosen by `prec`
/// (automatic mode: 16 + ceil(pi^2/(2 tau ln 10)) + target digits). Lobes are
/// summed in index order with compensated summation. In automatic mode a
/// result whose error estimate misses the target is recomputed at the
/// precision the measured cancellation demands; in fixed mode a
/// PrecisionError naming the required bits is thrown instead.
QuadResult gruet_oscillatory(double tau, const OscPhi& phi, const PrecisionPolicy& prec,
                             const OscillatoryOptions& opts = {}, const OscEnvelope& envelope = {},
                             std::shared_ptr<OscillatoryNodeCache> cache = nullptr);

/// Single pass at a fixed precision; never escalates or throws on accuracy.
QuadResult gruet_oscillatory_at(double tau, const OscPhi& phi, int bits, double rel_tol,
                                const OscillatoryOptions& opts = {}, const OscEnvelope& envelope = {},
                                OscillatoryNodeCache* cache = nullptr);

}  // namespace hypheat::quad
