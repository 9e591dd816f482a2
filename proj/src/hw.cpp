#include "hypheat/hw.hpp"

#include <map>
#include <mutex>
#include <numbers>

#include "hypheat/parallel.hpp"

namespace hypheat::hw {

HWEvaluator::HWEvaluator(double t, PrecisionPolicy prec, bool use_cache, quad::OscillatoryOptions osc)
    : t_(t), prec_(prec), use_cache_(use_cache), osc_(osc) {
  if (!(t > 0.0)) throw DomainError("hw_density: t must be positive");
  if (t < prec.t_min) {
    throw DomainError("hw_density: t = " + std::to_string(t) + " is below t_min = " + std::to_string(prec.t_min));
  }
  nodes_ = std::make_shared<quad::OscillatoryNodeCache>(t, prec.oscillatory_bits(t), osc.gauss_points);
}

double HWEvaluator::quantize(double y) {
  int e = 0;
  const double m = std::frexp(y, &e);
  return std::ldexp(std::nearbyint(std::ldexp(m, 44)), e - 44);
}

HWResult HWEvaluator::compute(double y) const {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("hw_density: y must be positive and finite");
  const double t = t_;
  auto phi = [y](const BigReal& /*rho*/, const BigReal& ch) { return exp(-(ch * y)); };
  auto envelope = [y](double rho) { return std::exp(-y * std::cosh(rho)); };
  PrecisionPolicy p = prec_;
  quad::QuadResult r = quad::gruet_oscillatory(t, phi, p, osc_, envelope, nodes_);
  // A density: a nonpositive converged value means the cancellation ate it.
  int bits = r.precision_bits;
  while (r.value.sign() <= 0) {
    const int need = bits + 64;
    if (p.is_fixed() || need > p.max_bits) {
      throw CancellationError("hw_density: nonpositive value at t = " + std::to_string(t) + ", y = " + std::to_string(y),
                              need);
    }
    bits = need;
    r = quad::gruet_oscillatory_at(t, phi, bits, p.target_rel_tol * 1e-3, osc_, envelope, nullptr);
  }
  const int b = r.precision_bits;
  const BigReal pre = BigReal(y, b) / (const_pi(b) * sqrt(const_pi(b) * (2.0 * t)));
  return {pre * r.value, r};
}

HWResult HWEvaluator::density_detail(double y) const { return compute(quantize(y)); }

BigReal HWEvaluator::density(double y) const {
  const double key = quantize(y);
  if (!use_cache_) return compute(key).value;
  {
    std::shared_lock lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  BigReal v = compute(key).value;
  std::unique_lock lk(mu_);
  return cache_.emplace(key, std::move(v)).first->second;
}

std::vector<BigReal> HWEvaluator::grid(const std::vector<double>& ys, int threads) const {
  std::vector<BigReal> out(ys.size());
  parallel_for(ys.size(), threads, [&](std::size_t i) {
    try {
      out[i] = density(ys[i]);
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (grid index " + std::to_string(i) + ")");
    } catch (const CancellationError& e) {
      throw CancellationError(std::string(e.what()) + " (grid index " + std::to_string(i) + ")", e.required_bits());
    } catch (const PrecisionError& e) {
      throw PrecisionError(std::string(e.what()) + " (grid index " + std::to_string(i) + ")", e.required_bits());
    }
  });
  return out;
}

std::size_t HWEvaluator::cache_size() const {
  std::shared_lock lk(mu_);
  return cache_.size();
}

std::size_t HWEvaluator::cache_hits() const { return hits_.load(); }

namespace {

struct RegistryKey {
  double t;
  double tol;
  double t_min;
  int mode;
  int fixed_bits;
  int max_bits;
  auto operator<=>(const RegistryKey&) const = default;
};

std::mutex registry_mu;
std::map<RegistryKey, std::shared_ptr<const HWEvaluator>> registry;

}  // namespace

std::shared_ptr<const HWEvaluator> shared_evaluator(double t, const PrecisionPolicy& prec) {
  const RegistryKey key{t, prec.target_rel_tol, prec.t_min, static_cast<int>(prec.mode), prec.fixed_bits, prec.max_bits};
  std::lock_guard lk(registry_mu);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  auto ev = std::make_shared<const HWEvaluator>(t, prec, true);
  registry.emplace(key, ev);
  return ev;
}

void clear_shared_evaluators() {
  std::lock_guard lk(registry_mu);
  registry.clear();
}

BigReal hw_density(double t, double y, const PrecisionPolicy& prec) {
  return HWEvaluator(t, prec, false).density(y);
}

std::vector<BigReal> hw_grid(double t, const std::vector<double>& ys, const PrecisionPolicy& prec, int threads) {
  return HWEvaluator(t, prec, true).grid(ys, threads);
}

namespace {

BigReal joint_from(const HWEvaluator& ev, double s, double theta) {
  if (!(s > 0.0)) throw DomainError("yor_density: s must be positive");
  const BigReal u = ev.density(std::exp(theta) / s);
  const int b = u.precision();
  const BigReal e2 = exp(BigReal(2.0 * theta, b));
  return exp(-(e2 + 1.0) / (2.0 * s)) * u / s;
}

}  // namespace

BigReal yor_joint_density(double t, double s, double theta, const PrecisionPolicy& prec) {
  return joint_from(HWEvaluator(t, prec, false), s, theta);
}

BigReal yor_density(const HWEvaluator& ev, double s, double theta) {
  const BigReal j = joint_from(ev, s, theta);
  const int b = j.precision();
  const double t = ev.t();
  const BigReal th(theta, b);
  return j * sqrt(const_pi(b) * (2.0 * t)) * exp(th * th / (2.0 * t));
}

BigReal yor_density(double t, double s, double theta, const PrecisionPolicy& prec) {
  return yor_density(HWEvaluator(t, prec, false), s, theta);
}

}  // namespace hypheat::hw
