#pragma once

// Hartman-Watson density
//   u(t, y) = y / (pi sqrt(2 pi t)) int_0^inf e^{(pi^2 - rho^2)/(2t)} e^{-y cosh rho} sinh rho sin(pi rho / t) d rho
// and Yor's densities built on it.

#include <atomic>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "hypheat/quad.hpp"
#include "hypheat/scalar.hpp"

namespace hypheat::hw {

struct HWResult {
  BigReal value;
  quad::QuadResult integral;  // the oscillatory integral, before the prefactor
};

/// Evaluates u(t, .) at one time. y is always rounded to 44 significant bits
/// before evaluation, so the optional memo table returns exactly what a fresh
/// evaluation would.
class HWEvaluator {
public:
  HWEvaluator(double t, PrecisionPolicy prec, bool use_cache = true, quad::OscillatoryOptions osc = {});

  double t() const { return t_; }
  const PrecisionPolicy& policy() const { return prec_; }

  BigReal density(double y) const;
  double density_double(double y) const { return density(y).to_double(); }
  HWResult density_detail(double y) const;

  /// Element-wise density; identical to repeated density() calls.
  std::vector<BigReal> grid(const std::vector<double>& ys, int threads = 1) const;

  std::size_t cache_size() const;
  std::size_t cache_hits() const;

  /// Key actually evaluated for y.
  static double quantize(double y);

private:
  HWResult compute(double y) const;

  double t_;
  PrecisionPolicy prec_;
  bool use_cache_;
  quad::OscillatoryOptions osc_;
  std::shared_ptr<quad::OscillatoryNodeCache> nodes_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<double, BigReal> cache_;
  mutable std::atomic<std::size_t> hits_{0};
};

/// Process-wide evaluator for (t, prec), created on first use. Kernels that
/// integrate u(t, .) share it so repeated nodes are computed once.
std::shared_ptr<const HWEvaluator> shared_evaluator(double t, const PrecisionPolicy& prec);
void clear_shared_evaluators();

/// u(t, y); t below prec.t_min raises DomainError.
BigReal hw_density(double t, double y, const PrecisionPolicy& prec);

std::vector<BigReal> hw_grid(double t, const std::vector<double>& ys, const PrecisionPolicy& prec, int threads = 1);

/// Joint density of (A_t, B_t) at (s, theta):
/// (1/s) e^{-(1 + e^{2 theta})/(2s)} u(t, e^theta / s).
BigReal yor_joint_density(double t, double s, double theta, const PrecisionPolicy& prec);

/// Conditional density of A_t given B_t = theta: the joint density divided
/// by the Gaussian density of B_t.
BigReal yor_density(double t, double s, double theta, const PrecisionPolicy& prec);

/// Same through an existing evaluator (its t is used).
BigReal yor_density(const HWEvaluator& ev, double s, double theta);

}  // namespace hypheat::hw
