#pragma once

// Residuals of the bridging identities, representation comparisons, mass
// checks, and the acceptance suite built from them.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypheat/kernels.hpp"

namespace hypheat::crosscheck {

enum class Identity { INT1, INT2, INT3, YOR_NORM, HW_LAPLACE, QUAD_TRANSFORM, BETA_PRIME };

std::string to_string(Identity id);
std::optional<Identity> parse_identity(const std::string& s);

using Params = std::vector<std::pair<std::string, double>>;

struct ResidualReport {
  Identity identity = Identity::INT1;
  Params inputs;
  BigReal lhs;
  BigReal rhs;
  double rel_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string error;  // set when an evaluation failed
};

/// Default tolerance of each identity.
double default_tol(Identity id);

/// Both sides of an identity, evaluated independently.
///   INT1       (t, theta):  e^{-theta^2/2t}/sqrt(2 pi t) = int_0^inf e^{-y cosh theta} u(t,y) dy/y
///   INT2       (t, theta):  e^{-theta^2/2t} = (1/pi) osc[1/(cosh rho + cosh theta)]
///   INT3       (t, theta):  (theta/t) e^{-theta^2/2t} = (sinh theta/pi) osc[1/(cosh rho + cosh theta)^2]
///   YOR_NORM   (t, theta):  1 = int_0^inf a_t(s, theta) ds
///   HW_LAPLACE (lambda, y): I_{sqrt(2 lambda)}(y) = int_0^inf e^{-lambda t} u(t,y) dt
///   QUAD_TRANSFORM (a):     B(1/2, a) = int_0^inf u^{-1/2} (1+u)^{-1/2-a} du via the s^2 substitution
///   BETA_PRIME (a, b):      B(a, b) = int_0^inf v^{a-1} (1+v)^{-a-b} dv
ResidualReport residual(Identity id, const Params& params, const PrecisionPolicy& prec, double tol = -1.0);

// ---------------------------------------------------------------------------

enum class CompareMode { equality, ratio };

struct GridPoint {
  double t = 1.0;
  double r = 0.0;
  double w = 0.0;  // Maass only
  double y = 1.0;  // Maass only
};

struct Scaling {
  double t = 1.0;
  double r = 1.0;
};

struct ComparisonReport {
  std::string rep_a;
  std::string rep_b;
  std::vector<GridPoint> grid;
  CompareMode mode = CompareMode::equality;
  double tol = 0.0;
  double worst_rel_dev = 0.0;
  double constant_estimate = 1.0;
  std::vector<double> values_a;
  std::vector<double> values_b;
  bool pass = false;
  std::string error;
};

/// A readable label such as "real(n=3)/gruet".
std::string label(const kernels::KernelQuery& q);

/// Evaluates a at each grid point and b at the scaled point (t * scale.t,
/// r * scale.r). Equality mode reports max |a-b|/max(|a|,|b|); ratio mode
/// takes the geometric mean of a/b as the constant and reports the largest
/// relative deviation from it.
ComparisonReport compare(const kernels::KernelQuery& a, const kernels::KernelQuery& b,
                         const std::vector<GridPoint>& grid, CompareMode mode, double tol, int threads = 1,
                         Scaling scale_b = {});

std::vector<GridPoint> radial_grid(const std::vector<double>& ts, const std::vector<double>& rs);

// ---------------------------------------------------------------------------

struct MassReport {
  std::string space;
  double t = 1.0;
  BigReal mass;
  double reference = 1.0;  // 1 for H^n, the mass at the first t otherwise
  double rel_dev = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string error;
};

/// int_0^inf q_t(r) radial_weight(r) dr (q.r is ignored).
BigReal mass(const kernels::KernelQuery& q, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Serialization (JSON lines, numbers as decimal strings)

std::string to_json(const ResidualReport& r);
std::string to_json(const ComparisonReport& r);
std::string to_json(const MassReport& r);

/// Shortest round-trip decimal form of a double.
std::string decimal(double v);

// ---------------------------------------------------------------------------
// Acceptance suite

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  double seconds = 0.0;
  std::vector<ResidualReport> residuals;
  std::vector<ComparisonReport> comparisons;
  std::vector<MassReport> masses;
  std::vector<std::string> notes;  // JSON lines for checks that are neither of the above
};

struct SuiteOptions {
  int threads = 1;
  PrecisionPolicy prec = PrecisionPolicy::automatic();
  std::vector<int> only;  // empty: all criteria
  std::function<void(const CriterionResult&)> on_result;
};

constexpr int kCriteria = 9;

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& opts);
CriterionResult run_criterion(int id, const SuiteOptions& opts);

}  // namespace hypheat::crosscheck
