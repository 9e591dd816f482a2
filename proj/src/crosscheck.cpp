#include "hypheat/crosscheck.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <json.hpp>

#include "hypheat/hw.hpp"
#include "hypheat/parallel.hpp"
#include "hypheat/specfun.hpp"
#include "hypheat/symop.hpp"

namespace hypheat::crosscheck {

using kernels::KernelQuery;
using kernels::Rep;
using kernels::Space;

namespace {

constexpr int kOracleBits = 192;

double param(const Params& p, const std::string& name) {
  for (const auto& [k, v] : p) {
    if (k == name) return v;
  }
  throw DomainError("missing parameter '" + name + "'");
}

double rel_dev(const BigReal& lhs, const BigReal& rhs) {
  const int b = std::max(lhs.precision(), rhs.precision());
  const BigReal d = abs(BigReal(lhs, b) - BigReal(rhs, b));
  const BigReal s = abs(BigReal(lhs, b));
  if (s.sign() == 0) return d.sign() == 0 ? 0.0 : INFINITY;
  return (d / s).to_double();
}

/// Precision for u(t, y) inside outer integrals whose own tolerance is `tol`.
PrecisionPolicy hw_policy(const PrecisionPolicy& prec) {
  return prec.is_fixed() ? prec : prec.with_tol(std::min(prec.target_rel_tol, 1e-13));
}

std::string fmt_e(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// u(t, y) memo shared by Laplace residuals with different lambda.
std::mutex laplace_mu;
std::map<std::tuple<double, double, double>, double> laplace_memo;

double hw_memo(double t, double y, const PrecisionPolicy& prec) {
  const auto key = std::make_tuple(t, y, prec.target_rel_tol);
  {
    std::lock_guard lk(laplace_mu);
    auto it = laplace_memo.find(key);
    if (it != laplace_memo.end()) return it->second;
  }
  const double v = hw::hw_density(t, y, prec.with_t_min(std::min(prec.t_min, t))).to_double();
  std::lock_guard lk(laplace_mu);
  laplace_memo.emplace(key, v);
  return v;
}

BigReal int1_rhs(double t, double theta, const PrecisionPolicy& prec) {
  auto ev = hw::shared_evaluator(t, hw_policy(prec));
  const double ch = std::cosh(theta);
  auto f = [&](double y) { return std::exp(-y * ch) * ev->density_double(y) / y; };
  quad::QuadOptions o;
  o.rel_tol = 1e-13;
  const auto res = quad::integrate_zero_to_inf<double>(f, 1.0, o, 53);
  if (!res.converged) throw ConvergenceError("INT1: outer quadrature did not converge");
  return BigReal(res.value, 64);
}

BigReal osc_rhs(double t, double theta, int power, const PrecisionPolicy& prec) {
  const PrecisionPolicy p = prec.is_fixed() ? prec : prec.with_tol(std::min(prec.target_rel_tol, 1e-13));
  auto phi = [theta, power](const BigReal& /*rho*/, const BigReal& ch) {
    const BigReal d = ch + cosh(BigReal(theta, ch.precision()));
    return power == 1 ? 1.0 / d : 1.0 / (d * d);
  };
  const double cth = std::cosh(theta);
  auto env = [cth, power](double rho) { return std::pow(std::cosh(rho) + cth, -power); };
  const auto res = quad::gruet_oscillatory(t, phi, p, {}, env);
  const int b = res.precision_bits;
  BigReal v = res.value / const_pi(b);
  if (power == 2) v = v * sinh(BigReal(theta, b));
  return v;
}

BigReal yor_norm_rhs(double t, double theta, const PrecisionPolicy& prec) {
  auto ev = hw::shared_evaluator(t, hw_policy(prec));
  // s = e^{theta +- v}; y = e^theta / s = e^{-+v}.
  auto side = [&](double sign) {
    auto f = [&, sign](double v) {
      const double s = std::exp(theta + sign * v);
      return hw::yor_density(*ev, s, theta).to_double() * s;
    };
    // Both ends decay faster than exponentially in v, so the integrand at the
    // truncation point bounds the remainder.
    auto tail = [&](double v) { return std::fabs(f(v)); };
    quad::QuadOptions o;
    o.rel_tol = 1e-11;
    return quad::integrate_semi_infinite<double>(f, 0.0, o, 53, tail, 1.0);
  };
  const auto a = side(1.0);
  const auto b = side(-1.0);
  if (!a.converged || !b.converged) throw ConvergenceError("YOR_NORM: quadrature did not converge");
  return BigReal(a.value + b.value, 64);
}

BigReal laplace_lhs(double lambda, double y, const BigReal& rhs, const PrecisionPolicy& prec, double tol) {
  const PrecisionPolicy p = prec.is_fixed() ? prec : prec.with_tol(std::min(prec.target_rel_tol, 1e-3 * tol));
  const double scale = std::fabs(rhs.to_double());
  // u(t, y) increases like e^{-pi^2/2t} for small t, so the part below t_c is
  // at most t_c u(t_c, y). Take the largest t_c that makes this negligible
  // (test-only heuristic); small t is where u is expensive.
  double tc = 0.0;
  for (double cand : {0.4, 0.3, 0.25, 0.2, 0.15, 0.125, 0.1, 0.075, 0.05, 0.025}) {
    tc = cand;
    if (cand * hw_memo(cand, y, p) <= 1e-4 * tol * scale) break;
  }
  auto f = [&](double t) { return std::exp(-lambda * t) * hw_memo(t, y, p); };
  quad::QuadOptions o;
  o.rel_tol = 1e-2 * tol;
  const auto res = quad::integrate_semi_infinite<double>(f, tc, o, 53, {}, tc);
  if (!res.converged) throw ConvergenceError("HW_LAPLACE: quadrature did not converge");
  return BigReal(res.value, 64);
}

}  // namespace

std::string to_string(Identity id) {
  switch (id) {
    case Identity::INT1: return "INT1";
    case Identity::INT2: return "INT2";
    case Identity::INT3: return "INT3";
    case Identity::YOR_NORM: return "YOR_NORM";
    case Identity::HW_LAPLACE: return "HW_LAPLACE";
    case Identity::QUAD_TRANSFORM: return "QUAD_TRANSFORM";
    case Identity::BETA_PRIME: return "BETA_PRIME";
  }
  return "?";
}

std::optional<Identity> parse_identity(const std::string& s) {
  for (Identity id : {Identity::INT1, Identity::INT2, Identity::INT3, Identity::YOR_NORM, Identity::HW_LAPLACE,
                      Identity::QUAD_TRANSFORM, Identity::BETA_PRIME}) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

double default_tol(Identity id) {
  switch (id) {
    case Identity::YOR_NORM: return 1e-6;
    case Identity::HW_LAPLACE: return 1e-8;
    case Identity::QUAD_TRANSFORM:
    case Identity::BETA_PRIME: return 1e-12;
    default: return 1e-10;
  }
}

ResidualReport residual(Identity id, const Params& params, const PrecisionPolicy& prec, double tol) {
  ResidualReport rep;
  rep.identity = id;
  rep.inputs = params;
  rep.tol = tol > 0.0 ? tol : default_tol(id);
  const int b = kOracleBits;
  try {
    switch (id) {
      case Identity::INT1:
      case Identity::INT2:
      case Identity::INT3: {
        const double t = param(params, "t");
        const double theta = param(params, "theta");
        if (!(t > 0.0)) throw DomainError("t must be positive");
        const BigReal th(theta, b);
        const BigReal gauss = exp(-(th * th) / (2.0 * t));
        if (id == Identity::INT1) {
          rep.lhs = gauss / sqrt(const_pi(b) * (2.0 * t));
          rep.rhs = int1_rhs(t, theta, prec);
        } else if (id == Identity::INT2) {
          rep.lhs = gauss;
          rep.rhs = osc_rhs(t, theta, 1, prec);
        } else {
          if (theta == 0.0) throw DomainError("INT3 is evaluated at theta != 0 only");
          rep.lhs = th / t * gauss;
          rep.rhs = osc_rhs(t, theta, 2, prec);
        }
        break;
      }
      case Identity::YOR_NORM: {
        const double t = param(params, "t");
        const double theta = param(params, "theta");
        rep.lhs = BigReal(1.0, b);
        rep.rhs = yor_norm_rhs(t, theta, prec);
        break;
      }
      case Identity::HW_LAPLACE: {
        const double lambda = param(params, "lambda");
        const double y = param(params, "y");
        if (!(lambda > 0.0 && y > 0.0)) throw DomainError("lambda and y must be positive");
        rep.rhs = specfun::bessel_i<BigReal>(std::sqrt(2.0 * lambda), BigReal(y, b), b);
        rep.lhs = laplace_lhs(lambda, y, rep.rhs, prec, rep.tol);
        break;
      }
      case Identity::QUAD_TRANSFORM: {
        const double a = param(params, "a");
        if (!(a > 0.0)) throw DomainError("a must be positive");
        rep.lhs = tgamma(BigReal(0.5, b)) * tgamma(BigReal(a, b)) / tgamma(BigReal(a + 0.5, b));
        auto g = [a](double u) { return std::pow(1.0 + u, -0.5 - a); };
        auto tail = [a](double s) { return std::pow(s, -2.0 * a) / a; };
        quad::QuadOptions o;
        o.rel_tol = 1e-14;
        const auto res = quad::integrate_sqrt_singular<double>(g, o, 53, tail);
        rep.rhs = BigReal(res.value, 64);
        break;
      }
      case Identity::BETA_PRIME: {
        const double a = param(params, "a");
        const double bb = param(params, "b");
        if (!(a >= 1.0 && bb > 0.0)) throw DomainError("BETA_PRIME needs a >= 1, b > 0");
        rep.lhs = tgamma(BigReal(a, b)) * tgamma(BigReal(bb, b)) / tgamma(BigReal(a + bb, b));
        auto f = [a, bb](double v) { return std::pow(v, a - 1.0) * std::pow(1.0 + v, -a - bb); };
        auto tail = [bb](double v) { return std::pow(v, -bb) / bb; };
        quad::QuadOptions o;
        o.rel_tol = 1e-14;
        const auto head = quad::integrate_adaptive<double>(f, 0.0, 1.0, o, 53);
        const auto rest = quad::integrate_semi_infinite<double>(f, 1.0, o, 53, tail);
        rep.rhs = BigReal(head.value + rest.value, 64);
        break;
      }
    }
    rep.rel_residual = rel_dev(rep.lhs, rep.rhs);
    rep.pass = rep.rel_residual <= rep.tol;
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.rel_residual = INFINITY;
    rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::string label(const KernelQuery& q) {
  std::string s = kernels::to_string(q.space) + "(";
  switch (q.space) {
    case Space::real_hyperbolic:
    case Space::gruet_real:
    case Space::complex_hyperbolic: s += "n=" + decimal(q.n); break;
    case Space::jacobi: s += "nu=" + decimal(q.nu) + ";gamma=" + decimal(q.gamma); break;
    case Space::damek_ricci: s += "k=" + std::to_string(q.k) + ";m=" + std::to_string(q.m); break;
    case Space::maass: s += "k=" + std::to_string(q.k); break;
  }
  return s + ")/" + kernels::to_string(q.rep);
}

std::vector<GridPoint> radial_grid(const std::vector<double>& ts, const std::vector<double>& rs) {
  std::vector<GridPoint> g;
  for (double t : ts) {
    for (double r : rs) g.push_back({t, r, 0.0, 1.0});
  }
  return g;
}

namespace {

KernelQuery at_point(KernelQuery q, const GridPoint& p, Scaling s) {
  q.t = p.t * s.t;
  q.r = p.r * s.r;
  q.w = p.w;
  q.y = p.y;
  return q;
}

}  // namespace

ComparisonReport compare(const KernelQuery& a, const KernelQuery& b, const std::vector<GridPoint>& grid,
                         CompareMode mode, double tol, int threads, Scaling scale_b) {
  ComparisonReport rep;
  rep.rep_a = label(a);
  rep.rep_b = label(b);
  rep.grid = grid;
  rep.mode = mode;
  rep.tol = tol;
  rep.values_a.assign(grid.size(), NAN);
  rep.values_b.assign(grid.size(), NAN);
  if (mode == CompareMode::ratio && grid.size() < 2) {
    rep.error = "ratio mode needs at least two grid points";
    return rep;
  }
  std::mutex err_mu;
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    try {
      rep.values_a[i] = kernels::evaluate(at_point(a, grid[i], {})).to_double();
      rep.values_b[i] = kernels::evaluate(at_point(b, grid[i], scale_b)).to_double();
    } catch (const std::exception& e) {
      std::lock_guard lk(err_mu);
      if (rep.error.empty()) rep.error = "grid point " + std::to_string(i) + ": " + e.what();
    }
  });
  if (!rep.error.empty()) {
    rep.worst_rel_dev = INFINITY;
    return rep;
  }
  double worst = 0.0;
  if (mode == CompareMode::equality) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = rep.values_a[i];
      const double y = rep.values_b[i];
      const double den = std::max(std::fabs(x), std::fabs(y));
      worst = std::max(worst, den == 0.0 ? 0.0 : std::fabs(x - y) / den);
    }
    rep.constant_estimate = 1.0;
  } else {
    double log_sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) log_sum += std::log(rep.values_a[i] / rep.values_b[i]);
    const double c = std::exp(log_sum / static_cast<double>(grid.size()));
    rep.constant_estimate = c;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::fabs(rep.values_a[i] / rep.values_b[i] / c - 1.0));
    }
    if (!std::isfinite(c) || c == 0.0) worst = INFINITY;
  }
  rep.worst_rel_dev = std::isnan(worst) ? INFINITY : worst;
  rep.pass = rep.worst_rel_dev <= tol;
  return rep;
}

// ---------------------------------------------------------------------------

BigReal mass(const KernelQuery& q, double tol) {
  auto f = [&](double r) {
    KernelQuery qr = q;
    qr.r = r;
    return kernels::evaluate(qr).to_double() * kernels::radial_weight(q, r);
  };
  // The radial density is a bump that decays like a Gaussian past its peak:
  // step outward until it is negligible against the peak.
  double peak = 0.0;
  double upper = 0.0;
  for (double r = 0.5;; r += 0.5) {
    const double v = std::fabs(f(r));
    peak = std::max(peak, v);
    if (v < peak) {
      if (v <= 1e-17 * peak) {
        upper = r;
        break;
      }
    }
    if (r > 400.0) throw ConvergenceError("mass: radial density does not decay");
  }
  quad::QuadOptions o;
  o.rel_tol = tol;
  o.max_intervals = 20000;
  const auto res = quad::integrate_adaptive<double>(f, 0.0, upper, o, 53);
  if (!res.converged) throw ConvergenceError("mass: quadrature did not converge");
  return BigReal(res.value, 64);
}

// ---------------------------------------------------------------------------

std::string decimal(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string big_decimal(const BigReal& v) { return v.to_string(0); }

nlohmann::ordered_json params_json(const Params& p) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [k, v] : p) arr.push_back(k + "=" + decimal(v));
  return arr;
}

}  // namespace

std::string to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = to_string(r.identity);
  j["inputs"] = params_json(r.inputs);
  j["lhs"] = big_decimal(r.lhs);
  j["rhs"] = big_decimal(r.rhs);
  j["rel_residual"] = decimal(r.rel_residual);
  j["tol"] = decimal(r.tol);
  j["pass"] = r.pass;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

std::string to_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  j["compare"] = r.rep_a + " vs " + r.rep_b;
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const auto& p = r.grid[i];
    nlohmann::ordered_json g;
    g["t"] = decimal(p.t);
    g["r"] = decimal(p.r);
    if (p.w != 0.0 || p.y != 1.0) {
      g["w"] = decimal(p.w);
      g["y"] = decimal(p.y);
    }
    g["a"] = decimal(r.values_a[i]);
    g["b"] = decimal(r.values_b[i]);
    arr.push_back(g);
  }
  j["inputs"] = arr;
  j["mode"] = r.mode == CompareMode::equality ? "equality" : "ratio";
  j["worst_rel_dev"] = decimal(r.worst_rel_dev);
  j["constant_estimate"] = decimal(r.constant_estimate);
  j["tol"] = decimal(r.tol);
  j["pass"] = r.pass;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

std::string to_json(const MassReport& r) {
  nlohmann::ordered_json j;
  j["mass"] = r.space;
  j["inputs"] = nlohmann::ordered_json::array({"t=" + decimal(r.t)});
  j["value"] = big_decimal(r.mass);
  j["reference"] = decimal(r.reference);
  j["rel_dev"] = decimal(r.rel_dev);
  j["tol"] = decimal(r.tol);
  j["pass"] = r.pass;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Acceptance suite

namespace {

const std::vector<double> kT = {0.5, 1.0, 2.0, 4.0};
const std::vector<double> kR = {0.1, 0.5, 1.0, 2.0, 4.0};

KernelQuery query(Space s, Rep r, const PrecisionPolicy& prec) {
  KernelQuery q;
  q.space = s;
  q.rep = r;
  q.prec = prec;
  return q;
}

KernelQuery real_q(int n, Rep r, const PrecisionPolicy& prec) {
  KernelQuery q = query(Space::real_hyperbolic, r, prec);
  q.n = n;
  return q;
}

KernelQuery dr_q(int k, int m, Rep r, const PrecisionPolicy& prec) {
  KernelQuery q = query(Space::damek_ricci, r, prec);
  q.k = k;
  q.m = m;
  return q;
}

template <class T>
double worst_of(const std::vector<T>& v) {
  double w = 0.0;
  for (const auto& x : v) {
    if constexpr (std::same_as<T, ResidualReport>) {
      w = std::max(w, x.rel_residual);
    } else if constexpr (std::same_as<T, ComparisonReport>) {
      w = std::max(w, x.worst_rel_dev);
    } else {
      w = std::max(w, x.rel_dev);
    }
  }
  return w;
}

template <class T>
bool all_pass(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return x.pass; });
}

std::string note_json(const std::string& check, const std::vector<std::pair<std::string, std::string>>& fields,
                      bool pass) {
  nlohmann::ordered_json j;
  j["check"] = check;
  for (const auto& [k, v] : fields) j[k] = v;
  j["pass"] = pass;
  return j.dump();
}

void criterion_identities(CriterionResult& c, const SuiteOptions& o) {
  std::vector<std::pair<Identity, Params>> items;
  for (double t : kT) {
    for (double th : {0.0, 0.2, 0.8, 2.0}) {
      items.push_back({Identity::INT1, {{"t", t}, {"theta", th}}});
      items.push_back({Identity::INT2, {{"t", t}, {"theta", th}}});
      if (th != 0.0) items.push_back({Identity::INT3, {{"t", t}, {"theta", th}}});
    }
  }
  for (double t : {0.5, 1.0, 2.0}) {
    for (double th : {-1.0, 0.0, 1.0}) items.push_back({Identity::YOR_NORM, {{"t", t}, {"theta", th}}});
  }
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double y : {0.5, 1.0, 2.0}) items.push_back({Identity::HW_LAPLACE, {{"lambda", lambda}, {"y", y}}});
  }
  for (double a : {0.5, 1.5, 2.5}) items.push_back({Identity::QUAD_TRANSFORM, {{"a", a}}});
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}, std::pair{1.5, 2.5}}) {
    items.push_back({Identity::BETA_PRIME, {{"a", a}, {"b", b}}});
  }
  c.residuals.resize(items.size());
  parallel_for(items.size(), o.threads, [&](std::size_t i) {
    c.residuals[i] = residual(items[i].first, items[i].second, o.prec);
  });
  c.pass = all_pass(c.residuals);
  std::map<std::string, double> worst;
  for (const auto& r : c.residuals) {
    auto& w = worst[to_string(r.identity)];
    w = std::max(w, r.rel_residual);
  }
  std::string s;
  for (const char* id : {"INT1", "INT2", "INT3", "YOR_NORM", "HW_LAPLACE", "QUAD_TRANSFORM", "BETA_PRIME"}) {
    if (!s.empty()) s += ", ";
    s += std::string(id) + " " + fmt_e(worst[id]);
  }
  c.summary = std::to_string(c.residuals.size()) + " residuals; worst " + s;
}

void criterion_gruet_millson(CriterionResult& c, const SuiteOptions& o) {
  const auto grid = radial_grid(kT, kR);
  for (int n : {3, 5, 7}) {
    c.comparisons.push_back(compare(real_q(n, Rep::gruet, o.prec), real_q(n, Rep::millson, o.prec), grid,
                                    CompareMode::equality, 1e-8, o.threads));
  }
  const double odd = worst_of(c.comparisons);
  for (int n : {2, 4, 6}) {
    c.comparisons.push_back(compare(real_q(n, Rep::gruet, o.prec), real_q(n, Rep::millson, o.prec), grid,
                                    CompareMode::equality, 1e-6, o.threads));
  }
  c.pass = all_pass(c.comparisons);
  c.summary = "odd n=3,5,7 worst " + fmt_e(odd) + " (tol 1e-8); even n=2,4,6 worst " +
              fmt_e(worst_of(std::vector<ComparisonReport>(c.comparisons.begin() + 3, c.comparisons.end()))) +
              " (tol 1e-6)";
}

void criterion_jacobi(CriterionResult& c, const SuiteOptions& o) {
  const auto grid = radial_grid({0.5, 1.0, 2.0}, {0.3, 1.0, 2.0});
  // Calibration of the spectral-gap exponent at nu = 1/2 against H^3.
  double chosen = 0.0;
  int passing = 0;
  std::vector<std::pair<std::string, std::string>> fields;
  for (double gamma : {0.125, 0.5}) {
    KernelQuery js = query(Space::jacobi, Rep::spectral, o.prec);
    js.nu = 0.5;
    js.gamma = gamma;
    auto cmp = compare(js, real_q(3, Rep::millson, o.prec), grid, CompareMode::ratio, 1e-5, o.threads);
    fields.push_back({"worst_rel_dev_gamma_" + decimal(gamma), decimal(cmp.worst_rel_dev)});
    if (cmp.pass) {
      ++passing;
      chosen = gamma;
    }
    c.comparisons.push_back(std::move(cmp));
  }
  const bool calib_ok = passing == 1 && chosen == 0.125;
  fields.push_back({"gamma", passing == 1 ? decimal(chosen) : "unresolved"});
  c.notes.push_back(note_json("jacobi_gamma_calibration", fields, calib_ok));
  // The failing calibration candidate is expected to fail; it is not part of the verdict.
  std::vector<ComparisonReport> main;
  for (double nu : {0.25, 0.75, 1.3}) {
    KernelQuery js = query(Space::jacobi, Rep::spectral, o.prec);
    js.nu = nu;
    js.gamma = passing == 1 ? chosen : 0.125;
    KernelQuery g = query(Space::gruet_real, Rep::gruet, o.prec);
    g.n = 2.0 * nu + 2.0;
    main.push_back(compare(js, g, grid, CompareMode::ratio, 1e-5, o.threads));
  }
  c.pass = calib_ok && all_pass(main);
  c.summary = "gamma calibrated to " + (passing == 1 ? decimal(chosen) : std::string("unresolved")) +
              " (1/8: " + fmt_e(c.comparisons[0].worst_rel_dev) + ", 1/2: " + fmt_e(c.comparisons[1].worst_rel_dev) +
              "); nu=0.25,0.75,1.3 ratio worst " + fmt_e(worst_of(main)) + " (tol 1e-5)";
  for (auto& m : main) c.comparisons.push_back(std::move(m));
}

std::vector<ComparisonReport> dr_three_way(int k, int m, const SuiteOptions& o) {
  const auto grid = radial_grid(kT, kR);
  std::vector<ComparisonReport> out;
  out.push_back(compare(dr_q(k, m, Rep::parity, o.prec), dr_q(k, m, Rep::hw, o.prec), grid, CompareMode::equality,
                        1e-6, o.threads));
  out.push_back(compare(dr_q(k, m, Rep::parity, o.prec), dr_q(k, m, Rep::single, o.prec), grid,
                        CompareMode::equality, 1e-6, o.threads));
  out.push_back(compare(dr_q(k, m, Rep::hw, o.prec), dr_q(k, m, Rep::single, o.prec), grid, CompareMode::equality,
                        1e-6, o.threads));
  return out;
}

void criterion_damek_ricci(CriterionResult& c, const SuiteOptions& o) {
  for (auto [k, m] : {std::pair{0, 2}, std::pair{1, 2}, std::pair{2, 2}, std::pair{3, 4}, std::pair{4, 6}}) {
    for (auto& r : dr_three_way(k, m, o)) c.comparisons.push_back(std::move(r));
  }
  c.pass = all_pass(c.comparisons);
  c.summary = "(k,m) in (0,2),(1,2),(2,2),(3,4),(4,6): parity/hw/single worst " + fmt_e(worst_of(c.comparisons)) +
              " (tol 1e-6)";
}

void criterion_complex_quaternionic(CriterionResult& c, const SuiteOptions& o) {
  const auto grid = radial_grid({0.5, 1.0, 2.0}, {0.5, 1.0, 2.0});
  for (int n : {1, 2}) {
    KernelQuery mq = query(Space::complex_hyperbolic, Rep::matsumoto, o.prec);
    mq.n = n;
    c.comparisons.push_back(compare(mq, dr_q(1, 2 * (n - 1), Rep::hw, o.prec), grid, CompareMode::ratio, 1e-6,
                                    o.threads, Scaling{4.0, 2.0}));
  }
  const double cw = worst_of(c.comparisons);
  for (auto& r : dr_three_way(3, 4, o)) c.comparisons.push_back(std::move(r));
  c.pass = all_pass(c.comparisons);
  c.summary = "Matsumoto n=1,2 vs hw(1,2(n-1)) at (4t,2r): ratio worst " + fmt_e(cw) +
              "; quaternionic (3,4) three-way worst " +
              fmt_e(worst_of(std::vector<ComparisonReport>(c.comparisons.begin() + 2, c.comparisons.end())));
}

void criterion_maass(CriterionResult& c, const SuiteOptions& o) {
  const std::vector<std::tuple<double, double, double>> pts = {{1.0, 0.3, 1.2}, {1.0, 0.0, 2.0}, {1.0, 1.0, 1.0},
                                                               {2.0, 0.3, 1.2}, {2.0, -0.5, 0.7}, {0.5, 0.2, 1.5}};
  std::vector<GridPoint> grid;
  for (auto [t, w, y] : pts) grid.push_back({t, kernels::hyperbolic_distance_h2(w, y), w, y});
  KernelQuery m0 = query(Space::maass, Rep::theta, o.prec);
  m0.k = 0;
  c.comparisons.push_back(compare(m0, real_q(2, Rep::millson, o.prec), grid, CompareMode::equality, 1e-12, o.threads));
  for (int k : {1, 2, 3}) {
    KernelQuery a = query(Space::maass, Rep::theta, o.prec);
    a.k = k;
    KernelQuery b = query(Space::maass, Rep::hw_2f0, o.prec);
    b.k = k;
    c.comparisons.push_back(compare(a, b, grid, CompareMode::ratio, 1e-6, o.threads));
  }
  double phase_dev = 0.0;
  for (int k = 0; k <= 6; ++k) {
    for (double w : {-2.0, -0.5, 0.0, 0.3, 1.0, 3.0}) {
      for (double y : {0.1, 0.7, 1.0, 1.2, 5.0}) {
        phase_dev = std::max(phase_dev, std::fabs(std::abs(kernels::maass_phase(k, w, y)) - 1.0));
      }
    }
  }
  const bool phase_ok = phase_dev <= 1e-14;
  c.notes.push_back(note_json("maass_phase_modulus", {{"max_dev", decimal(phase_dev)}, {"tol", "1e-14"}}, phase_ok));
  c.pass = phase_ok && all_pass(c.comparisons);
  c.summary = "theta(0) vs even(0) " + fmt_e(c.comparisons[0].worst_rel_dev) + " (tol 1e-12); theta/hw k=1,2,3 ratio worst " +
              fmt_e(worst_of(std::vector<ComparisonReport>(c.comparisons.begin() + 1, c.comparisons.end()))) +
              " (tol 1e-6); |phase|-1 " + fmt_e(phase_dev);
}

void criterion_mass(CriterionResult& c, const SuiteOptions& o) {
  struct Item {
    KernelQuery q;
    std::string name;
    std::vector<double> ts;
    bool unit;
  };
  std::vector<Item> items;
  for (int n : {2, 3, 4, 5}) items.push_back({real_q(n, Rep::millson, o.prec), "H" + std::to_string(n), {0.5, 1.0, 2.0}, true});
  for (auto [k, m] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{3, 4}}) {
    items.push_back({dr_q(k, m, Rep::parity, o.prec), "damek-ricci(k=" + std::to_string(k) + ";m=" + std::to_string(m) + ")",
                     kT, false});
  }
  for (double nu : {0.25, 0.75, 1.3}) {
    KernelQuery q = query(Space::jacobi, Rep::gruet, o.prec);
    q.nu = nu;
    items.push_back({q, "jacobi(nu=" + decimal(nu) + ")", kT, false});
  }
  struct Job {
    std::size_t item;
    double t;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (double t : items[i].ts) jobs.push_back({i, t});
  }
  std::vector<MassReport> reps(jobs.size());
  parallel_for(jobs.size(), o.threads, [&](std::size_t j) {
    const auto& it = items[jobs[j].item];
    MassReport& r = reps[j];
    r.space = it.name;
    r.t = jobs[j].t;
    r.tol = 1e-6;
    try {
      KernelQuery q = it.q;
      q.t = r.t;
      r.mass = mass(q, 1e-10);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    MassReport& r = reps[j];
    const auto& it = items[jobs[j].item];
    if (!r.error.empty()) {
      r.rel_dev = INFINITY;
      continue;
    }
    if (it.unit) {
      r.reference = 1.0;
    } else {
      std::size_t first = j;
      while (first > 0 && jobs[first - 1].item == jobs[j].item) --first;
      r.reference = reps[first].mass.to_double();
    }
    r.rel_dev = std::fabs(r.mass.to_double() / r.reference - 1.0);
    r.pass = r.rel_dev <= r.tol;
  }
  // The Jacobi normalization constant is only recorded; the verdict uses t-constancy.
  double jacobi_const_dev = 0.0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& it = items[jobs[j].item];
    if (it.q.space != Space::jacobi || !reps[j].error.empty()) continue;
    const double dev = std::fabs(reps[j].mass.to_double() - 1.0);
    jacobi_const_dev = std::max(jacobi_const_dev, dev);
    nlohmann::ordered_json n;
    n["check"] = "jacobi_mass_constant";
    n["space"] = it.name;
    n["t"] = decimal(jobs[j].t);
    n["mass"] = reps[j].mass.to_string(0);
    n["informational"] = true;
    c.notes.push_back(n.dump());
  }
  c.masses = std::move(reps);
  c.pass = all_pass(c.masses);
  double unit = 0.0, rest = 0.0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    double& w = items[jobs[j].item].unit ? unit : rest;
    w = std::max(w, c.masses[j].rel_dev);
  }
  c.summary = "H_n n=2..5 |mass-1| worst " + fmt_e(unit) + "; Damek-Ricci/Jacobi t-constancy worst " + fmt_e(rest) +
              " (tol 1e-6); Jacobi constant |mass-1| " + fmt_e(jacobi_const_dev) + " (recorded)";
}

void criterion_symbolic(CriterionResult& c, const SuiteOptions& /*o*/) {
  using symop::HypTerm;
  using symop::TermSum;
  // Finite differences of the operator applied once more.
  double worst_fd = 0.0;
  for (int half = 0; half <= 1; ++half) {
    for (int seed = 0; seed <= 1; ++seed) {
      TermSum cur = seed == 0 ? symop::seed_gaussian() : symop::seed_even_dim();
      for (int m = 0; m <= 3; ++m) {
        const TermSum next = half ? symop::apply_d_half(cur, 1) : symop::apply_d_full(cur, 1);
        const symop::TermEvaluator ec(cur), en(next);
        for (double t : {0.7, 1.5}) {
          for (double x : {0.5, 1.0, 2.0}) {
            const double h = 1e-4;
            const double d = (ec.eval_double(x + h, t, 1e-15) - ec.eval_double(x - h, t, 1e-15)) / (2.0 * h);
            const double fd = -d / std::sinh(half ? x / 2.0 : x);
            const double ex = en.eval_double(x, t, 1e-15);
            worst_fd = std::max(worst_fd, std::fabs(fd - ex) / std::max(std::fabs(ex), 1e-300));
          }
        }
        cur = next;
      }
    }
  }
  const bool fd_ok = worst_fd <= 1e-5;
  c.notes.push_back(note_json("finite_difference", {{"max_m", "3"}, {"worst_rel_dev", decimal(worst_fd)}, {"tol", "1e-5"}}, fd_ok));
  // One-step results derived by hand.
  const mpq_class q2(1, 2), q4(1, 4), q8(1, 8);
  const TermSum full_gauss({HypTerm{q2, 1, 1, -1, -1}});
  const TermSum half_gauss({HypTerm{1, 1, 1, -1, 0}});
  const TermSum full_even({HypTerm{-q4, 0, 0, -2, -2}, HypTerm{q8, 1, 0, -3, -1}, HypTerm{q8, 1, 0, -1, -3},
                           HypTerm{q4, 2, 1, -2, -2}});
  const TermSum half_even({HypTerm{-q2, 0, 0, -2, -1}, HypTerm{q4, 1, 0, -3, 0}, HypTerm{q4, 1, 0, -1, -2},
                           HypTerm{q2, 2, 1, -2, -1}});
  const bool e1 = symop::apply_d_full(symop::seed_gaussian(), 1) == full_gauss;
  const bool e2 = symop::apply_d_half(symop::seed_gaussian(), 1) == half_gauss;
  const bool e3 = symop::apply_d_full(symop::seed_even_dim(), 1) == full_even;
  const bool e4 = symop::apply_d_half(symop::seed_even_dim(), 1) == half_even;
  const bool exact_ok = e1 && e2 && e3 && e4;
  c.notes.push_back(note_json("exact_one_step",
                              {{"full_gaussian", e1 ? "match" : "mismatch"},
                               {"half_gaussian", e2 ? "match" : "mismatch"},
                               {"full_even_seed", e3 ? "match" : "mismatch"},
                               {"half_even_seed", e4 ? "match" : "mismatch"}},
                              exact_ok));
  c.pass = fd_ok && exact_ok;
  c.summary = "finite differences m<=3 worst " + fmt_e(worst_fd) + " (tol 1e-5); exact one-step " +
              (exact_ok ? "4/4 match" : "mismatch");
}

void criterion_escalation(CriterionResult& c, const SuiteOptions& o) {
  const double t = 0.2;
  const int b = kOracleBits;
  double worst = 0.0;
  int min_bits = 1 << 30;
  bool ok = true;
  for (double r : {0.1, 0.5, 1.0, 2.0}) {
    ResidualReport rep;
    rep.identity = Identity::INT2;  // placeholder tag; serialized as a note instead
    const BigReal R(r, b);
    const BigReal pi = const_pi(b);
    const BigReal exact = exp(BigReal(-t / 2.0, b)) / (pi * 2.0 * sqrt(pi * (2.0 * t))) * R /
                          (BigReal(t, b) * sinh(R)) * exp(-(R * R) / (2.0 * t));
    std::string err;
    double dev = INFINITY;
    int bits = 0;
    try {
      PrecisionPolicy p = o.prec;
      p.mode = PrecisionPolicy::Mode::automatic;
      const auto v = kernels::gruet(3.0, t, r, p);
      dev = rel_dev(exact, v.value);
      bits = v.precision_bits;
    } catch (const std::exception& e) {
      err = e.what();
    }
    const bool pass = err.empty() && dev <= 1e-8 && bits > 53;
    ok = ok && pass;
    worst = std::max(worst, dev);
    min_bits = std::min(min_bits, bits);
    std::vector<std::pair<std::string, std::string>> f = {
        {"t", decimal(t)}, {"r", decimal(r)}, {"rel_dev", decimal(dev)}, {"precision_bits", std::to_string(bits)},
        {"tol", "1e-8"}};
    if (!err.empty()) f.push_back({"error", err});
    c.notes.push_back(note_json("gruet3_small_t", f, pass));
  }
  c.pass = ok;
  c.summary = "gruet(3) at t=0.2 vs closed form worst " + fmt_e(worst) + " (tol 1e-8) at >= " +
              std::to_string(min_bits) + " bits (~" +
              std::to_string(static_cast<int>(PrecisionPolicy::bits_to_digits(min_bits))) + " digits)";
}

const char* kTitles[kCriteria] = {
    "Identity suite",
    "Gruet vs Millson",
    "Gruet vs Jacobi spectral",
    "Damek-Ricci three-way",
    "Complex/quaternionic specializations",
    "Maass representations",
    "Mass conservation",
    "Symbolic engine",
    "Precision escalation",
};

}  // namespace

CriterionResult run_criterion(int id, const SuiteOptions& opts) {
  CriterionResult c;
  c.id = id;
  if (id < 1 || id > kCriteria) throw DomainError("no acceptance criterion " + std::to_string(id));
  c.title = kTitles[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: criterion_identities(c, opts); break;
      case 2: criterion_gruet_millson(c, opts); break;
      case 3: criterion_jacobi(c, opts); break;
      case 4: criterion_damek_ricci(c, opts); break;
      case 5: criterion_complex_quaternionic(c, opts); break;
      case 6: criterion_maass(c, opts); break;
      case 7: criterion_mass(c, opts); break;
      case 8: criterion_symbolic(c, opts); break;
      case 9: criterion_escalation(c, opts); break;
    }
  } catch (const std::exception& e) {
    c.pass = false;
    c.summary = std::string("error: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    out.push_back(run_criterion(id, opts));
    if (opts.on_result) opts.on_result(out.back());
  }
  return out;
}

}  // namespace hypheat::crosscheck
