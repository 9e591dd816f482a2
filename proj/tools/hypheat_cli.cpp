// hypheat: evaluate and cross-check heat kernels from the command line.
//
// Exit codes: 0 success, 1 a check failed, 2 bad arguments, 3 no convergence.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypheat/crosscheck.hpp"
#include "hypheat/hw.hpp"
#include "hypheat/kernels.hpp"
#include "hypheat/parallel.hpp"

using namespace hypheat;
using kernels::KernelQuery;
using kernels::KernelValue;
using kernels::Rep;
using kernels::Space;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double to_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw UsageError("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

/// "x", "a,b,c" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto p = split(spec, ':');
    if (p.size() != 3) throw UsageError("grid '" + spec + "' must be start:stop:count");
    const double a = to_number(p[0]);
    const double b = to_number(p[1]);
    const double n = to_number(p[2]);
    if (n < 1 || n != std::floor(n)) throw UsageError("grid count must be a positive integer");
    const int count = static_cast<int>(n);
    if (count == 1) return {a};
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = i + 1 == count ? b : a + (b - a) * i / (count - 1);
    return g;
  }
  std::vector<double> g;
  for (const auto& s : split(spec, ',')) g.push_back(to_number(s));
  if (g.empty()) throw UsageError("empty grid");
  return g;
}

struct Common {
  int threads = 0;
  std::string precision = "auto";
  double tol = 1e-12;
  double t_min = 0.1;
  std::string format = "csv";

  /// `tol_is_target`: --tol sets the evaluation target (otherwise only --target-tol does).
  void add(CLI::App* app, bool tol_is_target = true) {
    app->add_option("--threads", threads, "Worker threads (default: HYPHEAT_THREADS or all cores)");
    app->add_option("--precision", precision, "auto, or a fixed number of bits")->capture_default_str();
    app->add_option(tol_is_target ? "--tol,--target-tol" : "--target-tol", tol,
                    "Target relative tolerance of each evaluation")
        ->capture_default_str();
    app->add_option("--t-min", t_min, "Smallest t accepted by oscillatory evaluators")->capture_default_str();
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  }

  int nthreads() const { return threads > 0 ? threads : default_threads(); }

  PrecisionPolicy policy() const {
    if (!(tol > 0.0 && tol < 1.0)) throw UsageError("tolerance must lie in (0, 1)");
    if (!(t_min > 0.0)) throw UsageError("--t-min must be positive");
    PrecisionPolicy p;
    if (precision == "auto") {
      p = PrecisionPolicy::automatic(tol);
    } else {
      const double b = to_number(precision);
      if (b < 24 || b != std::floor(b)) throw UsageError("--precision must be 'auto' or an integer >= 24");
      p = PrecisionPolicy::fixed(static_cast<int>(b), tol);
    }
    return p.with_t_min(t_min);
  }
};

struct KernelParams {
  double n = 3.0;
  double nu = 0.5;
  int k = 0;
  int m = 2;
  double gamma = 0.125;

  void add(CLI::App* app) {
    app->add_option("--n", n, "Dimension (real, gruet, complex)")->capture_default_str();
    app->add_option("--nu", nu, "Jacobi parameter")->capture_default_str();
    app->add_option("--k", k, "Damek-Ricci center dimension or Maass weight")->capture_default_str();
    app->add_option("--m", m, "Damek-Ricci dimension m (even)")->capture_default_str();
    app->add_option("--gamma", gamma, "Jacobi spectral-gap exponent constant")->capture_default_str();
  }

  void apply(KernelQuery& q) const {
    q.n = n;
    q.nu = nu;
    q.k = k;
    q.m = m;
    q.gamma = gamma;
  }
};

Space need_space(const std::string& s) {
  auto v = kernels::parse_space(s);
  if (!v) throw UsageError("unknown space '" + s + "' (real, gruet, jacobi, damek-ricci, maass, complex)");
  return *v;
}

Rep need_rep(const std::string& s) {
  auto v = kernels::parse_rep(s);
  if (!v) throw UsageError("unknown representation '" + s + "'");
  return *v;
}

/// "space:rep[:key=value;key=value]".
KernelQuery parse_kernel(const std::string& spec, const PrecisionPolicy& prec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3) throw UsageError("kernel '" + spec + "' must be space:rep[:k=v;...]");
  KernelQuery q;
  q.space = need_space(parts[0]);
  q.rep = need_rep(parts[1]);
  q.prec = prec;
  if (parts.size() == 3) {
    for (const auto& kv : split(parts[2], ';')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("parameter '" + kv + "' must be key=value");
      const std::string key = kv.substr(0, eq);
      const double v = to_number(kv.substr(eq + 1));
      if (key == "n") q.n = v;
      else if (key == "nu") q.nu = v;
      else if (key == "k") q.k = static_cast<int>(v);
      else if (key == "m") q.m = static_cast<int>(v);
      else if (key == "gamma") q.gamma = v;
      else throw UsageError("unknown kernel parameter '" + key + "'");
    }
  }
  return q;
}

/// Grid over t and either r or (w, y).
std::vector<crosscheck::GridPoint> make_points(Space s, const std::string& t, const std::string& r,
                                               const std::string& w, const std::string& y) {
  std::vector<crosscheck::GridPoint> pts;
  for (double tt : parse_grid(t)) {
    if (s == Space::maass) {
      for (double ww : parse_grid(w)) {
        for (double yy : parse_grid(y)) pts.push_back({tt, kernels::hyperbolic_distance_h2(ww, yy), ww, yy});
      }
    } else {
      for (double rr : parse_grid(r)) pts.push_back({tt, rr, 0.0, 1.0});
    }
  }
  return pts;
}

KernelQuery at(KernelQuery q, const crosscheck::GridPoint& p) {
  q.t = p.t;
  q.r = p.r;
  q.w = p.w;
  q.y = p.y;
  return q;
}

std::string params_string(const KernelQuery& q) {
  using crosscheck::decimal;
  switch (q.space) {
    case Space::real_hyperbolic:
    case Space::gruet_real:
    case Space::complex_hyperbolic: return "n=" + decimal(q.n);
    case Space::jacobi: return "nu=" + decimal(q.nu) + ";gamma=" + decimal(q.gamma);
    case Space::damek_ricci: return "k=" + std::to_string(q.k) + ";m=" + std::to_string(q.m);
    case Space::maass: return "k=" + std::to_string(q.k);
  }
  return "";
}

std::string point_string(const KernelQuery& q) {
  using crosscheck::decimal;
  return q.space == Space::maass ? decimal(q.w) + ";" + decimal(q.y) : decimal(q.r);
}

/// All digits carried by the working precision (at least 17).
std::string value_string(const BigReal& v, int bits) {
  const int digits = std::max(17, static_cast<int>(std::ceil(PrecisionPolicy::bits_to_digits(bits))));
  return v.to_string(digits);
}

/// "t=0.5:4:4,r=0.1:4:5": per-axis grids. A comma item without '=' continues
/// the previous axis, so "t=0.5,1,r=2" is t in {0.5, 1}, r = 2.
void apply_grid(const std::string& spec, std::map<std::string, std::string*> axes) {
  std::string* cur = nullptr;
  std::map<std::string, bool> seen;
  for (const auto& item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      if (!cur) throw UsageError("grid '" + spec + "' must start with axis=values");
      *cur += "," + item;
      continue;
    }
    const std::string axis = item.substr(0, eq);
    auto it = axes.find(axis);
    if (it == axes.end()) throw UsageError("unknown grid axis '" + axis + "'");
    if (seen[axis]) throw UsageError("grid axis '" + axis + "' given twice");
    seen[axis] = true;
    cur = it->second;
    *cur = item.substr(eq + 1);
  }
}

/// Evaluates all points in parallel; rethrows the first failure.
std::vector<KernelValue> evaluate_all(const std::vector<KernelQuery>& qs, int threads) {
  std::vector<KernelValue> out(qs.size());
  parallel_for(qs.size(), threads, [&](std::size_t i) { out[i] = kernels::evaluate(qs[i]); });
  return out;
}

// --- subcommands -------------------------------------------------------------

struct EvalCmd {
  Common common;
  KernelParams kp;
  std::string space, rep, t = "1", r = "1", w = "0", y = "1", grid;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("eval", "Evaluate one kernel representation on a grid");
    common.add(c);
    kp.add(c);
    c->add_option("--space", space, "real, gruet, jacobi, damek-ricci, maass, complex")->required();
    c->add_option("--rep", rep, "Representation (default: the first available)");
    c->add_option("--t", t, "Time grid")->capture_default_str();
    c->add_option("--r", r, "Distance grid")->capture_default_str();
    c->add_option("--w", w, "Maass: real part grid")->capture_default_str();
    c->add_option("--y", y, "Maass: imaginary part grid")->capture_default_str();
    c->add_option("--grid", grid, "All axes at once, e.g. t=0.5:4:4,r=0.1:4:5");
    c->callback([this] { run(); });
  }

  void run() {
    if (!grid.empty()) apply_grid(grid, {{"t", &t}, {"r", &r}, {"w", &w}, {"y", &y}});
    KernelQuery base;
    base.space = need_space(space);
    base.rep = rep.empty() ? kernels::representations(base.space).front() : need_rep(rep);
    base.prec = common.policy();
    kp.apply(base);
    std::vector<KernelQuery> qs;
    for (const auto& p : make_points(base.space, t, r, w, y)) qs.push_back(at(base, p));
    for (const auto& q : qs) q.validate();
    const auto vals = evaluate_all(qs, common.nthreads());
    const bool maass = base.space == Space::maass;
    if (common.format == "csv") {
      std::printf("space,params,rep,t,%s,value,err_est,precision_bits,cancellation_digits%s\n", maass ? "w;y" : "r",
                  maass ? ",phase_re,phase_im" : "");
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const auto& q = qs[i];
      const auto& v = vals[i];
      if (common.format == "csv") {
        std::printf("%s,%s,%s,%s,%s,%s,%s,%d,%s", kernels::to_string(q.space).c_str(), params_string(q).c_str(),
                    kernels::to_string(v.rep).c_str(), crosscheck::decimal(q.t).c_str(), point_string(q).c_str(),
                    value_string(v.value, v.precision_bits).c_str(), crosscheck::decimal(v.err_est).c_str(), v.precision_bits,
                    crosscheck::decimal(v.cancellation_digits).c_str());
        if (maass) {
          std::printf(",%s,%s", crosscheck::decimal(v.phase.real()).c_str(), crosscheck::decimal(v.phase.imag()).c_str());
        }
        std::printf("\n");
      } else {
        json j;
        j["space"] = kernels::to_string(q.space);
        j["params"] = params_string(q);
        j["rep"] = kernels::to_string(v.rep);
        j["t"] = crosscheck::decimal(q.t);
        if (maass) {
          j["w"] = crosscheck::decimal(q.w);
          j["y"] = crosscheck::decimal(q.y);
          j["phase"] = {crosscheck::decimal(v.phase.real()), crosscheck::decimal(v.phase.imag())};
        } else {
          j["r"] = crosscheck::decimal(q.r);
        }
        j["value"] = value_string(v.value, v.precision_bits);
        j["err_est"] = crosscheck::decimal(v.err_est);
        j["precision_bits"] = v.precision_bits;
        j["cancellation_digits"] = crosscheck::decimal(v.cancellation_digits);
        std::printf("%s\n", j.dump().c_str());
      }
    }
  }
};

struct CompareCmd {
  Common common;
  KernelParams kp;
  std::string space, reps, a, b, mode = "equality", t = "0.5,1,2,4", r = "0.1,0.5,1,2,4", w = "0", y = "1", grid;
  double tol = 1e-6, scale_t = 1.0, scale_r = 1.0;
  int* exit_code;

  explicit CompareCmd(int* ec) : exit_code(ec) {}

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("compare", "Compare two representations on a grid");
    common.add(c, false);
    kp.add(c);
    c->add_option("--space", space, "Space shared by both representations");
    c->add_option("--reps", reps, "Two representations of --space, e.g. millson,gruet");
    c->add_option("--a", a, "First kernel as space:rep[:k=v;...] (instead of --space/--reps)");
    c->add_option("--b", b, "Second kernel as space:rep[:k=v;...]");
    c->add_option("--mode", mode, "equality or ratio")->check(CLI::IsMember({"equality", "ratio"}))->capture_default_str();
    c->add_option("--tol", tol, "Pass threshold on the worst relative deviation")->capture_default_str();
    c->add_option("--scale-t", scale_t, "Evaluate the second kernel at t * scale")->capture_default_str();
    c->add_option("--scale-r", scale_r, "Evaluate the second kernel at r * scale")->capture_default_str();
    c->add_option("--t", t, "Time grid")->capture_default_str();
    c->add_option("--r", r, "Distance grid")->capture_default_str();
    c->add_option("--w", w, "Maass: real part grid")->capture_default_str();
    c->add_option("--y", y, "Maass: imaginary part grid")->capture_default_str();
    c->add_option("--grid", grid, "All axes at once, e.g. t=0.5:4:4,r=0.1:4:5");
    c->callback([this] { run(); });
  }

  void run() {
    if (!grid.empty()) apply_grid(grid, {{"t", &t}, {"r", &r}, {"w", &w}, {"y", &y}});
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
    const auto prec = common.policy();
    KernelQuery qa, qb;
    if (!reps.empty()) {
      if (space.empty() || !a.empty() || !b.empty()) throw UsageError("--reps needs --space and excludes --a/--b");
      const auto names = split(reps, ',');
      if (names.size() != 2) throw UsageError("--reps takes exactly two representations");
      qa.space = need_space(space);
      qa.prec = prec;
      kp.apply(qa);
      qb = qa;
      qa.rep = need_rep(names[0]);
      qb.rep = need_rep(names[1]);
    } else {
      if (a.empty() || b.empty()) throw UsageError("give --space with --reps, or both --a and --b");
      qa = parse_kernel(a, prec);
      qb = parse_kernel(b, prec);
    }
    const auto points = make_points(qa.space, t, r, w, y);
    for (const auto& p : points) {
      at(qa, p).validate();
      KernelQuery sb = at(qb, p);
      sb.t *= scale_t;
      sb.r *= scale_r;
      sb.validate();
    }
    const auto rep = crosscheck::compare(qa, qb, points, mode == "ratio" ? crosscheck::CompareMode::ratio
                                                                         : crosscheck::CompareMode::equality,
                                         tol, common.nthreads(), {scale_t, scale_r});
    if (!rep.error.empty()) throw ConvergenceError(rep.error);
    if (common.format == "json") {
      std::printf("%s\n", crosscheck::to_json(rep).c_str());
    } else {
      const bool maass = qa.space == Space::maass;
      std::printf("t,%s,a,b,rel_dev\n", maass ? "w;y" : "r");
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double va = rep.values_a[i];
        const double vb = rep.values_b[i] * (rep.mode == crosscheck::CompareMode::ratio ? rep.constant_estimate : 1.0);
        std::printf("%s,%s,%s,%s,%s\n", crosscheck::decimal(points[i].t).c_str(), point_string(at(qa, points[i])).c_str(),
                    crosscheck::decimal(rep.values_a[i]).c_str(), crosscheck::decimal(rep.values_b[i]).c_str(),
                    crosscheck::decimal(std::fabs(va - vb) / std::max(std::fabs(va), std::fabs(vb))).c_str());
      }
      std::printf("# %s vs %s: %s, worst %s, constant %s, tol %s: %s\n", rep.rep_a.c_str(), rep.rep_b.c_str(),
                  mode.c_str(), crosscheck::decimal(rep.worst_rel_dev).c_str(),
                  crosscheck::decimal(rep.constant_estimate).c_str(), crosscheck::decimal(tol).c_str(),
                  rep.pass ? "PASS" : "FAIL");
    }
    if (!rep.pass) *exit_code = kExitCheckFailed;
  }
};

struct SelftestCmd {
  Common common;
  std::vector<int> criteria;
  std::vector<std::string> identities;
  std::vector<std::string> params;
  int* exit_code;

  explicit SelftestCmd(int* ec) : exit_code(ec) {}

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("selftest", "Run the acceptance criteria or single identity residuals");
    common.add(c, false);
    c->add_option("--criteria", criteria, "Criterion ids 1-9 (default: all)")->check(CLI::Range(1, crosscheck::kCriteria));
    c->add_option("--identity", identities, "Evaluate identity residuals instead (INT1, ..., BETA_PRIME)");
    c->add_option("--param", params, "Identity parameter key=value, repeatable");
    c->callback([this] { run(); });
  }

  void run() {
    if (!identities.empty()) {
      crosscheck::Params p;
      for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--param '" + kv + "' must be key=value");
        p.push_back({kv.substr(0, eq), to_number(kv.substr(eq + 1))});
      }
      bool any_error = false;
      if (common.format == "csv") std::printf("identity,params,lhs,rhs,rel_residual,tol,pass\n");
      for (const auto& name : identities) {
        const auto id = crosscheck::parse_identity(name);
        if (!id) throw UsageError("unknown identity '" + name + "'");
        const auto r = crosscheck::residual(*id, p, common.policy());
        if (!r.error.empty()) {
          std::fprintf(stderr, "%s: %s\n", name.c_str(), r.error.c_str());
          any_error = true;
          continue;
        }
        if (common.format == "json") {
          std::printf("%s\n", crosscheck::to_json(r).c_str());
        } else {
          std::string ps;
          for (const auto& [k, v] : p) ps += (ps.empty() ? "" : ";") + k + "=" + crosscheck::decimal(v);
          std::printf("%s,%s,%s,%s,%s,%s,%s\n", name.c_str(), ps.c_str(), r.lhs.to_string(0).c_str(),
                      r.rhs.to_string(0).c_str(), crosscheck::decimal(r.rel_residual).c_str(),
                      crosscheck::decimal(r.tol).c_str(), r.pass ? "true" : "false");
        }
        if (!r.pass) *exit_code = kExitCheckFailed;
      }
      if (any_error) throw ConvergenceError("identity evaluation failed");
      return;
    }
    crosscheck::SuiteOptions opts;
    opts.threads = common.nthreads();
    opts.prec = common.policy();
    opts.only = criteria;
    const bool as_json = common.format == "json";
    opts.on_result = [as_json](const crosscheck::CriterionResult& c) {
      if (as_json) {
        json j;
        j["criterion"] = c.id;
        j["title"] = c.title;
        j["pass"] = c.pass;
        j["summary"] = c.summary;
        j["seconds"] = crosscheck::decimal(c.seconds);
        auto details = json::array();
        for (const auto& r : c.residuals) details.push_back(json::parse(crosscheck::to_json(r)));
        for (const auto& r : c.comparisons) details.push_back(json::parse(crosscheck::to_json(r)));
        for (const auto& r : c.masses) details.push_back(json::parse(crosscheck::to_json(r)));
        for (const auto& n : c.notes) details.push_back(json::parse(n));
        j["details"] = details;
        std::printf("%s\n", j.dump().c_str());
      } else {
        std::printf("[%s] %d %s: %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), c.summary.c_str(),
                    c.seconds);
      }
      std::fflush(stdout);
    };
    const auto res = crosscheck::run_acceptance_suite(opts);
    for (const auto& c : res) {
      if (!c.pass) *exit_code = kExitCheckFailed;
    }
  }
};

struct HwCmd {
  Common common;
  std::string t = "1", y = "0.5,1,2", grid;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("hw", "Hartman-Watson density u(t, y) on a grid");
    common.add(c);
    c->add_option("--t", t, "Time grid")->capture_default_str();
    c->add_option("--y", y, "y grid (y > 0)")->capture_default_str();
    c->add_option("--grid", grid, "Both axes at once, e.g. t=0.5:2:4,y=0.1:5:50");
    c->callback([this] { run(); });
  }

  void run() {
    if (!grid.empty()) apply_grid(grid, {{"t", &t}, {"y", &y}});
    const auto prec = common.policy();
    const auto ts = parse_grid(t);
    const auto ys = parse_grid(y);
    for (double v : ts) {
      if (!(v > 0.0)) throw UsageError("t must be positive");
    }
    for (double v : ys) {
      if (!(v > 0.0)) throw UsageError("y must be positive");
    }
    struct Row {
      double t, y;
      hw::HWResult res;
    };
    std::vector<Row> rows;
    for (double tt : ts) {
      for (double yy : ys) rows.push_back({tt, yy, {}});
    }
    parallel_for(rows.size(), common.nthreads(), [&](std::size_t i) {
      rows[i].res = hw::shared_evaluator(rows[i].t, prec)->density_detail(rows[i].y);
    });
    if (common.format == "csv") std::printf("t,y,value,err_est,precision_bits,cancellation_digits\n");
    for (const auto& row : rows) {
      const auto& q = row.res.integral;
      if (common.format == "csv") {
        std::printf("%s,%s,%s,%s,%d,%s\n", crosscheck::decimal(row.t).c_str(), crosscheck::decimal(row.y).c_str(),
                    value_string(row.res.value, q.precision_bits).c_str(), crosscheck::decimal(q.err_est).c_str(), q.precision_bits,
                    crosscheck::decimal(q.cancellation_digits).c_str());
      } else {
        json j;
        j["t"] = crosscheck::decimal(row.t);
        j["y"] = crosscheck::decimal(row.y);
        j["value"] = value_string(row.res.value, q.precision_bits);
        j["err_est"] = crosscheck::decimal(q.err_est);
        j["precision_bits"] = q.precision_bits;
        j["cancellation_digits"] = crosscheck::decimal(q.cancellation_digits);
        std::printf("%s\n", j.dump().c_str());
      }
    }
  }
};

struct TableCmd {
  Common common;
  KernelParams kp;
  std::string space, t = "0.5,1,2", r = "0.5,1,2", w = "0", y = "1", grid;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("table", "All representations of one kernel side by side");
    common.add(c);
    kp.add(c);
    c->add_option("--space", space, "real, gruet, jacobi, damek-ricci, maass, complex")->required();
    c->add_option("--t", t, "Time grid")->capture_default_str();
    c->add_option("--r", r, "Distance grid")->capture_default_str();
    c->add_option("--w", w, "Maass: real part grid")->capture_default_str();
    c->add_option("--y", y, "Maass: imaginary part grid")->capture_default_str();
    c->add_option("--grid", grid, "All axes at once, e.g. t=0.5:4:4,r=0.1:4:5");
    c->callback([this] { run(); });
  }

  void run() {
    if (!grid.empty()) apply_grid(grid, {{"t", &t}, {"r", &r}, {"w", &w}, {"y", &y}});
    KernelQuery base;
    base.space = need_space(space);
    base.prec = common.policy();
    kp.apply(base);
    const auto reps = kernels::representations(base.space);
    const auto pts = make_points(base.space, t, r, w, y);
    std::vector<KernelQuery> qs;
    for (const auto& p : pts) {
      for (Rep rp : reps) {
        KernelQuery q = at(base, p);
        q.rep = rp;
        q.validate();
        qs.push_back(q);
      }
    }
    const auto vals = evaluate_all(qs, common.nthreads());
    const bool maass = base.space == Space::maass;
    auto cell = [](const KernelValue& v) { return value_string(v.value, v.precision_bits); };
    if (common.format == "csv") {
      std::printf("space,params,t,%s", maass ? "w;y" : "r");
      for (Rep rp : reps) std::printf(",%s", kernels::to_string(rp).c_str());
      std::printf(",max_rel_spread\n");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const KernelQuery& q0 = qs[i * reps.size()];
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t j = 0; j < reps.size(); ++j) {
        const double v = vals[i * reps.size() + j].to_double();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double spread = (hi - lo) / std::max(std::fabs(hi), std::fabs(lo));
      if (common.format == "csv") {
        std::printf("%s,%s,%s,%s", kernels::to_string(base.space).c_str(), params_string(q0).c_str(),
                    crosscheck::decimal(q0.t).c_str(), point_string(q0).c_str());
        for (std::size_t j = 0; j < reps.size(); ++j) std::printf(",%s", cell(vals[i * reps.size() + j]).c_str());
        std::printf(",%s\n", crosscheck::decimal(spread).c_str());
      } else {
        json j;
        j["space"] = kernels::to_string(base.space);
        j["params"] = params_string(q0);
        j["t"] = crosscheck::decimal(q0.t);
        if (maass) {
          j["w"] = crosscheck::decimal(q0.w);
          j["y"] = crosscheck::decimal(q0.y);
        } else {
          j["r"] = crosscheck::decimal(q0.r);
        }
        json v;
        for (std::size_t k = 0; k < reps.size(); ++k) {
          v[kernels::to_string(reps[k])] = cell(vals[i * reps.size() + k]);
        }
        j["values"] = v;
        j["max_rel_spread"] = crosscheck::decimal(spread);
        std::printf("%s\n", j.dump().c_str());
      }
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  int exit_code = kExitOk;
  CLI::App app{"Heat kernels on hyperbolic spaces: evaluation and cross-checks"};
  app.require_subcommand(1);
  EvalCmd eval;
  CompareCmd cmp(&exit_code);
  SelftestCmd self(&exit_code);
  HwCmd hwc;
  TableCmd table;
  eval.add(app);
  cmp.add(app);
  self.add(app);
  hwc.add(app);
  table.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "no convergence: %s\n", e.what());
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
  return exit_code;
}
