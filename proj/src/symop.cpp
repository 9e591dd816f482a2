#include "hypheat/symop.hpp"

#include <sstream>

namespace hypheat::symop {

TermSum::TermSum(const std::vector<HypTerm>& terms) {
  for (const auto& t : terms) add(t);
}

void TermSum::add(const HypTerm& t) {
  if (t.coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(t.key(), t.coeff);
  if (!inserted) {
    it->second += t.coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void TermSum::add(const TermSum& other) {
  for (const auto& [k, c] : other.terms_) add({c, k.a, k.q, k.b, k.c});
}

std::vector<HypTerm> TermSum::terms() const {
  std::vector<HypTerm> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_) out.push_back({c, k.a, k.q, k.b, k.c});
  return out;
}

std::string TermSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << '\n';
    first = false;
    os << c.get_str() << " * x^" << k.a << " * t^-" << k.q << " * sh^" << k.b << " * ch^" << k.c << " * G";
  }
  return os.str();
}

TermSum canonicalize(const std::vector<HypTerm>& terms) { return TermSum(terms); }

TermSum seed_gaussian() { return TermSum({HypTerm{1, 0, 0, 0, 0}}); }

TermSum seed_even_dim() { return TermSum({HypTerm{mpq_class(1, 2), 1, 0, -1, -1}}); }

TermSum differentiate(const TermSum& ts) {
  TermSum out;
  for (const auto& [k, c] : ts.raw()) {
    if (k.a != 0) out.add({c * k.a, k.a - 1, k.q, k.b, k.c});
    // d/dx sinh(x/2)^b = (b/2) sinh^{b-1} cosh
    if (k.b != 0) out.add({c * mpq_class(k.b, 2), k.a, k.q, k.b - 1, k.c + 1});
    // d/dx cosh(x/2)^c = (c/2) cosh^{c-1} sinh
    if (k.c != 0) out.add({c * mpq_class(k.c, 2), k.a, k.q, k.b + 1, k.c - 1});
    // Gaussian factor: -x/t
    out.add({-c, k.a + 1, k.q + 1, k.b, k.c});
  }
  return out;
}

namespace {

TermSum multiply(const TermSum& ts, const mpq_class& factor, int db, int dc) {
  TermSum out;
  for (const auto& [k, c] : ts.raw()) out.add({c * factor, k.a, k.q, k.b + db, k.c + dc});
  return out;
}

}  // namespace

TermSum apply_d_full(const TermSum& ts, int times) {
  if (times < 0) throw DomainError("apply_d_full: negative count");
  TermSum cur = ts;
  // -1/sinh x = -(1/2) sinh(x/2)^{-1} cosh(x/2)^{-1}
  for (int i = 0; i < times; ++i) cur = multiply(differentiate(cur), mpq_class(-1, 2), -1, -1);
  return cur;
}

TermSum apply_d_half(const TermSum& ts, int times) {
  if (times < 0) throw DomainError("apply_d_half: negative count");
  TermSum cur = ts;
  for (int i = 0; i < times; ++i) cur = multiply(differentiate(cur), mpq_class(-1), -1, 0);
  return cur;
}

TermEvaluator::TermEvaluator(const TermSum& ts) : ts_(ts), list_(ts.terms()) {
  for (const auto& t : list_) {
    coeff_d_.push_back(t.coeff.get_d());
    if (t.b < 0) singular_at_zero_ = true;
  }
}

BigReal TermEvaluator::eval_auto(double x, double t, double rel_tol, int max_bits) const {
  if (!(t > 0.0)) throw DomainError("eval_termsum: t must be positive");
  if (x < 0.0) throw DomainError("eval_termsum: x must be nonnegative");
  if (x == 0.0 && singular_at_zero_) x = std::ldexp(1.0, -40);
  const double target = -std::log10(rel_tol);
  double loss = 0.0;
  const double v = eval<double>(x, t, 53, &loss);
  if (15.0 - loss >= target + 1.0 && std::isfinite(v)) return BigReal(v, 64);
  int bits = PrecisionPolicy::digits_to_bits(target + loss + 6);
  while (true) {
    if (bits > max_bits) throw PrecisionError("eval_termsum: cancellation exceeds the precision ceiling", bits);
    double l2 = 0.0;
    BigReal r = eval<BigReal>(BigReal(x, bits), BigReal(t, bits), bits, &l2);
    if (PrecisionPolicy::bits_to_digits(bits) - l2 >= target + 2.0) return r;
    bits = std::max(bits + 32, PrecisionPolicy::digits_to_bits(target + l2 + 6));
  }
}

double TermEvaluator::eval_double(double x, double t, double rel_tol) const {
  return eval_auto(x, t, rel_tol).to_double();
}

BigReal eval_termsum(const TermSum& ts, double x, double t, const PrecisionPolicy& prec) {
  TermEvaluator ev(ts);
  if (x == 0.0 && ev.singular_at_zero()) {
    throw SingularEvaluationError("eval_termsum: negative sinh power at x = 0");
  }
  if (prec.is_fixed()) {
    const int bits = prec.fixed_bits;
    if (bits <= 53) return BigReal(ev.eval<double>(x, t, 53), 64);
    return ev.eval<BigReal>(BigReal(x, bits), BigReal(t, bits), bits);
  }
  return ev.eval_auto(x, t, prec.target_rel_tol, prec.max_bits);
}

BigReal eval_termsum_limit(const TermSum& ts, double x, double t, const PrecisionPolicy& prec) {
  TermEvaluator ev(ts);
  if (prec.is_fixed() && !(x == 0.0 && ev.singular_at_zero())) return eval_termsum(ts, x, t, prec);
  return ev.eval_auto(x, t, prec.target_rel_tol, prec.max_bits);
}

}  // namespace hypheat::symop
