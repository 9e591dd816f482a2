#pragma once

// Heat kernels of (1/2) x Laplacian-type operators on hyperbolic, Jacobi,
// Damek-Ricci and Maass spaces, each through several representations.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hypheat/hw.hpp"
#include "hypheat/quad.hpp"
#include "hypheat/scalar.hpp"

namespace hypheat::kernels {

enum class Space { real_hyperbolic, gruet_real, jacobi, damek_ricci, maass, complex_hyperbolic };

enum class Rep {
  millson,    // closed operator forms for H^n
  gruet,      // single oscillatory integral, real dimension
  spectral,   // Jacobi transform
  parity,     // Damek-Ricci closed forms by parity of k
  hw,         // Damek-Ricci through u(t/4, y) and K_nu
  single,     // Damek-Ricci single oscillatory integral with 2F1
  theta,      // Maass, Chebyshev form
  hw_2f0,     // Maass, u(t, z) and the Bessel polynomial
  matsumoto,  // complex hyperbolic closed form
};

std::string to_string(Space s);
std::string to_string(Rep r);
std::optional<Space> parse_space(const std::string& s);
std::optional<Rep> parse_rep(const std::string& s);

struct KernelValue {
  BigReal value;                        // the kernel, or the modulus for Maass
  std::complex<double> phase{1.0, 0.0};
  double err_est = 0.0;
  Rep rep = Rep::millson;
  int precision_bits = 53;
  double cancellation_digits = 0.0;
  std::vector<quad::QuadResult> diagnostics;

  double to_double() const { return value.to_double(); }
};

/// Which kernel to evaluate. Fields not used by the space are ignored.
struct KernelQuery {
  Space space = Space::real_hyperbolic;
  Rep rep = Rep::millson;
  double n = 3.0;    // real_hyperbolic (integer), gruet_real, complex_hyperbolic (integer)
  double nu = 0.5;   // jacobi
  int k = 0;         // damek_ricci, maass
  int m = 2;         // damek_ricci (even)
  double t = 1.0;
  double r = 0.0;    // radial spaces
  double w = 0.0;    // maass point w + i y
  double y = 1.0;
  double gamma = 0.125;  // jacobi spectral-gap exponent constant
  PrecisionPolicy prec{};

  /// Validates the invariants; throws DomainError.
  void validate() const;
};

KernelValue evaluate(const KernelQuery& q);

/// Representations available for a space.
std::vector<Rep> representations(Space s);

/// Volume density of the radial measure used by mass(): H^n uses
/// Omega_{n-1} sinh^{n-1} r, Jacobi 2 pi^{nu+1} sinh^{2nu+1} r / Gamma(nu+1),
/// Damek-Ricci sinh^{m+k}(r/2) cosh^k(r/2) (unnormalized).
double radial_weight(const KernelQuery& q, double r);

// ---------------------------------------------------------------------------
// Individual representations

/// H^{2m+1}: e^{-m^2 t/2} / ((2 pi)^m sqrt(2 pi t)) (-(1/sinh r) d/dr)^m e^{-r^2/2t}.
/// r = 0 is the limit.
KernelValue real_hyperbolic_odd(int m, double t, double r, const PrecisionPolicy& prec);

/// H^{2m+2}: sqrt2 e^{-(2m+1)^2 t/8} / ((2 pi t)^{3/2} (2 pi)^m) times
/// (-(1/sinh r) d/dr)^m int_r^inf theta e^{-theta^2/2t} (cosh theta - cosh r)^{-1/2} dtheta.
/// With u = cosh theta - cosh r the derivative passes onto the integrand
/// (d/d cosh r = -d/du), giving int_0^inf u^{-1/2} G_m(theta(u)) du where
/// G_m = (-(1/sinh) d/dtheta)^m [theta e^{-theta^2/2t} / sinh theta].
KernelValue real_hyperbolic_even(int m, double t, double r, const PrecisionPolicy& prec);

/// The same integral without the substitution (m = 0 only), for testing.
KernelValue real_hyperbolic_even_direct(double t, double r, const PrecisionPolicy& prec);

/// Oscillatory form valid for real n > 1.
KernelValue gruet(double n, double t, double r, const PrecisionPolicy& prec);

/// Spectral formula with Jacobi functions phi_p^{(nu, -1/2)}.
KernelValue jacobi_spectral(double nu, double t, double r, const PrecisionPolicy& prec, double gamma = 0.125);

KernelValue damek_ricci_parity(int k, int m, double t, double r, const PrecisionPolicy& prec);
KernelValue damek_ricci_hw(int k, int m, double t, double r, const PrecisionPolicy& prec);
KernelValue damek_ricci_single(int k, int m, double t, double r, const PrecisionPolicy& prec);

KernelValue complex_hyperbolic_matsumoto(int n, double t, double r, const PrecisionPolicy& prec);

/// Maass kernel between i and w + i y: modulus and unimodular phase.
KernelValue maass_theta(int k, double t, double w, double y, const PrecisionPolicy& prec);
KernelValue maass_hw(int k, double t, double w, double y, const PrecisionPolicy& prec);

std::complex<double> maass_phase(int k, double w, double y);
double hyperbolic_distance_h2(double w, double y);

}  // namespace hypheat::kernels
