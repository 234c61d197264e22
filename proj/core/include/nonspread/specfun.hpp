#pragma once

#include <functional>

#include "nonspread/types.hpp"

namespace nsp {

struct ComplexOrder {
  double re = 0.0;
  double im = 0.0;
  cplx value() const { return {re, im}; }
};

// Tolerances shared by the Bessel contour rule and the adaptive rapidity
// quadrature. For the Gauss-Kronrod integrals max_subdivisions caps the number
// of segments; the Bessel trapezoid rule is allowed 64 nodes per unit of it.
// On the rapidity line abs_tol is measured in units of the integrand's peak.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 20000;
  double truncation = 1e-14;  // relative size at which a tail is dropped

  void validate() const;
};

// K_nu(z) = exp(log_scale) * scaled. Keeping the scale separate lets callers
// multiply by large prefactors before leaving the exponent range.
struct BesselResult {
  cplx scaled;
  double log_scale = 0.0;
  double err = 0.0;  // absolute, in units of exp(log_scale)
  int nodes = 0;
  bool near_singular = false;  // |z| < 1e-6
  cplx value() const { return scaled * std::exp(log_scale); }
};

BesselResult bessel_k_scaled(cplx nu, cplx z, const QuadratureSpec& spec = {});
cplx bessel_k(ComplexOrder nu, cplx z, const QuadratureSpec& spec = {});
cplx bessel_k(cplx nu, cplx z, const QuadratureSpec& spec = {});

// Modified Struve function L_n(x) for n in {0, -1}.
double struve_l(int order, double x);

// Imaginary offset b -> b + i theta(b) applied to the rapidity line. The
// offset blends from theta_mag*sign_left at b -> -inf to theta_mag*sign_right
// at b -> +inf around b_switch. theta_mag = 0 is the plain real line.
struct RapidityContour {
  double theta_mag = 0.0;
  int sign_left = 0;
  int sign_right = 0;
  double b_switch = 0.0;
  double width = 1.0;

  cplx point(double b) const;
  cplx jacobian(double b) const;
};

struct RapidityIntegrand {
  std::function<Spinor4(cplx)> weight;
  std::function<cplx(cplx)> phase;
  double damping = 0.0;  // the abar of the e^{-abar cosh b} envelope
};

struct RapidityResult {
  Spinor4 value;
  double err = 0.0;
  int subdivisions = 0;
  double b_lo = 0.0;
  double b_hi = 0.0;
};

RapidityResult rapidity_integral(const RapidityIntegrand& integrand,
                                 const QuadratureSpec& spec = {},
                                 const RapidityContour& contour = {});

}  // namespace nsp
