#include "nonspread/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nonspread/quadrature.hpp"

namespace nsp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::Range: return "range";
    case ErrorKind::NoDamping: return "no-damping";
    case ErrorKind::Wedge: return "wedge";
    case ErrorKind::Masked: return "masked";
    case ErrorKind::Inversion: return "inversion";
    case ErrorKind::MultivaluedInverse: return "multivalued-inverse";
    case ErrorKind::Applicability: return "applicability";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::Sign: return "sign";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw Error(ErrorKind::Domain, "quadrature tolerances must be positive");
  if (max_subdivisions < 1)
    throw Error(ErrorKind::Domain, "max_subdivisions must be at least 1");
  if (!(truncation > 0.0) || !(truncation < abs_tol / 10.0))
    throw Error(ErrorKind::Domain, "truncation threshold must lie in (0, abs_tol/10)");
}

namespace {

// Peak of Re(-z cosh t + nu t) along the flat line Im t = theta restricted to
// |Re t| <= s1, for z = r e^{i chi}. On that line the real part is
// -A e^s - B e^{-s} + nu_re s - nu_im theta with A, B >= 0 when
// |theta| <= pi/2 - |chi|; the maximiser solves a quadratic in e^s.
double line_peak(double r, double chi, cplx nu, double theta, double s1) {
  const double A = 0.5 * r * std::max(std::cos(chi + theta), 0.0);
  const double B = 0.5 * r * std::max(std::cos(chi - theta), 0.0);
  const double nr = nu.real();
  double s;
  if (A > 0.0) {
    s = std::log((nr + std::sqrt(nr * nr + 4.0 * A * B)) / (2.0 * A));
  } else {
    s = (nr > 0.0) ? s1 : (B > 0.0 ? std::log(std::max(B / std::max(-nr, 1e-300), 1e-300)) : -s1);
  }
  if (!std::isfinite(s)) s = (nr >= 0.0) ? s1 : -s1;
  s = std::clamp(s, -s1, s1);
  return -A * std::exp(s) - B * std::exp(-s) + nr * s - nu.imag() * theta;
}

double best_height(double r, double chi, cplx nu, double s1) {
  const double span = 0.5 * pi - std::abs(chi);
  if (span <= 0.0) return 0.0;
  const double lo = -span;
  const double hi = span;
  constexpr int kSamples = 96;
  int best = 0;
  double best_val = line_peak(r, chi, nu, lo, s1);
  for (int i = 1; i <= kSamples; ++i) {
    const double v = line_peak(r, chi, nu, lo + (hi - lo) * i / kSamples, s1);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kSamples;
  double b = lo + (hi - lo) * std::min(best + 1, kSamples) / kSamples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 40; ++it) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (line_peak(r, chi, nu, c, s1) < line_peak(r, chi, nu, d, s1))
      b = d;
    else
      a = c;
  }
  return 0.5 * (a + b);
}

// log Gamma(z) for complex z via the Lanczos approximation (g = 7, n = 9),
// with reflection for Re z < 1/2. Only exp() of the result is used, so the
// branch of the imaginary part does not matter.
cplx log_gamma(cplx z) {
  static constexpr double kCoef[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  z -= 1.0;
  cplx x = kCoef[0];
  for (int i = 1; i < 9; ++i) x += kCoef[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// I_nu(z) from its ascending series.
cplx bessel_i_series(cplx nu, cplx z, double& magnitude) {
  const cplx q = 0.25 * z * z;
  cplx term = 1.0;
  cplx sum = 1.0;
  double biggest = 1.0;
  for (int k = 0; k < 500; ++k) {
    term *= q / ((k + 1.0) * (nu + (k + 1.0)));
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  const cplx pre = std::exp(nu * std::log(0.5 * z) - log_gamma(nu + 1.0));
  magnitude = std::abs(pre) * biggest;
  return pre * sum;
}

}  // namespace

BesselResult bessel_k_scaled(cplx nu, cplx z, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(nu.real()) ||
      !std::isfinite(nu.imag()))
    throw Error(ErrorKind::Domain, "bessel_k: non-finite argument");
  if (z == cplx(0.0, 0.0)) throw Error(ErrorKind::Domain, "bessel_k: z = 0");
  if (z.real() < 0.0) throw Error(ErrorKind::Domain, "bessel_k: Re z < 0 is outside the principal sheet");

  // Small |z|: K = pi/(2 sin nu pi) (I_{-nu} - I_nu). For complex nu both
  // terms are as small as K itself, so nothing cancels; integer orders are
  // left to the contour rule.
  const cplx sin_nu = std::sin(pi * nu);
  if (std::abs(z) <= 2.0 && std::abs(sin_nu) > 1e-3) {
    double m1 = 0.0, m2 = 0.0;
    const cplx im = bessel_i_series(-nu, z, m1);
    const cplx ip = bessel_i_series(nu, z, m2);
    const cplx fac = pi / (2.0 * sin_nu);
    BesselResult out;
    out.scaled = fac * (im - ip);
    out.err = 1e-15 * std::abs(fac) * (m1 + m2);
    out.nodes = 0;
    out.near_singular = std::abs(z) < 1e-6;
    return out;
  }

  // K is even in nu and obeys conj K_nu(z) = K_{conj nu}(conj z); fold the
  // order into the first quadrant. arg z may then lie anywhere in [-pi/2, pi/2].
  if (nu.real() < 0.0) nu = -nu;
  bool conj_out = false;
  if (nu.imag() < 0.0) {
    nu = std::conj(nu);
    z = std::conj(z);
    conj_out = true;
  }
  const double r = std::abs(z);
  const double chi = std::clamp(std::arg(z), -0.5 * pi, 0.5 * pi);
  const double nu_abs = std::abs(nu);

  // Path t(s) = s + i y(s): flat at the height that minimises the peak of the
  // integrand, bending to Im t = -chi (s -> +inf) and +chi (s -> -inf) where
  // the tails decay without oscillating.
  const double s1 = std::max(0.0, std::log(2.0 * nu_abs / r)) + 1.0;
  const double th0 = best_height(r, chi, nu, s1);
  const double jmin = line_peak(r, chi, nu, th0, s1);
  const double thp = -chi;
  const double thm = chi;

  auto t_of = [&](double s, cplx& dt) {
    const double tp = std::tanh(s - s1);
    const double tm = std::tanh(s + s1);
    const double y = th0 + (thp - th0) * 0.5 * (1.0 + tp) + (thm - th0) * 0.5 * (1.0 - tm);
    const double dy = (thp - th0) * 0.5 * (1.0 - tp * tp) - (thm - th0) * 0.5 * (1.0 - tm * tm);
    dt = cplx(1.0, dy);
    return cplx(s, y);
  };
  auto re_phi = [&](double s) {
    cplx dt;
    const cplx t = t_of(s, dt);
    return std::real(-z * std::cosh(t) + nu * t);
  };
  auto g = [&](double s) {
    cplx dt;
    const cplx t = t_of(s, dt);
    return std::exp(-z * std::cosh(t) + nu * t - jmin) * dt;
  };

  const double curvature = std::hypot(r, nu_abs);
  const double h0 = std::min(0.25, 1.0 / std::sqrt(curvature));
  const double threshold = jmin + std::log(spec.truncation) - 9.0;
  auto find_end = [&](double dir) {
    double s = 4.0 * h0;
    while (re_phi(dir * s) > threshold || re_phi(dir * 1.5 * s) > threshold) {
      s *= 1.5;
      if (s > 80.0)
        throw Error(ErrorKind::QuadratureFailure, "bessel_k: integrand tail does not decay");
    }
    return dir * s;
  };
  const double a = find_end(-1.0);
  const double b = find_end(1.0);

  const long max_nodes = 64L * spec.max_subdivisions;
  long n = std::max(2L, static_cast<long>(std::ceil((b - a) / h0)));
  double h = (b - a) / static_cast<double>(n);
  cplx sum = 0.5 * (g(a) + g(b));
  double l1 = 0.5 * (std::abs(g(a)) + std::abs(g(b)));
  for (long k = 1; k < n; ++k) {
    const cplx v = g(a + k * h);
    sum += v;
    l1 += std::abs(v);
  }
  cplx prev = h * sum;
  double err = std::numeric_limits<double>::infinity();
  cplx value = prev;
  while (true) {
    if (2 * n + 1 > max_nodes)
      throw Error(ErrorKind::QuadratureFailure, "bessel_k: node budget exhausted", 0.5 * err);
    h *= 0.5;
    for (long k = 1; k < 2 * n; k += 2) {
      const cplx v = g(a + k * h);
      sum += v;
      l1 += std::abs(v);
    }
    n *= 2;
    value = h * sum;
    err = std::abs(value - prev);
    const double floor = 1e-15 * h * l1;
    if (err <= std::max(spec.rel_tol * std::abs(value), floor)) break;
    prev = value;
  }

  BesselResult out;
  out.scaled = conj_out ? std::conj(0.5 * value) : 0.5 * value;
  out.log_scale = jmin;
  out.err = 0.5 * err;
  out.nodes = static_cast<int>(std::min<long>(n + 1, std::numeric_limits<int>::max()));
  out.near_singular = r < 1e-6;
  return out;
}

cplx bessel_k(cplx nu, cplx z, const QuadratureSpec& spec) {
  return bessel_k_scaled(nu, z, spec).value();
}

cplx bessel_k(ComplexOrder nu, cplx z, const QuadratureSpec& spec) {
  return bessel_k(nu.value(), z, spec);
}

double struve_l(int order, double x) {
  if (order != 0 && order != -1)
    throw Error(ErrorKind::Domain, "struve_l: only orders 0 and -1 are provided");
  if (!(x >= 0.0)) throw Error(ErrorKind::Domain, "struve_l: x must be >= 0");
  if (x > 600.0) throw Error(ErrorKind::Range, "struve_l: x beyond the power-series budget");
  // L_n(x) = sum_k (x/2)^{2k+n+1} / (Gamma(k+3/2) Gamma(k+n+3/2))
  const double q = 0.25 * x * x;
  double term = (order == 0) ? (0.5 * x) / (0.25 * pi) : 2.0 / pi;
  double sum = term;
  for (int k = 0; k < 4000; ++k) {
    const double ka = k + 1.5;
    const double kb = k + order + 1.5;
    term *= q / (ka * kb);
    sum += term;
    if (term <= 1e-17 * sum) return sum;
  }
  throw Error(ErrorKind::Range, "struve_l: series did not converge");
}

cplx RapidityContour::point(double b) const {
  if (theta_mag == 0.0) return {b, 0.0};
  const double sig = 0.5 * (1.0 + std::tanh((b - b_switch) / width));
  return {b, theta_mag * (sign_left + (sign_right - sign_left) * sig)};
}

cplx RapidityContour::jacobian(double b) const {
  if (theta_mag == 0.0 || sign_left == sign_right) return {1.0, 0.0};
  const double th = std::tanh((b - b_switch) / width);
  return {1.0, theta_mag * (sign_right - sign_left) * 0.5 * (1.0 - th * th) / width};
}

RapidityResult rapidity_integral(const RapidityIntegrand& integrand, const QuadratureSpec& spec,
                                 const RapidityContour& contour) {
  spec.validate();
  if (!(integrand.damping > 0.0))
    throw Error(ErrorKind::NoDamping,
                "rapidity_integral: abar must be > 0; the undamped rapidity line does not converge");

  auto log_mag = [&](double b) {
    const cplx p = contour.point(b);
    const Spinor4 w = integrand.weight(p);
    const double wmax = w.cwiseAbs().maxCoeff();
    if (wmax == 0.0) return -std::numeric_limits<double>::infinity();
    return std::real(integrand.phase(p)) + std::log(wmax) + std::log(std::abs(contour.jacobian(b)));
  };

  // Walk outward until the integrand has dropped below truncation/10 of the
  // largest value seen; the e^{-abar cosh b} envelope makes this terminate.
  constexpr double kStep = 0.25;
  constexpr double kLimit = 60.0;
  double peak = log_mag(0.0);
  const double drop = std::log(spec.truncation / 10.0);
  auto walk = [&](double dir) {
    double b = 0.0;
    int below = 0;
    while (below < 4) {
      b += kStep;
      if (b > kLimit)
        throw Error(ErrorKind::QuadratureFailure, "rapidity_integral: integrand not damped by |b| = 60");
      const double lm = log_mag(dir * b);
      if (lm > peak) peak = lm;
      below = (lm < peak + drop) ? below + 1 : 0;
    }
    return dir * b;
  };
  const double hi = walk(1.0);
  const double lo = walk(-1.0);

  // Integrate in units of the sampled peak so abs_tol is relative to the
  // largest integrand value rather than to 1.
  auto f = [&](double b) -> Spinor4 {
    const cplx p = contour.point(b);
    return integrand.weight(p) * (std::exp(integrand.phase(p) - peak) * contour.jacobian(b));
  };
  const int pieces = std::max(2, static_cast<int>(std::ceil((hi - lo) / 0.5)));
  std::vector<double> breaks(pieces + 1);
  for (int i = 0; i <= pieces; ++i) breaks[i] = lo + (hi - lo) * i / pieces;
  auto norm = [](const Spinor4& v) { return v.cwiseAbs().maxCoeff(); };
  const auto res = quad::adaptive<Spinor4>(f, breaks, spec.abs_tol, spec.rel_tol,
                                           spec.max_subdivisions, norm);
  if (!res.converged)
    throw Error(ErrorKind::QuadratureFailure,
                "rapidity_integral: tolerance not reached within max_subdivisions",
                res.err * std::exp(peak));
  const double scale = std::exp(peak);
  RapidityResult out;
  out.value = res.value * scale;
  out.err = res.err * scale;
  out.subdivisions = res.subdivisions;
  out.b_lo = lo;
  out.b_hi = hi;
  return out;
}

}  // namespace nsp
