#include "nonspread/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nonspread/parallel.hpp"
#include "nonspread/quadrature.hpp"

namespace nsp {

const char* to_string(Frame f) { return f == Frame::Lab ? "lab" : "rindler"; }

const char* to_string(StateKind s) {
  switch (s) {
    case StateKind::Free: return "free";
    case StateKind::Laser: return "laser";
    case StateKind::Eigenstate: return "eigenstate";
  }
  return "unknown";
}

const char* to_string(Normalization n) { return n == Normalization::UnitIntegral ? "unit-integral" : "raw"; }

namespace {

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return a;
}

double spacing(const std::vector<double>& a) { return a.size() > 1 ? a[1] - a[0] : 1.0; }

// Density of the requested state, or NaN where the state is undefined.
double cell_density(const GridRequest& r, double c1, double c2) {
  const auto& c = r.conventions;
  const auto& q = r.quadrature;
  if (r.frame == Frame::Lab) {
    const SpacetimePoint x{c2, c1};
    switch (r.state) {
      case StateKind::Free: return free_nonspreading(r.params, x, c, q).squaredNorm();
      case StateKind::Laser: return laser_nonspreading(r.params, r.field, x, c, q).squaredNorm();
      case StateKind::Eigenstate: {
        if (!(x.Z > std::abs(x.T))) return std::numeric_limits<double>::quiet_NaN();
        const RindlerPoint rp = rindler_from_lab(x);
        return (boost_z(-rp.eta) * rindler_eigenstate(r.params.Omega, rp, q)).squaredNorm();
      }
    }
  } else {
    const RindlerPoint rp{c2, c1};
    if (!(rp.u > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    switch (r.state) {
      case StateKind::Eigenstate: return rindler_eigenstate(r.params.Omega, rp, q).squaredNorm();
      case StateKind::Free: {
        const Spinor4 psi = free_nonspreading_lc(r.params, rp.u * std::exp(rp.eta), rp.u * std::exp(-rp.eta), c, q);
        return (boost_z(rp.eta) * psi).squaredNorm();
      }
      case StateKind::Laser: {
        const Spinor4 psi = laser_nonspreading(r.params, r.field, lab_from_rindler(rp), c, q);
        return (boost_z(rp.eta) * psi).squaredNorm();
      }
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double prefactor_arg(double abar, double T, double Z) {
  return std::atan2(T + Z, abar) - std::atan2(T - Z, abar);
}

}  // namespace

DensityGrid density_grid(const GridRequest& req) {
  if (req.n1 < 1 || req.n2 < 1) throw Error(ErrorKind::Usage, "density_grid: resolution must be >= 1");
  if (!(req.window.c1_max > req.window.c1_min) || !(req.window.c2_max > req.window.c2_min)) {
    throw Error(ErrorKind::Usage, "density_grid: window has zero area");
  }
  if (req.state != StateKind::Eigenstate) req.params.validate();

  DensityGrid g;
  g.frame = req.frame;
  g.normalization = req.normalization;
  g.axis1 = axis(req.window.c1_min, req.window.c1_max, req.n1);
  g.axis2 = axis(req.window.c2_min, req.window.c2_max, req.n2);
  const std::size_t n1 = g.axis1.size();
  const std::size_t total = n1 * g.axis2.size();
  g.values.assign(total, 0.0);
  g.mask.assign(total, 0);
  const double d1 = spacing(g.axis1);
  const double d2 = spacing(g.axis2);
  const double band = req.light_cone_band * std::max(d1, d2);

  std::vector<std::uint8_t> cone(total, 0);
  parallel_for(
      total,
      [&](std::size_t k) {
        const double c1 = g.axis1[k % n1];
        const double c2 = g.axis2[k / n1];
        if (req.frame == Frame::Lab && std::abs(std::abs(c1) - std::abs(c2)) < band) cone[k] = 1;
        try {
          const double v = cell_density(req, c1, c2);
          if (std::isfinite(v)) {
            g.values[k] = v;
          } else {
            g.mask[k] = 1;
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Masked) throw;
          g.mask[k] = 1;
        }
        if (cone[k]) g.mask[k] = 1;
      },
      req.threads);

  double sum = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    g.light_cone_cells += cone[k];
    if (g.mask[k]) {
      ++g.masked_cells;
    } else {
      sum += g.values[k];
    }
  }
  if (g.masked_cells == static_cast<int>(total)) throw Error(ErrorKind::Coverage, "density_grid: every cell is masked");
  g.raw_integral = sum * d1 * d2;
  if (req.normalization == Normalization::UnitIntegral && g.raw_integral > 0.0) {
    for (auto& v : g.values) v /= g.raw_integral;
  }

  if (req.frame == Frame::Lab && req.state != StateKind::Eigenstate) {
    const double abar = req.params.abar;
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      for (std::size_t i = 0; i < n1; ++i) {
        const double a0 = prefactor_arg(abar, g.axis2[j], g.axis1[i]);
        if (i + 1 < n1 && std::abs(prefactor_arg(abar, g.axis2[j], g.axis1[i + 1]) - a0) > pi) ++g.branch_flags;
        if (j + 1 < g.axis2.size() && std::abs(prefactor_arg(abar, g.axis2[j + 1], g.axis1[i]) - a0) > pi) {
          ++g.branch_flags;
        }
      }
    }
  }
  return g;
}

std::vector<RowMaxima> detect_fringes(const DensityGrid& g, double min_prominence) {
  std::vector<RowMaxima> rows;
  const std::size_t n1 = g.n1();
  const double d1 = spacing(g.axis1);
  for (std::size_t j = 0; j < g.n2(); ++j) {
    RowMaxima row;
    row.c2 = g.axis2[j];
    auto v = [&](std::size_t i) { return g.at(i, j); };
    auto ok = [&](std::size_t i) { return !g.masked(i, j); };
    for (std::size_t i = 1; i + 1 < n1; ++i) {
      if (!ok(i - 1) || !ok(i) || !ok(i + 1)) continue;
      if (!(v(i) > v(i - 1) && v(i) >= v(i + 1))) continue;
      std::size_t l = i;
      while (l > 0 && ok(l - 1) && v(l - 1) <= v(l)) --l;
      std::size_t r = i;
      while (r + 1 < n1 && ok(r + 1) && v(r + 1) <= v(r)) ++r;
      const double floor_v = std::max(v(l), v(r));
      if (v(i) - floor_v < min_prominence * v(i)) continue;
      const double a = v(i - 1), b = v(i), c = v(i + 1);
      const double den = a - 2 * b + c;
      const double delta = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      row.positions.push_back(g.axis1[i] + delta * d1);
      row.values.push_back(b - 0.25 * (a - c) * delta);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double fringe_contrast(const DensityGrid& g, std::size_t row, double lo, double hi) {
  std::vector<double> extrema;
  for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
    const double x = g.axis1[i];
    if (x < lo || x > hi) continue;
    if (g.masked(i - 1, row) || g.masked(i, row) || g.masked(i + 1, row)) continue;
    const double a = g.at(i - 1, row), b = g.at(i, row), c = g.at(i + 1, row);
    if ((b > a && b >= c) || (b < a && b <= c)) extrema.push_back(b);
  }
  if (extrema.size() < 2) return 0.0;
  double total = 0.0;
  int pairs = 0;
  for (std::size_t k = 0; k + 1 < extrema.size(); ++k) {
    const double hi_v = std::max(extrema[k], extrema[k + 1]);
    const double lo_v = std::min(extrema[k], extrema[k + 1]);
    if (hi_v + lo_v > 0.0) {
      total += (hi_v - lo_v) / (hi_v + lo_v);
      ++pairs;
    }
  }
  return pairs ? total / pairs : 0.0;
}

namespace {

// int_0^X g(x) dx for X = x_max (finite) or up to the decay of g (x_max =
// inf), integrated in s = ln x so that structure at x ~ x_lo and slowly
// decaying tails are resolved alike. g returns a vector of integrands; the
// first entry drives the tail cut.
template <class V, class G>
V log_line_integral(const G& g, double x_lo, double x_max, const QuadratureSpec& q, const char* what) {
  auto h = [&](double s) -> V {
    const double x = std::exp(s);
    return g(x) * x;
  };
  const double s_lo = std::log(x_lo);
  double s_hi;
  if (std::isfinite(x_max)) {
    s_hi = std::log(x_max);
  } else {
    // March until the leading entry has dropped 40 e-folds below its largest
    // sample for several consecutive steps.
    double peak = 0.0;
    int below = 0;
    double s = s_lo;
    while (true) {
      s += 0.25;
      const double v = std::abs(h(s)[0]);
      peak = std::max(peak, v);
      below = (peak > 0.0 && v < 1e-18 * peak) ? below + 1 : 0;
      if (below >= 4) break;
      if (s > 40.0) throw Error(ErrorKind::Range, std::string(what) + ": integrand does not decay by x = e^40");
    }
    s_hi = s;
  }
  if (!(s_hi > s_lo)) return V::Zero();
  const int pieces = std::max(4, static_cast<int>(std::ceil((s_hi - s_lo) / 0.5)));
  std::vector<double> breaks(pieces + 1);
  for (int i = 0; i <= pieces; ++i) breaks[i] = s_lo + (s_hi - s_lo) * i / pieces;
  const auto norm = [](const V& v) { return v.cwiseAbs().sum(); };
  const auto r = quad::adaptive<V>(h, breaks, 0.0, q.rel_tol, q.max_subdivisions, norm);
  if (!r.converged) throw Error(ErrorKind::QuadratureFailure, std::string(what) + ": quadrature did not converge", r.err);
  // Below x_lo the integrand is flat to the accuracy needed.
  return r.value + g(x_lo) * x_lo;
}

double lab_density_lc(const PacketParams& pp, double xp, double xm, const QuadratureSpec& q) {
  return free_nonspreading_lc(pp, xp, xm, {}, q).squaredNorm();
}

double bessel_k_real(double nu, double x) { return bessel_k(cplx(nu, 0.0), cplx(x, 0.0)).real(); }

}  // namespace

double time_compton_from_fs(double T_fs, TimeBridge bridge) {
  const double unit = bridge == TimeBridge::Reduced ? compton_time_s : 2.0 * pi * compton_time_s;
  return T_fs * 1e-15 / unit;
}

AsymmetryResult asymmetry(const PacketParams& pp, double T_lab_fs, TimeBridge bridge, const QuadratureSpec& q) {
  pp.validate();
  AsymmetryResult out;
  out.T_compton = time_compton_from_fs(T_lab_fs, bridge);
  const double T = out.T_compton;
  out.n_total = 8.0 * pi * bessel_k_real(0.0, 2.0 * pp.abar);
  using V1 = Eigen::Matrix<double, 1, 1>;
  auto g = [&](double x) -> V1 { return V1(lab_density_lc(pp, 2.0 * T + x, x, q)); };
  out.n_outside = log_line_integral<V1>(g, 1e-12 * pp.abar, std::numeric_limits<double>::infinity(), q, "asymmetry")[0];
  const double s = out.n_total + out.n_outside;
  out.value = (out.n_total - out.n_outside) / s;
  out.complement = 2.0 * out.n_outside / s;
  return out;
}

ZMoments variance_z_closed(const PacketParams& pp, double Tbar, int chirp_sign) {
  pp.validate();
  const double a = pp.abar;
  const double x = 2.0 * a;
  const double k0 = bessel_k_real(0.0, x);
  const double k1 = bessel_k_real(1.0, x);
  const double l0 = struve_l(0, x);
  const double lm1 = struve_l(-1, x);
  // <Z^2> = slope * (alpha^2 - T^2) + offset + T^2. Keeping the slope apart
  // lets delta2 = slope * alpha^2 - <Z>^2 skip the subtraction of two
  // T^2-sized numbers, so it is time independent to rounding.
  const double slope = k1 * a * (4.0 + 4.0 * pi * a * l0) / (2.0 * k0) + 2.0 * pi * a * a * lm1 - pi * a / k0;
  const double offset = k1 * a / (2.0 * k0);
  // The closed form is for the chirp e^{+i alpha b}; <Z> is odd in alpha.
  const double mean_per_alpha = chirp_sign * pi * (a * lm1 + (2.0 * a * l0 * k1 - 1.0) / (2.0 * k0));
  const double al2 = pp.alpha * pp.alpha;
  ZMoments z;
  z.norm = 8.0 * pi * k0;
  z.mean = mean_per_alpha * pp.alpha;
  z.second_moment = slope * (al2 - Tbar * Tbar) + offset + Tbar * Tbar;
  z.variance = z.second_moment - z.mean * z.mean;
  z.delta2 = (slope - mean_per_alpha * mean_per_alpha) * al2;
  return z;
}

ZMoments variance_z_numeric(const PacketParams& pp, double Tbar, const QuadratureSpec& q) {
  pp.validate();
  const double t = std::abs(Tbar);
  const double x_lo = 1e-14 * std::max(1.0, pp.abar);
  const double inf = std::numeric_limits<double>::infinity();
  using V3 = Eigen::Vector3d;
  // Each piece maps x > 0 to a Z with (T+Z, Z-T) computed without cancellation.
  auto piece = [&](auto zmap, double x_max) {
    auto g = [&](double x) -> V3 {
      double Z, xp, xm;
      zmap(x, Z, xp, xm);
      const double r = lab_density_lc(pp, xp, xm, q);
      return V3(r, Z * r, Z * Z * r);
    };
    return log_line_integral<V3>(g, x_lo, x_max, q, "variance_z_numeric");
  };
  const double T = Tbar;
  V3 m = piece([&](double x, double& Z, double& xp, double& xm) {
    Z = t + x;
    xp = T + t + x;
    xm = t - T + x;
  }, inf);
  m += piece([&](double x, double& Z, double& xp, double& xm) {
    Z = -t - x;
    xp = T - t - x;
    xm = -t - T - x;
  }, inf);
  if (t > 0.0) {
    m += piece([&](double x, double& Z, double& xp, double& xm) {
      Z = t - x;
      xp = T + t - x;
      xm = t - T - x;
    }, t);
    m += piece([&](double x, double& Z, double& xp, double& xm) {
      Z = -t + x;
      xp = T - t + x;
      xm = -t - T + x;
    }, t);
  }
  ZMoments z;
  z.norm = m[0];
  z.mean = m[1] / m[0];
  z.second_moment = m[2] / m[0];
  z.variance = z.second_moment - z.mean * z.mean;
  PacketParams p0 = pp;
  p0.alpha = 0.0;
  if (pp.alpha != 0.0) {
    const ZMoments base = variance_z_numeric(p0, Tbar, q);
    z.delta2 = z.variance - base.variance;
  }
  return z;
}

UMoments variance_u_numeric(const PacketParams& pp, double eta, const QuadratureSpec& q) {
  pp.validate();
  const double ep = std::exp(eta), em = std::exp(-eta);
  using V3 = Eigen::Vector3d;
  auto g = [&](double u) -> V3 {
    const Spinor4 psi = free_nonspreading_lc(pp, u * ep, u * em, {}, q);
    const double r = (boost_z(eta) * psi).squaredNorm();
    return V3(r, u * r, u * u * r);
  };
  const V3 m = log_line_integral<V3>(g, 1e-3 * pp.abar * em, std::numeric_limits<double>::infinity(), q,
                                     "variance_u_numeric");
  if (!(m[0] > 0.0) || !std::isfinite(m[0])) {
    std::ostringstream os;
    os << "variance_u_numeric: Rindler-frame density underflows at eta = " << eta;
    throw Error(ErrorKind::Range, os.str());
  }
  UMoments out;
  out.norm = m[0];
  out.mean = m[1] / m[0];
  out.sigma = std::sqrt(std::max(0.0, m[2] / m[0] - out.mean * out.mean));
  return out;
}

double asymptotic_density(Frame frame, double alpha_or_Omega, double abar, const RindlerPoint& x,
                          bool corrected_exponent) {
  if (x.eta < 5.0) throw Error(ErrorKind::Applicability, "asymptotic_density: needs eta >= 5");
  if (!(x.u > 0.0)) throw Error(ErrorKind::Wedge, "asymptotic_density: u must be positive");
  const double pre = 1.0 / (std::sqrt(2.0) * x.u);
  if (frame == Frame::Rindler) return pre * std::exp(-2.0 * x.u + 0.5 * pi * alpha_or_Omega);
  if (!(abar > 0.0)) throw Error(ErrorKind::NoDamping, "asymptotic_density: abar must be > 0 in the lab frame");
  const double s = std::exp(x.eta) * abar * x.u;
  const double decay = corrected_exponent ? std::sqrt(2.0 * s) : 2.0 * std::sqrt(s);
  return pre * std::exp(-decay + 0.5 * pi * alpha_or_Omega);
}

Lifetime lifetime(const PacketParams& pp) {
  pp.validate();
  if (!(pp.alpha > pp.abar)) throw Error(ErrorKind::Sign, "lifetime: needs alpha > abar");
  Lifetime t;
  t.t_reduced_s = compton_time_s * (pp.alpha * pp.alpha - pp.abar * pp.abar) / (2.0 * pp.abar);
  t.t_paper_s = 2.0 * pi * t.t_reduced_s;
  return t;
}

ColliderEstimate collider_estimates(double omega_over_m, double a0, std::optional<double> gamma0, double leak_alpha,
                                    double leak_abar) {
  if (!(omega_over_m > 0.0) || !(a0 > 0.0) || (gamma0 && !(*gamma0 > 0.0))) {
    throw Error(ErrorKind::Domain, "collider_estimates: inputs must be positive");
  }
  ColliderEstimate c;
  c.gamma_rf = 1.0 / (2.0 * std::sqrt(2.0) * a0 * a0 * omega_over_m);
  c.omega0_gev = std::sqrt(2.0) * c.gamma_rf * a0 * electron_mass_mev * 1e-3;
  const double omega_si = omega_over_m / compton_time_s;  // rad/s
  c.laser_period_s = 2.0 * pi / omega_si;
  c.recollision_time_s = c.laser_period_s / c.gamma_rf;
  c.recollision_time_doppler_s = c.laser_period_s / (2.0 * c.gamma_rf);
  c.recollision_time_inv_omega_s = 1.0 / (omega_si * c.gamma_rf);
  const Lifetime lt = lifetime({leak_alpha, leak_abar, 0.0});
  c.leak_time_s = lt.t_paper_s;
  c.leak_time_reduced_s = lt.t_reduced_s;
  c.gamma0 = gamma0 ? *gamma0 : c.omega0_gev * 1e3 / electron_mass_mev;
  c.rr_fraction = 2.0 * fine_structure * a0 * a0 * c.gamma0 * omega_over_m;
  return c;
}

double chirp_delay(double p, double alpha) { return alpha / std::sqrt(1.0 + p * p); }

WavelengthBound rest_wavelength_bound(const PacketParams& pp, double omega_bar, double gamma_rf) {
  if (!(pp.abar > 0.0) || !(omega_bar > 0.0) || !(gamma_rf > 0.0)) {
    throw Error(ErrorKind::Domain, "rest_wavelength_bound: inputs must be positive");
  }
  WavelengthBound w;
  w.lambda_rest = 2.0 * pi / (2.0 * gamma_rf * omega_bar);
  w.a_max = w.lambda_rest;
  w.satisfied = pp.abar <= w.lambda_rest;
  w.marginal = std::abs(pp.abar / w.lambda_rest - 1.0) <= 0.01;
  return w;
}

}  // namespace nsp
