#include "nonspread/states.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nsp {

void PacketParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(Omega)) throw Error(ErrorKind::Domain, "packet parameters must be finite");
  if (!(abar > 0.0) || !std::isfinite(abar)) {
    throw Error(ErrorKind::NoDamping, "abar must be > 0: the closed-form packets need the e^{-abar E_p} damping");
  }
}

const char* to_string(ComponentOrder order) {
  return order == ComponentOrder::MinusFirst ? "minus-first (F_{i alpha-1/2}, 0, F_{i alpha+1/2}, 0)"
                                             : "plus-first (F_{i alpha+1/2}, 0, F_{i alpha-1/2}, 0)";
}

ZetaArg zeta_arg(double abar, double T, double Z) {
  const cplx ap(abar, T + Z);
  const cplx am(abar, T - Z);
  ZetaArg z;
  z.value = std::sqrt(ap) * std::sqrt(am);
  z.branch_flipped = std::abs(std::sqrt(ap * am) + z.value) < std::abs(std::sqrt(ap * am) - z.value);
  return z;
}

cplx packet_function_lc(cplx nu, double abar, double xp, double xm, const QuadratureSpec& q) {
  const cplx ap(abar, xp);
  const cplx am(abar, -xm);
  const cplx zeta = std::sqrt(ap) * std::sqrt(am);
  if (std::abs(zeta) < 1e-6) {
    std::ostringstream os;
    os << "light-cone mask: |zeta| = " << std::abs(zeta) << " at (T+Z=" << xp << ", Z-T=" << xm << ")";
    throw Error(ErrorKind::Masked, os.str());
  }
  const BesselResult k = bessel_k_scaled(nu, zeta, q);
  return 2.0 * k.scaled * std::exp(k.log_scale + 0.5 * nu * (std::log(ap) - std::log(am)));
}

cplx packet_function(cplx nu, double abar, double T, double Z, const QuadratureSpec& q) {
  return packet_function_lc(nu, abar, T + Z, Z - T, q);
}

Spinor4 rindler_eigenstate(double Omega, const RindlerPoint& x, const QuadratureSpec& q) {
  if (!(x.u > 0.0)) throw Error(ErrorKind::Wedge, "rindler_eigenstate: u must be positive");
  // 2 sqrt2 e^{pi Omega/2} / (i pi) * e^{i gamma5 pi/4} * e^{-i Omega eta}
  const cplx pre = 2.0 * std::sqrt(2.0) / (I * pi) * std::exp(cplx(0.0, -Omega * x.eta));
  const BesselResult kp = bessel_k_scaled(cplx(0.5, Omega), x.u, q);
  const BesselResult km = bessel_k_scaled(cplx(-0.5, Omega), x.u, q);
  const cplx rot = std::exp(cplx(0.0, pi / 4.0));
  Spinor4 psi;
  psi << pre * kp.scaled * std::exp(kp.log_scale + 0.5 * pi * Omega) * std::conj(rot), 0.0,
      pre * km.scaled * std::exp(km.log_scale + 0.5 * pi * Omega) * rot, 0.0;
  return psi;
}

namespace {

struct PacketPair {
  cplx minus, plus;
};

PacketPair packet_pair(const PacketParams& pp, double xp, double xm, const Conventions& c, const QuadratureSpec& q) {
  const cplx chirp(0.0, c.chirp_sign * pp.alpha);
  return {packet_function_lc(chirp - 0.5, pp.abar, xp, xm, q), packet_function_lc(chirp + 0.5, pp.abar, xp, xm, q)};
}

// Physical Phibar at the point, with the convention's sign applied.
double signed_phi(const FieldProfile& f, const SpacetimePoint& x, const Conventions& c) {
  return c.phi_sign * phi_accumulated(f, light_cone_phase(f, x));
}

}  // namespace

Spinor4 free_nonspreading(const PacketParams& pp, const SpacetimePoint& x, const Conventions& c,
                          const QuadratureSpec& q) {
  return free_nonspreading_lc(pp, x.T + x.Z, x.Z - x.T, c, q);
}

Spinor4 free_nonspreading_lc(const PacketParams& pp, double xp, double xm, const Conventions& c,
                             const QuadratureSpec& q) {
  pp.validate();
  const PacketPair F = packet_pair(pp, xp, xm, c, q);
  Spinor4 psi;
  if (c.order == ComponentOrder::MinusFirst) {
    psi << F.minus, 0.0, F.plus, 0.0;
  } else {
    psi << F.plus, 0.0, F.minus, 0.0;
  }
  return psi;
}

Spinor4 volkov(double b, const FieldProfile& f, const SpacetimePoint& x, const Conventions& c) {
  const double xi = light_cone_phase(f, x);
  const FieldValue a = fdot(f, xi);
  const double phi = c.phi_sign * phi_accumulated(f, xi);
  const double eh = std::exp(0.5 * b);
  const cplx phase = std::exp(cplx(0.0, -(std::cosh(b) * x.T - std::sinh(b) * x.Z) + std::exp(b) * phi));
  Spinor4 psi;
  psi << 1.0 / eh, cplx(a.f1, a.f2) * eh, eh, 0.0;
  return psi * phase;
}

Spinor4 laser_nonspreading(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                           const Conventions& c, const QuadratureSpec& q) {
  pp.validate();
  const FieldValue a = fdot(f, light_cone_phase(f, x));
  const double phi = signed_phi(f, x, c);
  // The shift keeps T + Z and moves Z - T by 2 Phibar.
  const PacketPair F = packet_pair(pp, x.T + x.Z, x.Z - x.T + 2.0 * phi, c, q);
  const cplx lead = c.order == ComponentOrder::MinusFirst ? F.minus : F.plus;
  const cplx third = c.order == ComponentOrder::MinusFirst ? F.plus : F.minus;
  Spinor4 psi;
  psi << lead, cplx(a.f1, a.f2) * third, third, 0.0;
  return psi;
}

Matrix4C field_dressing(double f1, double f2) {
  const cplx cf(f1, f2);
  Matrix4C L = Matrix4C::Identity();
  L(1, 0) = -cf;
  L(2, 3) = std::conj(cf);
  return L;
}

CrdiParts crdi_parts(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x, const Conventions& c,
                     const QuadratureSpec& q) {
  CrdiParts out;
  out.psi_lab = laser_nonspreading(pp, f, x, c, q);
  const cplx lead = out.psi_lab[0];
  const cplx third = out.psi_lab[2];
  if (!(std::abs(lead) > 1e-300) || !std::isfinite(std::abs(lead)) || !std::isfinite(std::abs(third)) ||
      !(std::abs(third) > 1e-300)) {
    std::ostringstream os;
    os << "CRDI: Bessel factor vanishes or overflows at (T=" << x.T << ", Z=" << x.Z << ")";
    throw Error(ErrorKind::Masked, os.str());
  }
  const cplx ratio = third / lead;
  out.c_field = out.psi_lab[1] / lead;
  out.eta_p = std::log(std::abs(ratio));
  out.L = Matrix4C::Identity();
  out.L(1, 0) = -out.c_field;
  out.L(2, 3) = std::conj(out.c_field);
  out.R = boost_z(out.eta_p) * out.L;
  return out;
}

Matrix4C crdi_matrix(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x, const Conventions& c,
                     const QuadratureSpec& q) {
  return crdi_parts(pp, f, x, c, q).R;
}

Spinor4 rest_frame_spinor(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                          const Conventions& c, const QuadratureSpec& q) {
  const CrdiParts p = crdi_parts(pp, f, x, c, q);
  Spinor4 r = p.R * p.psi_lab;
  // Entries 2 and 4 vanish identically; drop the rounding residue.
  r[1] = 0.0;
  r[3] = 0.0;
  return r;
}

Spinor4 lab_from_rest(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x, const Conventions& c,
                      const QuadratureSpec& q) {
  const CrdiParts p = crdi_parts(pp, f, x, c, q);
  return inverse4(p.R) * (p.R * p.psi_lab);
}

BoostRotation decompose_boost_rotation(const FieldProfile& f, double xi) {
  const FieldValue a = fdot(f, xi);
  const double fm = std::hypot(a.f1, a.f2);
  BoostRotation d;
  if (fm == 0.0) return d;
  const auto& gs = gamma_set();
  d.theta = std::atan(0.5 * fm);
  d.w = std::atanh(std::sin(d.theta));
  const double n1 = a.f1 / fm;
  const double n2 = a.f2 / fm;
  d.V = Eigen::Vector3d(n1 * std::cos(d.theta), n2 * std::cos(d.theta), std::sin(d.theta));
  // Both generators square to -1 (rotation) and +1 (boost), so the
  // exponentials are closed-form.
  const Matrix4C rot = n1 * gs.g[1] * gs.g[3] + n2 * gs.g[2] * gs.g[3];
  d.U = std::cos(d.theta) * Matrix4C::Identity() - std::sin(d.theta) * rot;
  Matrix4C boost = Matrix4C::Zero();
  for (int k = 0; k < 3; ++k) boost += d.V[k] * gs.g[0] * gs.g[k + 1];
  d.B = std::cosh(d.w) * Matrix4C::Identity() - std::sinh(d.w) * boost;
  const double half = 0.5 * fm * fm;
  d.proper_velocity = FourVector(1.0 + half, a.f1, a.f2, half);
  return d;
}

namespace {

// Imaginary offset of the rapidity line for the oracles. On the line
// b + i theta the log-magnitude of the integrand is
//   alpha theta - A cosh b + B sinh b,  A = abar cos theta + Z' sin theta,
//   B = T' sin theta,
// whose maximum over b is alpha theta - sqrt(A^2 - B^2). Outside the light
// cone a constant theta minimising that peak passes the line through the
// saddle and removes the cancellation. Inside the cone A > |B| cannot hold for
// a constant offset, so the tilt changes sign where Z' cosh b - T' sinh b does,
// with a magnitude capped by the e^{alpha theta} growth of the chirp.
RapidityContour oracle_contour(double alpha, double abar, double Tp, double Zp) {
  RapidityContour c;
  c.width = 0.5;
  const double floor_mag = std::min(0.3, 3.0 / std::max(std::abs(alpha), 1e-300));
  if (std::abs(Zp) > std::abs(Tp)) {
    const double sgn = Zp > 0 ? 1.0 : -1.0;
    auto peak = [&](double t) {
      const double A = abar * std::cos(t) + Zp * std::sin(t);
      const double B = Tp * std::sin(t);
      if (!(A > std::abs(B))) return std::numeric_limits<double>::infinity();
      return alpha * t - std::sqrt((A - B) * (A + B));
    };
    // Coarse scan then golden-section refinement over |theta| < 0.49 pi.
    constexpr int kScan = 64;
    const double tmax = 0.49 * pi;
    int best = 0;
    double vbest = peak(0.0);
    for (int i = 1; i <= kScan; ++i) {
      const double v = peak(sgn * tmax * i / kScan);
      if (v < vbest) {
        vbest = v;
        best = i;
      }
    }
    double lo = tmax * std::max(0, best - 1) / kScan;
    double hi = tmax * std::min(kScan, best + 1) / kScan;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
      const double m1 = hi - g * (hi - lo);
      const double m2 = lo + g * (hi - lo);
      if (peak(sgn * m1) < peak(sgn * m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    // A floor on the offset keeps the tails decaying fast where the optimum
    // sits near the real line.
    c.theta_mag = std::max(0.5 * (lo + hi), floor_mag);
    c.sign_left = c.sign_right = static_cast<int>(sgn);
    return c;
  }
  c.theta_mag = floor_mag;
  if (Tp == 0.0) return c;  // the origin itself: plain real line
  c.b_switch = std::atanh(Zp / Tp);
  c.sign_left = Tp > 0 ? +1 : -1;
  c.sign_right = -c.sign_left;
  return c;
}

QuadratureSpec oracle_spec(const QuadratureSpec& q) {
  QuadratureSpec o = q;
  o.abs_tol = std::min(q.abs_tol, 1e-14);
  o.rel_tol = std::min(q.rel_tol, 1e-12);
  o.truncation = std::min(q.truncation, 1e-16);
  return o;
}

}  // namespace

Spinor4 free_quadrature(const PacketParams& pp, const SpacetimePoint& x, const QuadratureSpec& q) {
  return laser_quadrature(pp, FieldProfile::off(), x, q);
}

Spinor4 laser_quadrature(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                         const QuadratureSpec& q) {
  const double xi = light_cone_phase(f, x);
  const FieldValue a = fdot(f, xi);
  const double phi = phi_accumulated(f, xi);
  const cplx fc(a.f1, a.f2);
  RapidityIntegrand g;
  g.damping = pp.abar;
  g.weight = [fc](cplx b) {
    const cplx eh = std::exp(0.5 * b);
    Spinor4 w;
    w << 1.0 / eh, fc * eh, eh, 0.0;
    return w;
  };
  const double alpha = pp.alpha, abar = pp.abar, T = x.T, Z = x.Z;
  g.phase = [=](cplx b) {
    return -I * alpha * b - abar * std::cosh(b) - I * (T * std::cosh(b) - Z * std::sinh(b)) + I * std::exp(b) * phi;
  };
  return rapidity_integral(g, oracle_spec(q), oracle_contour(alpha, abar, T - phi, Z + phi)).value;
}

}  // namespace nsp
