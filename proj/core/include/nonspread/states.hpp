#pragma once

#include "nonspread/algebra.hpp"
#include "nonspread/fields.hpp"
#include "nonspread/specfun.hpp"

namespace nsp {

struct PacketParams {
  double alpha = 0.0;  // chirp
  double abar = 0.0;   // size of the e^{-abar E_p} envelope
  double Omega = 0.0;  // Rindler eigenenergy, for the eigenstate only

  // abar > 0 and finite values; the closed-form packets need damping.
  void validate() const;
};

enum class ComponentOrder {
  MinusFirst,  // (F_{nu-}, 0, F_{nu+}, 0): solves the free Dirac equation
  PlusFirst,   // (F_{nu+}, 0, F_{nu-}, 0): the alternative listing
};

const char* to_string(ComponentOrder order);

// Every sign choice the constructors depend on. The defaults are the ones the
// Dirac residuals and the quadrature oracles select; the others exist so the
// test suite can show that they fail.
struct Conventions {
  ComponentOrder order = ComponentOrder::MinusFirst;
  int chirp_sign = -1;  // rapidity chirp e^{chirp_sign * i alpha b}
  int phi_sign = +1;    // Phibar enters the primed coordinates with this sign
};

// zeta = sqrt((abar + i T)^2 + Z^2), evaluated as sqrt(abar + i(T+Z)) *
// sqrt(abar - i(Z-T)) so that it stays continuous across the wedge.
struct ZetaArg {
  cplx value;
  bool branch_flipped = false;  // differs from the principal root of the product
};

ZetaArg zeta_arg(double abar, double T, double Z);

// F_nu = 2 ((abar + i(T+Z)) / (abar - i(Z-T)))^{nu/2} K_nu(zeta).
// Throws ErrorKind::Masked when |zeta| < 1e-6.
cplx packet_function(cplx nu, double abar, double T, double Z, const QuadratureSpec& q = {});

// Same function in light-cone coordinates xp = T + Z, xm = Z - T. Near the
// light cone at large boosts T - Z cancels catastrophically; callers that
// know xm directly (Rindler points, x = Z - T integrals) should use this.
cplx packet_function_lc(cplx nu, double abar, double xp, double xm, const QuadratureSpec& q = {});

// Eq.-(1) eigenstate at Rindler energy Omega; abar plays no role.
Spinor4 rindler_eigenstate(double Omega, const RindlerPoint& x, const QuadratureSpec& q = {});

Spinor4 free_nonspreading(const PacketParams& pp, const SpacetimePoint& x, const Conventions& c = {},
                          const QuadratureSpec& q = {});

Spinor4 free_nonspreading_lc(const PacketParams& pp, double xp, double xm, const Conventions& c = {},
                             const QuadratureSpec& q = {});

// Plane-wave Volkov state with p = sinh b.
Spinor4 volkov(double b, const FieldProfile& f, const SpacetimePoint& x, const Conventions& c = {});

Spinor4 laser_nonspreading(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                           const Conventions& c = {}, const QuadratureSpec& q = {});

struct CrdiParts {
  Matrix4C R;        // boost_z(eta_p) * L
  Matrix4C L;        // unit-triangular field part
  double eta_p = 0;  // ln|F+ / F-|
  cplx c_field;      // (F+/F-)(f1 + i f2), the d* omega (f1 + i f2) entry
  Spinor4 psi_lab;   // laser_nonspreading at the point
};

CrdiParts crdi_parts(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                     const Conventions& c = {}, const QuadratureSpec& q = {});

Matrix4C crdi_matrix(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                     const Conventions& c = {}, const QuadratureSpec& q = {});

Spinor4 rest_frame_spinor(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                          const Conventions& c = {}, const QuadratureSpec& q = {});

// R^-1 applied to the rest-frame spinor; round-trips to laser_nonspreading.
Spinor4 lab_from_rest(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                      const Conventions& c = {}, const QuadratureSpec& q = {});

struct BoostRotation {
  double theta = 0.0;
  double w = 0.0;
  Eigen::Vector3d V = Eigen::Vector3d::Zero();
  Matrix4C U = Matrix4C::Identity();  // rotation exp(-theta (n1 g1 g3 + n2 g2 g3))
  Matrix4C B = Matrix4C::Identity();  // boost exp(-w V . g0 g)
  FourVector proper_velocity = FourVector(1, 0, 0, 0);
};

BoostRotation decompose_boost_rotation(const FieldProfile& f, double xi);

// The field-only CRDI factor at F+/F- = 1, i.e. L with c = f1 + i f2.
Matrix4C field_dressing(double f1, double f2);

// Rapidity-line quadratures of the Eq.-(2) and Eq.-(8) superpositions,
// independent of the Bessel closed forms. They follow the physical
// convention (chirp e^{-i alpha b}) irrespective of any mutation flags.
Spinor4 free_quadrature(const PacketParams& pp, const SpacetimePoint& x, const QuadratureSpec& q = {});
Spinor4 laser_quadrature(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                         const QuadratureSpec& q = {});

}  // namespace nsp
