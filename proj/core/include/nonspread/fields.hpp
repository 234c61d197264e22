#pragma once

#include <memory>
#include <vector>

#include "nonspread/types.hpp"

namespace nsp {

enum class FieldKind { Off, Linear, Circular, Tabulated };

const char* to_string(FieldKind kind);

// Optional sin^2 window: env(xi) = sin^2(pi (xi - start) / length) on
// [start, start + length], zero outside.
struct Envelope {
  bool enabled = false;
  double start = 0.0;
  double length = 0.0;

  double operator()(double xi) const;
};

// Sampled (f1dot, f2dot) on an increasing xi grid, linearly interpolated.
struct FieldTable {
  std::vector<double> xi;
  std::vector<double> f1;
  std::vector<double> f2;
};

class PhiCache;

// eA^mu = (0, f1dot(xi), f2dot(xi), 0) in electron-mass units, xi = omega_bar (T - Z).
struct FieldProfile {
  FieldKind kind = FieldKind::Off;
  double a0 = 0.0;
  double omega_bar = 1.0;
  Envelope envelope;
  std::shared_ptr<const FieldTable> table;
  // Cumulative Phi for enveloped or tabulated profiles. Built once by
  // finalize() and read-only afterwards, so concurrent readers are safe.
  std::shared_ptr<const PhiCache> phi_cache;

  static FieldProfile off();
  static FieldProfile linear(double a0, double omega_bar, Envelope env = {});
  static FieldProfile circular(double a0, double omega_bar, Envelope env = {});
  static FieldProfile tabulated(FieldTable table, double omega_bar);

  bool is_off() const { return kind == FieldKind::Off || (kind != FieldKind::Tabulated && a0 == 0.0); }
  void validate() const;
  // Builds the cumulative-Phi cache where no closed form exists.
  void finalize();
};

struct FieldValue {
  double f1 = 0.0;
  double f2 = 0.0;
};

FieldValue fdot(const FieldProfile& p, double xi);

// Phibar(xi) = -1/(2 omega_bar) * int_0^xi (f1^2 + f2^2).
double phi_accumulated(const FieldProfile& p, double xi);

struct SpacetimePoint {
  double T = 0.0;
  double Z = 0.0;
};

struct RindlerPoint {
  double eta = 0.0;
  double u = 0.0;
};

inline double light_cone_phase(const FieldProfile& p, const SpacetimePoint& x) {
  return p.omega_bar * (x.T - x.Z);
}

// T' = T - Phibar, Z' = Z + Phibar with Phibar at xi = omega_bar (T - Z).
// The shift leaves T + Z unchanged and maps xi to xi' = xi - 2 omega_bar Phibar.
SpacetimePoint primed_coords(const SpacetimePoint& x, const FieldProfile& p);

// Solves xi - 2 omega_bar Phibar(xi) = xi_prime.
double invert_xi(const FieldProfile& p, double xi_prime);

// Inverse of primed_coords.
SpacetimePoint unprimed_coords(const SpacetimePoint& xp, const FieldProfile& p);

// Right wedge only: Z = u cosh eta, T = u sinh eta.
RindlerPoint rindler_from_lab(const SpacetimePoint& x);
SpacetimePoint lab_from_rindler(const RindlerPoint& r);

struct RigidKinematics {
  double v_over_c = 0.0;
  double proper_time_factor = 1.0;
};

// Reference point at height z of a rigid frame with acceleration g, at lab time T.
RigidKinematics rigid_frame_kinematics(double g, double z, double T);

}  // namespace nsp
