#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nonspread/states.hpp"

namespace nsp {

enum class Frame { Lab, Rindler };
enum class StateKind { Free, Laser, Eigenstate };
enum class Normalization { UnitIntegral, Raw };

const char* to_string(Frame f);
const char* to_string(StateKind s);
const char* to_string(Normalization n);

// Lab frame: axis 1 is Z, axis 2 is T. Rindler frame: axis 1 is u, axis 2 is eta.
struct Window {
  double c1_min = 0.0, c1_max = 0.0;
  double c2_min = 0.0, c2_max = 0.0;
};

struct GridRequest {
  StateKind state = StateKind::Free;
  Frame frame = Frame::Lab;
  PacketParams params;
  FieldProfile field;
  Conventions conventions;
  Window window;
  int n1 = 100;  // samples along axis 1
  int n2 = 100;  // samples along axis 2
  Normalization normalization = Normalization::UnitIntegral;
  // Lab cells with ||Z| - |T|| below light_cone_band * max(dZ, dT) are masked.
  double light_cone_band = 0.5;
  int threads = 0;
  QuadratureSpec quadrature;
};

struct DensityGrid {
  Frame frame = Frame::Lab;
  std::vector<double> axis1, axis2;
  std::vector<double> values;       // index j * n1 + i for (axis1[i], axis2[j])
  std::vector<std::uint8_t> mask;   // 1 = masked (light-cone band or evaluation masked)
  Normalization normalization = Normalization::UnitIntegral;
  double raw_integral = 0.0;  // sum of unmasked raw values times the cell area
  int masked_cells = 0;
  int light_cone_cells = 0;
  // Neighbouring cells whose prefactor argument arg(abar+i(T+Z)) - arg(abar-i(Z-T))
  // differs by more than pi: a change of branch rather than of physics.
  int branch_flags = 0;

  std::size_t n1() const { return axis1.size(); }
  std::size_t n2() const { return axis2.size(); }
  double at(std::size_t i, std::size_t j) const { return values[j * axis1.size() + i]; }
  bool masked(std::size_t i, std::size_t j) const { return mask[j * axis1.size() + i] != 0; }
};

DensityGrid density_grid(const GridRequest& req);

// Local maxima of one row (fixed axis-2 index) along axis 1, refined with a
// parabola through the three samples around each. Masked cells and their
// neighbours never host a maximum. A maximum counts when it rises above the
// higher of its two flanking minima by at least min_prominence of its value.
struct RowMaxima {
  double c2 = 0.0;
  std::vector<double> positions;
  std::vector<double> values;
};

std::vector<RowMaxima> detect_fringes(const DensityGrid& g, double min_prominence = 0.05);

// Mean (max - min) / (max + min) over adjacent maximum/minimum pairs of one
// row, restricted to axis-1 positions in [lo, hi]. Returns 0 without extrema.
double fringe_contrast(const DensityGrid& g, std::size_t row, double lo, double hi);

enum class TimeBridge {
  Reduced,  // T_fs * 1e-15 / (hbar / m c^2)
  TwoPi,    // T_fs * 1e-15 / (2 pi hbar / m c^2)
};

struct AsymmetryResult {
  double value = 0.0;       // (N_tot - N_out) / (N_tot + N_out)
  double complement = 0.0;  // 1 - value = 2 N_out / (N_tot + N_out)
  double n_total = 0.0;     // 8 pi K_0(2 abar), the conserved lab norm
  double n_outside = 0.0;   // int_{Z > T} psi^dagger psi dZ at lab time T
  double T_compton = 0.0;
};

AsymmetryResult asymmetry(const PacketParams& pp, double T_lab_fs, TimeBridge bridge = TimeBridge::Reduced,
                          const QuadratureSpec& q = {});

double time_compton_from_fs(double T_fs, TimeBridge bridge);

struct ZMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double delta2 = 0.0;  // variance(alpha) - variance(0)
  double norm = 0.0;    // 8 pi K_0(2 abar) in closed form, the integral numerically
};

ZMoments variance_z_closed(const PacketParams& pp, double Tbar, int chirp_sign = -1);
ZMoments variance_z_numeric(const PacketParams& pp, double Tbar, const QuadratureSpec& q = {});

// Standard deviation of u under the Rindler-frame density at fixed eta.
struct UMoments {
  double mean = 0.0;
  double sigma = 0.0;
  double norm = 0.0;
};

UMoments variance_u_numeric(const PacketParams& pp, double eta, const QuadratureSpec& q = {});

// Large-eta forms quoted for the densities. Lab: e^{-2 sqrt(e^eta abar u) + pi alpha/2} / (sqrt2 u)
// (the sign of the pi alpha/2 term follows the chirp e^{-i alpha b}); Rindler:
// e^{-2u + pi Omega/2} / (sqrt2 u). With corrected_exponent the lab exponent
// becomes -sqrt(2 e^eta abar u), the decay rate of the exact density.
double asymptotic_density(Frame frame, double alpha_or_Omega, double abar, const RindlerPoint& x,
                          bool corrected_exponent = false);

struct Lifetime {
  double t_reduced_s = 0.0;  // (hbar/mc^2) (alpha^2 - abar^2) / (2 abar)
  double t_paper_s = 0.0;    // 2 pi t_reduced_s
};

Lifetime lifetime(const PacketParams& pp);

struct ColliderEstimate {
  double gamma_rf = 0.0;
  double omega0_gev = 0.0;
  double laser_period_s = 0.0;            // T_L = 2 pi / omega
  double recollision_time_s = 0.0;        // T_L / gamma
  double recollision_time_doppler_s = 0.0;  // T_L / (2 gamma), from omega' = 2 omega gamma
  double recollision_time_inv_omega_s = 0.0;  // (1/omega) / gamma
  double leak_time_s = 0.0;          // lifetime t_paper_s at (leak_alpha, leak_abar)
  double leak_time_reduced_s = 0.0;  // lifetime t_reduced_s
  double gamma0 = 0.0;               // gamma-photon energy in units of m used for rr_fraction
  double rr_fraction = 0.0;          // 2 alpha_f a0^2 gamma0 omega/m
};

ColliderEstimate collider_estimates(double omega_over_m, double a0, std::optional<double> gamma0 = std::nullopt,
                                    double leak_alpha = 30.0, double leak_abar = 1e-2);

// delta x(p) = d/dp [alpha asinh p] = alpha / sqrt(1 + p^2).
double chirp_delay(double p, double alpha);

struct WavelengthBound {
  double lambda_rest = 0.0;  // 2 pi / (2 gamma omega_bar), Compton lengths
  double a_max = 0.0;
  bool satisfied = false;
  bool marginal = false;  // |abar / lambda_rest - 1| <= 1%
};

WavelengthBound rest_wavelength_bound(const PacketParams& pp, double omega_bar, double gamma_rf);

}  // namespace nsp
