#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nonspread/states.hpp"

namespace nsp {

struct ResidualReport {
  std::string setting;   // "free", "planewave", "rindler", "transformed-lab", "transformed-primed"
  double c1 = 0.0;       // T (or eta)
  double c2 = 0.0;       // Z (or u)
  double residual_norm = 0.0;  // |D psi| / |psi| at step h
  double residual_half = 0.0;  // same at h/2
  // |(4 D_{h/2} - D_h) psi / 3| / |psi|: the Richardson-extrapolated residual
  // of the same stencil pair, free of the O(h^2) truncation term.
  double residual_extrapolated = 0.0;
  double field_scale = 0.0;    // |m psi|
  double h = 0.0;
  double order_estimate = 0.0;  // log2(residual(h) / residual(h/2))
};

using LabState = std::function<Spinor4(const SpacetimePoint&)>;
using RindlerState = std::function<Spinor4(const RindlerPoint&)>;

// (i g0 d_T + i g3 d_Z - 1) psi with second-order central differences.
ResidualReport residual_free(const LabState& psi, const SpacetimePoint& x, double h = 1e-3);

// (i g^mu d_mu - g_mu eA^mu - 1) psi = (i g0 d_T + i g3 d_Z + g1 f1 + g2 f2 - 1) psi.
ResidualReport residual_planewave(const LabState& psi, const FieldProfile& f, const SpacetimePoint& x,
                                  double h = 1e-3);

// [-u + i(g0 d_eta + g3 (u d_u + 1/2))] psi.
ResidualReport residual_rindler(const RindlerState& psi, const RindlerPoint& x, double h = 1e-3);

enum class TransformedStage {
  Lab,     // derivatives in (T, Z); R and psi_R as functions of the lab point
  Primed,  // derivatives in (T', Z'); gamma'^nu = (dx'^nu/dx^mu) gamma~^mu, A at xi(xi')
};

// i gamma~^mu (d_mu + Omega_mu) psi_R - gamma~_mu eA^mu psi_R - psi_R with
// psi_R = rest_frame_spinor, gamma~ from vierbein(R) and Omega_mu from
// spinor_connection (fourth order, step h) in the chart of the stage.
ResidualReport residual_transformed(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x,
                                    double h = 1e-3, TransformedStage stage = TransformedStage::Lab,
                                    const Conventions& c = {}, const QuadratureSpec& q = {});

struct OracleComparison {
  double max_rel_err = 0.0;
  SpacetimePoint argmax;
  int evaluated = 0;
  int masked = 0;
};

// Per point |closed - oracle|_inf / |oracle|_inf, maximised over the grid in
// the order given. Masked points are skipped; an all-masked grid throws
// ErrorKind::Coverage. Points are evaluated on `threads` workers (0 = default).
OracleComparison oracle_compare(const LabState& closed, const LabState& oracle,
                                const std::vector<SpacetimePoint>& grid, int threads = 0);

// Residual gates run by `verify` and the acceptance suite. A gate passes when
// the gated residual is below its tolerance (1e-6, or 1e-4 for the
// transformed frame) and the refinement slope is 2 +- 0.3. The slope is not
// judged once the h/2 residual is under 1e-12, where round-off dominates.
//
// Raw gates residual_norm at h itself. For the exact states that number is the
// stencil's own truncation error, which for Omega = 5 or Volkov b = 1 already
// exceeds 1e-6 at h = 1e-3. Extrapolated gates the Richardson combination
// instead, which measures how far the state is from solving the equation.
enum class GateMode { Raw, Extrapolated };

const char* to_string(GateMode m);

struct GateOptions {
  std::string suite = "all";  // all, rindler, volkov, free, laser, transformed
  double h = 1e-3;
  GateMode mode = GateMode::Extrapolated;
  int random_points = 0;  // extra seeded points per case, on top of the fixed ones
  std::uint64_t seed = 0;
  int threads = 0;
};

struct GateResult {
  std::string name;
  ResidualReport report;
  double tolerance = 0.0;
  double gated_value = 0.0;
  bool floor_reached = false;
  bool passed = false;
};

// Throws ErrorKind::Usage for an unknown suite name.
std::vector<GateResult> residual_gates(const GateOptions& opt);

}  // namespace nsp
