#include "nonspread/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "nonspread/parallel.hpp"

namespace nsp {

namespace {

using Operator = std::function<Spinor4(double h)>;

ResidualReport finish(std::string setting, double c1, double c2, const Spinor4& psi, double h, const Operator& op) {
  ResidualReport r;
  r.setting = std::move(setting);
  r.c1 = c1;
  r.c2 = c2;
  r.h = h;
  r.field_scale = psi.norm();
  if (!(r.field_scale > 0.0)) throw Error(ErrorKind::Masked, "residual: state vanishes at the point");
  const Spinor4 full = op(h);
  const Spinor4 half = op(0.5 * h);
  r.residual_norm = full.norm() / r.field_scale;
  r.residual_half = half.norm() / r.field_scale;
  r.residual_extrapolated = ((4.0 * half - full) / 3.0).norm() / r.field_scale;
  r.order_estimate = std::log2(r.residual_norm / r.residual_half);
  return r;
}

}  // namespace

ResidualReport residual_planewave(const LabState& psi, const FieldProfile& f, const SpacetimePoint& x, double h) {
  const auto& gs = gamma_set();
  const Spinor4 centre = psi(x);
  const FieldValue a = fdot(f, light_cone_phase(f, x));
  const Matrix4C mass_field = gs.g[1] * a.f1 + gs.g[2] * a.f2 - Matrix4C::Identity();
  auto op = [&](double s) -> Spinor4 {
    const Spinor4 dT = (psi({x.T + s, x.Z}) - psi({x.T - s, x.Z})) / (2 * s);
    const Spinor4 dZ = (psi({x.T, x.Z + s}) - psi({x.T, x.Z - s})) / (2 * s);
    return I * (gs.g[0] * dT + gs.g[3] * dZ) + mass_field * centre;
  };
  return finish(f.is_off() ? "free" : "planewave", x.T, x.Z, centre, h, op);
}

ResidualReport residual_free(const LabState& psi, const SpacetimePoint& x, double h) {
  return residual_planewave(psi, FieldProfile::off(), x, h);
}

ResidualReport residual_rindler(const RindlerState& psi, const RindlerPoint& x, double h) {
  if (!(x.u - 2 * h > 0.0)) throw Error(ErrorKind::Wedge, "residual_rindler: stencil leaves the wedge (u - 2h <= 0)");
  const auto& gs = gamma_set();
  const Spinor4 centre = psi(x);
  auto op = [&](double s) -> Spinor4 {
    const Spinor4 de = (psi({x.eta + s, x.u}) - psi({x.eta - s, x.u})) / (2 * s);
    const Spinor4 du = (psi({x.eta, x.u + s}) - psi({x.eta, x.u - s})) / (2 * s);
    return -x.u * centre + I * (gs.g[0] * de + gs.g[3] * (x.u * du + 0.5 * centre));
  };
  return finish("rindler", x.eta, x.u, centre, h, op);
}

ResidualReport residual_transformed(const PacketParams& pp, const FieldProfile& f, const SpacetimePoint& x, double h,
                                    TransformedStage stage, const Conventions& c, const QuadratureSpec& q) {
  const FieldValue a = fdot(f, light_cone_phase(f, x));
  const bool primed = stage == TransformedStage::Primed;

  // Lab point of a chart point.
  auto lab_of = [&](double c0, double c3) -> SpacetimePoint {
    return primed ? unprimed_coords({c0, c3}, f) : SpacetimePoint{c0, c3};
  };
  const SpacetimePoint xc = primed ? primed_coords(x, f) : x;
  const ChartPoint chart_x(xc.T, 0.0, 0.0, xc.Z);

  const TetradField tetrad = [&](const ChartPoint& y) { return vierbein(crdi_matrix(pp, f, lab_of(y[0], y[3]), c, q)); };
  auto rest = [&](double c0, double c3) { return rest_frame_spinor(pp, f, lab_of(c0, c3), c, q); };

  const Tetrad centre_tetrad = tetrad(chart_x);
  const std::array<Matrix4C, 4> gt = frame_gammas(centre_tetrad);
  std::array<Matrix4C, 4> gd = gt;  // gamma multiplying d_nu in the chart
  if (primed) {
    const double half = 0.5 * (a.f1 * a.f1 + a.f2 * a.f2);
    gd[0] = (1.0 + half) * gt[0] - half * gt[3];
    gd[3] = -half * gt[0] + (1.0 + half) * gt[3];
  }
  // -gamma~_mu eA^mu - 1 with eA^mu = (0, f1, f2, 0).
  const Matrix4C mass_field = gt[1] * a.f1 + gt[2] * a.f2 - Matrix4C::Identity();
  const Spinor4 centre = rest(xc.T, xc.Z);

  auto op = [&](double s) -> Spinor4 {
    const SpinorConnection conn = spinor_connection(tetrad, chart_x, s, 4, primed ? "primed" : "lab");
    const Spinor4 d0 = (rest(xc.T + s, xc.Z) - rest(xc.T - s, xc.Z)) / (2 * s);
    const Spinor4 d3 = (rest(xc.T, xc.Z + s) - rest(xc.T, xc.Z - s)) / (2 * s);
    Spinor4 out = I * (gd[0] * (d0 + conn.omega[0] * centre) + gd[3] * (d3 + conn.omega[3] * centre));
    out += I * (gd[1] * (conn.omega[1] * centre) + gd[2] * (conn.omega[2] * centre));
    return out + mass_field * centre;
  };
  return finish(primed ? "transformed-primed" : "transformed-lab", x.T, x.Z, centre, h, op);
}

OracleComparison oracle_compare(const LabState& closed, const LabState& oracle, const std::vector<SpacetimePoint>& grid,
                                int threads) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> err(grid.size(), nan);
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        try {
          const Spinor4 c = closed(grid[i]);
          const Spinor4 o = oracle(grid[i]);
          err[i] = (c - o).cwiseAbs().maxCoeff() / o.cwiseAbs().maxCoeff();
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Masked) throw;
        }
      },
      threads);
  OracleComparison out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::isnan(err[i])) {
      ++out.masked;
      continue;
    }
    ++out.evaluated;
    if (out.evaluated == 1 || err[i] > out.max_rel_err) {
      out.max_rel_err = err[i];
      out.argmax = grid[i];
    }
  }
  if (out.evaluated == 0) throw Error(ErrorKind::Coverage, "oracle_compare: every grid point is masked");
  return out;
}

const char* to_string(GateMode m) { return m == GateMode::Raw ? "raw" : "extrapolated"; }

std::vector<GateResult> residual_gates(const GateOptions& opt) {
  static const char* const suites[] = {"all", "rindler", "volkov", "free", "laser", "transformed"};
  if (std::find(std::begin(suites), std::end(suites), opt.suite) == std::end(suites)) {
    throw Error(ErrorKind::Usage, "residual_gates: unknown suite '" + opt.suite + "'");
  }
  if (!(opt.h > 0.0)) throw Error(ErrorKind::Usage, "residual_gates: h must be positive");
  auto wanted = [&](const char* s) { return opt.suite == "all" || opt.suite == s; };

  struct Case {
    std::string name;
    double tol;
    std::function<ResidualReport()> run;
  };
  std::vector<Case> cases;
  std::mt19937_64 rng(opt.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const double h = opt.h;

  const PacketParams fig1{30.0, 0.005, 0.0};
  const PacketParams small{3.0, 0.5, 0.0};
  const FieldProfile lin = FieldProfile::linear(1.0, 0.1);
  const FieldProfile circ = FieldProfile::circular(1.0, 0.1);
  auto tag = [](const std::string& base, double a, double b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s @(%.4g,%.4g)", base.c_str(), a, b);
    return std::string(buf);
  };

  if (wanted("rindler")) {
    for (double Om : {0.0, 3.0, 5.0}) {
      std::vector<RindlerPoint> pts{{0.3, 2.0}};
      for (int k = 0; k < opt.random_points; ++k) pts.push_back({uniform(-1.0, 1.0), uniform(0.5, 4.0)});
      for (const auto& p : pts) {
        const std::string base = "rindler Omega=" + std::to_string(static_cast<int>(Om));
        cases.push_back({tag(base, p.eta, p.u), 1e-6, [=] {
                           return residual_rindler([=](const RindlerPoint& r) { return rindler_eigenstate(Om, r); }, p, h);
                         }});
      }
    }
  }
  if (wanted("volkov")) {
    for (const FieldProfile* f : {&lin, &circ}) {
      for (double b : {0.0, 1.0, -1.0}) {
        std::vector<SpacetimePoint> pts{{1.3, 2.4}};
        for (int k = 0; k < opt.random_points; ++k) pts.push_back({uniform(-5.0, 5.0), uniform(-5.0, 5.0)});
        for (const auto& p : pts) {
          const FieldProfile fp = *f;
          const std::string base = std::string("volkov ") + to_string(fp.kind) + " b=" + std::to_string(static_cast<int>(b));
          cases.push_back({tag(base, p.T, p.Z), 1e-6, [=] {
                             return residual_planewave([=](const SpacetimePoint& x) { return volkov(b, fp, x); }, fp, p, h);
                           }});
        }
      }
    }
  }
  // Packet points come from the Fig. 1 window, Z in [5, 80] and T in [0, 60].
  auto packet_points = [&] {
    std::vector<SpacetimePoint> pts{{1.0, 35.0}};
    for (int k = 0; k < opt.random_points; ++k) pts.push_back({uniform(0.0, 60.0), uniform(5.0, 80.0)});
    return pts;
  };
  if (wanted("free")) {
    for (const auto& p : packet_points()) {
      cases.push_back({tag("free alpha=30 abar=0.005", p.T, p.Z), 1e-6, [=] {
                         return residual_free([=](const SpacetimePoint& x) { return free_nonspreading(fig1, x); }, p, h);
                       }});
    }
  }
  if (wanted("laser")) {
    for (const auto& p : packet_points()) {
      cases.push_back({tag("laser linear a0=1 alpha=30 abar=0.005", p.T, p.Z), 1e-6, [=] {
                         return residual_planewave(
                             [=](const SpacetimePoint& x) { return laser_nonspreading(fig1, lin, x); }, lin, p, h);
                       }});
    }
  }
  if (wanted("transformed")) {
    for (auto stage : {TransformedStage::Lab, TransformedStage::Primed}) {
      const std::string st = stage == TransformedStage::Lab ? "lab" : "primed";
      cases.push_back({tag("transformed-" + st + " alpha=3 abar=0.5", 1.3, 2.4), 1e-4,
                       [=] { return residual_transformed(small, lin, {1.3, 2.4}, h, stage); }});
      for (const auto& p : packet_points()) {
        cases.push_back({tag("transformed-" + st + " alpha=30 abar=0.005", p.T, p.Z), 1e-4,
                         [=] { return residual_transformed(fig1, lin, p, h, stage); }});
      }
    }
  }

  std::vector<GateResult> out(cases.size());
  parallel_for(
      cases.size(),
      [&](std::size_t i) {
        GateResult g;
        g.name = cases[i].name;
        g.tolerance = cases[i].tol;
        g.report = cases[i].run();
        g.gated_value = opt.mode == GateMode::Raw ? g.report.residual_norm : g.report.residual_extrapolated;
        g.floor_reached = g.report.residual_half < 1e-12;
        const bool slope_ok = g.floor_reached || std::abs(g.report.order_estimate - 2.0) <= 0.3;
        g.passed = g.gated_value < g.tolerance && slope_ok;
        out[i] = std::move(g);
      },
      opt.threads);
  return out;
}

}  // namespace nsp
