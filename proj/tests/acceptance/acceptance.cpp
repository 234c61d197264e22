// Acceptance suite: one PASS/FAIL line per criterion, thresholds as stated in
// the criteria list. A failing criterion is reported with the numbers behind
// it and makes the process exit 1; nothing here loosens a threshold.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "nonspread/analytics.hpp"
#include "nonspread/verify.hpp"

using namespace nsp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("[%s] C%-2d %s\n       %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double linspace(double lo, double hi, int n, int k) { return lo + (hi - lo) * k / (n - 1); }

std::vector<SpacetimePoint> fig1_points() {
  std::vector<SpacetimePoint> pts;
  for (int j = 0; j < 20; ++j) {
    for (int i = 0; i < 20; ++i) pts.push_back({linspace(0.0, 60.0, 20, j), linspace(5.0, 80.0, 20, i)});
  }
  return pts;
}

// ---------------------------------------------------------------------------

void special_function_floor() {
  Stopwatch sw;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> re(0.1, 50.0), im(-20.0, 20.0);
  double worst_half = 0.0;
  for (int k = 0; k < 100; ++k) {
    const cplx z(re(rng), im(rng));
    const cplx exact = std::sqrt(pi / (2.0 * z)) * std::exp(-z);
    worst_half = std::max(worst_half, std::abs(bessel_k(cplx(0.5, 0.0), z) / exact - 1.0));
  }
  std::uniform_real_distribution<double> nre(-3.0, 3.0), nim(-50.0, 50.0), zre(0.5, 40.0), zim(-5.0, 5.0);
  double worst_rec = 0.0;
  for (int k = 0; k < 100; ++k) {
    const cplx nu(nre(rng), nim(rng)), z(zre(rng), zim(rng));
    const cplx km = bessel_k(nu - 1.0, z), k0 = bessel_k(nu, z), kp = bessel_k(nu + 1.0, z);
    const double scale = std::max({std::abs(km), std::abs(kp), std::abs(2.0 * nu / z * k0)});
    worst_rec = std::max(worst_rec, std::abs(kp - km - 2.0 * nu / z * k0) / scale);
  }
  const double t = sw.seconds();
  report(1, worst_half < 1e-10 && worst_rec < 1e-9 && t < 5.0, "special-function floor",
         fmt("K_1/2 max rel err %.2e (< 1e-10), recurrence %.2e (< 1e-9), %.2f s (< 5 s)", worst_half, worst_rec, t));
}

void oracle_free() {
  Stopwatch sw;
  const PacketParams pp{30.0, 0.005, 0.0};
  const auto c = oracle_compare([&](const SpacetimePoint& x) { return free_nonspreading(pp, x); },
                                [&](const SpacetimePoint& x) { return free_quadrature(pp, x); }, fig1_points());
  const double t = sw.seconds();
  report(2, c.max_rel_err < 1e-8 && t < 60.0, "oracle equivalence, free packet",
         fmt("max rel err %.2e at (T, Z) = (%.3g, %.3g) over %d points, %d masked, %.1f s (< 60 s)", c.max_rel_err,
             c.argmax.T, c.argmax.Z, c.evaluated, c.masked, t));
}

void oracle_laser() {
  const PacketParams pp{30.0, 0.005, 0.0};
  const auto lin = FieldProfile::linear(1.0, 0.1);
  const LabState oracle = [&](const SpacetimePoint& x) { return laser_quadrature(pp, lin, x); };
  const auto good = oracle_compare([&](const SpacetimePoint& x) { return laser_nonspreading(pp, lin, x); }, oracle,
                                   fig1_points());
  Conventions flipped;
  flipped.phi_sign = -1;
  const auto bad = oracle_compare(
      [&](const SpacetimePoint& x) { return laser_nonspreading(pp, lin, x, flipped); }, oracle, fig1_points());
  const double ratio = bad.max_rel_err / std::max(good.max_rel_err, 1e-300);
  report(3, good.max_rel_err < 1e-8 && ratio >= 1e6, "oracle equivalence, laser packet",
         fmt("max rel err %.2e (< 1e-8); flipped Phibar sign %.2e, ratio %.1e (>= 1e6)", good.max_rel_err,
             bad.max_rel_err, ratio));
}

void residual_gates_criterion() {
  Stopwatch sw;
  GateOptions raw;
  raw.mode = GateMode::Raw;
  const auto gates = residual_gates(raw);
  bool pass = true;
  std::ostringstream detail;
  detail << "raw residual at h = 1e-3 (the literal gate); extrapolated value shown for reference";
  for (const auto& g : gates) {
    const double slope = g.report.order_estimate;
    pass = pass && g.passed;
    detail << fmt("\n         %-4s %-42s raw %.2e  extrap %.2e  slope %s  tol %.0e", g.passed ? "ok" : "FAIL",
                  g.name.c_str(), g.report.residual_norm, g.report.residual_extrapolated,
                  g.floor_reached ? "floor" : fmt("%.3f", slope).c_str(), g.tolerance);
  }
  const double t = sw.seconds();
  pass = pass && t < 300.0;
  detail << fmt("\n       %.1f s (< 300 s)", t);
  report(4, pass, "Dirac residual gates", detail.str());
}

void rest_frame_definition() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> T(0.0, 60.0), Z(5.0, 80.0);
  const PacketParams pp{30.0, 0.005, 0.0};
  double worst_off = 0.0, worst_on = 0.0;
  const auto lin = FieldProfile::linear(1.0, 0.1);
  const FieldProfile off = FieldProfile::off();
  for (int field = 0; field < 2; ++field) {
    const FieldProfile& f = field ? lin : off;
    double& worst = field ? worst_on : worst_off;
    int done = 0;
    while (done < 100) {
      const SpacetimePoint x{T(rng), Z(rng)};
      try {
        const FourVector j = current(rest_frame_spinor(pp, f, x));
        worst = std::max(worst, j.tail<3>().norm() / std::abs(j(0)));
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Masked) throw;
      }
    }
  }
  report(5, worst_off < 1e-8 && worst_on < 1e-8, "rest-frame definition",
         fmt("|j_spatial| / |j0| max %.2e field off, %.2e field on (< 1e-8), 100 points each", worst_off, worst_on));
}

void eigenstate_stationarity() {
  double worst = 0.0;
  for (double Om : {0.0, 3.0, 5.0}) {
    for (double u : {0.1, 0.7, 2.0, 5.0}) {
      const double ref = rindler_eigenstate(Om, {0.0, u}).squaredNorm();
      for (double eta = -6.0; eta <= 6.0; eta += 0.5) {
        worst = std::max(worst, std::abs(rindler_eigenstate(Om, {eta, u}).squaredNorm() / ref - 1.0));
      }
    }
  }
  report(6, worst < 1e-12, "eigenstate stationarity",
         fmt("max relative eta-variation of the density %.2e (< 1e-12)", worst));
}

// Criterion 7 helpers.
struct FringeCheck {
  int maxima = 0;
  int inside = 0;
  int off_hyperbola = 0;
  double worst_cells = 0.0;
  double inside_T_min = 1e300, inside_T_max = -1e300;  // rows hosting maxima inside the cone
  double worst_T = 0.0;                                  // row of the worst hyperbola offset
};

FringeCheck fringe_geometry(const DensityGrid& g) {
  FringeCheck out;
  const double dz = g.axis1[1] - g.axis1[0];
  const auto rows = detect_fringes(g, 0.05);
  // Reference hyperbolae: the maxima of the T = 0 row, where Z = sqrt(Z^2 - T^2).
  const std::vector<double>& ref = rows.front().positions;
  for (const auto& row : rows) {
    for (double z : row.positions) {
      ++out.maxima;
      if (z <= std::abs(row.c2)) {
        ++out.inside;
        out.inside_T_min = std::min(out.inside_T_min, row.c2);
        out.inside_T_max = std::max(out.inside_T_max, row.c2);
        continue;
      }
      double best = 1e300;
      for (double s : ref) best = std::min(best, std::abs(std::sqrt(s * s + row.c2 * row.c2) - z));
      const double cells = best / dz;
      // A fringe whose hyperbola starts left of the window edge has no reference.
      if (std::sqrt(std::max(0.0, z * z - row.c2 * row.c2)) < ref.front() - dz) continue;
      if (cells > out.worst_cells) {
        out.worst_cells = cells;
        out.worst_T = row.c2;
      }
      if (cells > 1.0) ++out.off_hyperbola;
    }
  }
  return out;
}

void fig1() {
  GridRequest r;
  r.params = {30.0, 0.005, 0.0};
  r.window = {0.0, 80.0, 0.0, 60.0};
  r.n1 = 401;
  r.n2 = 61;
  const DensityGrid narrow = density_grid(r);
  r.params.abar = 2.0;
  const DensityGrid wide = density_grid(r);
  const FringeCheck fn = fringe_geometry(narrow), fw = fringe_geometry(wide);

  // Contrast on the row T = 30 over the part of it outside the cone.
  const std::size_t row = 30;
  const double T = narrow.axis2[row];
  const double cn = fringe_contrast(narrow, row, T + 1.0, 80.0);
  const double cw = fringe_contrast(wide, row, T + 1.0, 80.0);
  const bool pass = fn.maxima > 0 && fn.inside == 0 && fw.inside == 0 && fn.off_hyperbola == 0 &&
                    fw.off_hyperbola == 0 && cw < cn;
  auto describe = [](const char* label, const FringeCheck& f) {
    std::string d = fmt("abar %s: %d maxima, %d inside the cone", label, f.maxima, f.inside);
    if (f.inside > 0) d += fmt(" (rows T = %.0f..%.0f)", f.inside_T_min, f.inside_T_max);
    d += fmt(", worst hyperbola offset %.2f cells (T = %.0f)", f.worst_cells, f.worst_T);
    return d;
  };
  report(7, pass, "Fig. 1 fringe geometry",
         describe("0.005", fn) + ";\n       " + describe("2", fw) +
             fmt(";\n       contrast at T = %.0f: %.3f (abar 0.005) vs %.3f (abar 2)", T, cn, cw));
}

void fig2b() {
  Stopwatch sw;
  const PacketParams pp{40.0, 1e-6, 0.0};
  std::vector<double> sig;
  std::string table;
  for (int eta = 1; eta <= 14; ++eta) {
    sig.push_back(variance_u_numeric(pp, eta).sigma);
    table += fmt(" %.4g", sig.back());
  }
  const auto [lo, hi] = std::minmax_element(sig.begin(), sig.begin() + 10);
  const double drift = *hi / *lo - 1.0;
  const double growth = sig[13] / sig[1] - 1.0;
  const double t = sw.seconds();
  report(8, drift < 0.05 && growth > 0.20 && t < 600.0, "Fig. 2(b) width plateau and growth",
         fmt("drift over eta 1..10 %.2f%% (< 5%%); du(14)/du(2) - 1 = %+.1f%% (> +20%%); %.1f s (< 600 s)\n"
             "       du(eta = 1..14):%s",
             100.0 * drift, 100.0 * growth, t, table.c_str()));
}

void fig2a() {
  bool bounded = true;
  for (double alpha : {10.0, 20.0, 30.0, 40.0}) {
    for (double la = -18.0; la <= -1.0; la += 1.0) {
      const double A = asymmetry({alpha, std::pow(10.0, la), 0.0}, 1.0).value;
      bounded = bounded && A >= -1.0 && A <= 1.0;
    }
  }
  // In double precision A rounds to 1 over this range, so the trend is read
  // from 1 - A = 2 N_out / (N_tot + N_out), which is computed directly.
  std::vector<double> comp;
  for (double a : {1e-3, 1e-2, 1e-1}) comp.push_back(asymmetry({30.0, a, 0.0}, 1.0).complement);
  const bool increasing = comp[0] > comp[1] && comp[1] > comp[2];

  // abar at which A = 1/2, by bisection in log abar over [1e-18, 1e-1].
  std::vector<double> star;
  for (double alpha : {10.0, 20.0, 30.0, 40.0}) {
    double lo = std::log(1e-18), hi = std::log(1e-1);
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      (asymmetry({alpha, std::exp(mid), 0.0}, 1.0).value < 0.5 ? lo : hi) = mid;
    }
    star.push_back(std::exp(0.5 * (lo + hi)));
  }
  const bool level = std::is_sorted(star.begin(), star.end()) &&
                     std::adjacent_find(star.begin(), star.end()) == star.end();
  report(9, bounded && increasing && level, "Fig. 2(a) asymmetry trends",
         fmt("A in [-1, 1]: %s; 1 - A at abar 1e-3, 1e-2, 1e-1: %.3e, %.3e, %.3e (A increasing: %s);\n"
             "       A = 0.5 at abar* = %.3e, %.3e, %.3e, %.3e for alpha = 10, 20, 30, 40 (increasing: %s)",
             bounded ? "yes" : "no", comp[0], comp[1], comp[2], increasing ? "yes" : "no", star[0], star[1], star[2],
             star[3], level ? "yes" : "no"));
}

void variance_closed_form() {
  double worst_d2 = 0.0, worst_mom = 0.0;
  for (double alpha : {1.0, 5.0, 30.0}) {
    for (double abar : {0.1, 0.5, 1.0}) {
      const PacketParams pp{alpha, abar, 0.0};
      const double d0 = variance_z_closed(pp, 0.0).delta2;
      for (double T : {0.0, 10.0, 50.0}) {
        const ZMoments c = variance_z_closed(pp, T);
        worst_d2 = std::max(worst_d2, std::abs(c.delta2 / d0 - 1.0));
      }
      const ZMoments c = variance_z_closed(pp, 10.0), n = variance_z_numeric(pp, 10.0);
      worst_mom = std::max({worst_mom, std::abs(n.mean / c.mean - 1.0), std::abs(n.variance / c.variance - 1.0),
                            std::abs(n.norm / c.norm - 1.0)});
    }
  }
  report(10, worst_d2 < 1e-10 && worst_mom < 1e-6, "variance closed form",
         fmt("delta2 variation over T in {0, 10, 50}: %.2e (< 1e-10); closed vs numeric moments at T = 10 on "
             "{1, 5, 30} x {0.1, 0.5, 1}: %.2e (< 1e-6)",
             worst_d2, worst_mom));
}

bool run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void lifetimes(const std::string& cli, const fs::path& dir) {
  const Lifetime a = lifetime({30.0, 0.005, 0.0}), b = lifetime({30.0, 0.001, 0.0});
  const double fa = a.t_paper_s * 1e15, fb = b.t_paper_s * 1e15;
  // The quoted values carry two and three significant figures respectively;
  // agreement means equality after rounding to the digits quoted.
  const bool match = std::abs(fa - 0.73) <= 0.005 && std::abs(fb - 3.64) <= 0.005;
  bool documented = false;
  const fs::path out = dir / "lifetime.json";
  if (run_cli(cli, "lifetime --alpha 30 --abar 0.005 --out " + out.string())) {
    const auto j = nlohmann::json::parse(slurp(out));
    documented = j["conventions"].contains("lifetime_convention") && j.contains("note");
  }
  report(11, match && documented, "lifetime numbers",
         fmt("2pi convention: %.4g fs, %.4g fs (quoted 0.73, 3.64); reduced: %.4g fs, %.4g fs; convention in sidecar: "
             "%s",
             fa, fb, a.t_reduced_s * 1e15, b.t_reduced_s * 1e15, documented ? "yes" : "no"));
}

void collider() {
  const ColliderEstimate c = collider_estimates(1e-6, 100.0, 1000.0);
  const double target = 3e-17;
  auto within4 = [&](double t) { return t >= target / 4.0 && t <= target * 4.0; };
  // The quoted 3e-17 s is (1/omega)/gamma with hbar/omega = 1.29e-15 s for
  // omega = 1e-6 m; the 2 omega gamma Doppler factor halves it.
  const double inv_omega = c.recollision_time_inv_omega_s, inv_omega_doppler = 0.5 * inv_omega;
  const bool pass = c.gamma_rf >= 28.0 && c.gamma_rf <= 40.0 && c.omega0_gev >= 2.0 && c.omega0_gev <= 2.8 &&
                    std::abs(c.rr_fraction - 0.146) <= 0.002 && within4(inv_omega) && within4(inv_omega_doppler);
  report(12, pass, "collider calculator",
         fmt("gamma %.3f [28, 40]; Omega0 %.3f GeV [2.0, 2.8]; rr_fraction %.4f (0.146 +- 0.002);\n"
             "       recollision (1/omega)/gamma %.2e s, with Doppler factor 2 %.2e s (3e-17 within x4); "
             "T_L/gamma %.2e s and T_L/(2 gamma) %.2e s shown for reference",
             c.gamma_rf, c.omega0_gev, c.rr_fraction, inv_omega, inv_omega_doppler, c.recollision_time_s,
             c.recollision_time_doppler_s));
}

void determinism(const std::string& cli, const fs::path& dir) {
  const std::vector<std::string> jobs = {
      "density --alpha 30 --abar 0.005 --window 0,80,0,60 --res 60,45",
      "density --state laser --field linear --a0 1 --omega-bar 0.1 --alpha 30 --abar 0.005 --window 5,80,0,60 "
      "--res 30",
      "asymmetry --alpha 10,30 --abar 1e-3,1e-2 --time 1fs",
      "variance --coord z --alpha 5,30 --abar 0.1,0.5 --time 0,10",
  };
  int identical = 0;
  std::string bad;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const fs::path out = dir / ("det" + std::to_string(k) + ".csv");
    std::string first, first_meta;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const std::string threads = rep == 0 ? " --threads 1" : " --threads 0";
      if (!run_cli(cli, jobs[k] + threads + " --out " + out.string())) {
        same = false;
        break;
      }
      const std::string body = slurp(out);
      auto meta = nlohmann::json::parse(slurp(out.string() + ".json"));
      meta["config"].erase("threads_requested");
      if (rep == 0) {
        first = body;
        first_meta = meta.dump();
      } else {
        same = body == first && meta.dump() == first_meta;
      }
    }
    if (same) {
      ++identical;
    } else {
      bad += " [" + jobs[k] + "]";
    }
  }
  report(13, identical == static_cast<int>(jobs.size()), "determinism",
         fmt("%d of %zu CLI jobs byte-identical across repeated runs (1 thread vs all cores)%s", identical,
             jobs.size(), bad.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string cli;
  std::string workdir = (fs::temp_directory_path() / "nonspread_acceptance").string();
  app.add_option("--cli", cli, "Path to the nonspread executable")->required();
  app.add_option("--workdir", workdir, "Scratch directory for CLI outputs");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(workdir);

  const std::vector<std::pair<int, std::function<void()>>> criteria = {
      {1, special_function_floor},
      {2, oracle_free},
      {3, oracle_laser},
      {4, residual_gates_criterion},
      {5, rest_frame_definition},
      {6, eigenstate_stationarity},
      {7, fig1},
      {8, fig2b},
      {9, fig2a},
      {10, variance_closed_form},
      {11, [&] { lifetimes(cli, workdir); }},
      {12, collider},
      {13, [&] { determinism(cli, workdir); }},
  };
  for (const auto& [id, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, "aborted", e.what());
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - g_failures, criteria.size());
  return g_failures == 0 ? 0 : 1;
}
