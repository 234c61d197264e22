#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "nonspread/parallel.hpp"

namespace nsp::cli {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".partial-" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, target);
}

nlohmann::ordered_json metadata(const RunConfig& cfg) {
  const auto& c = cfg.conventions;
  nlohmann::ordered_json m;
  m["tool"] = "nonspread";
  m["version"] = "0.1.0";
  m["conventions"] = {
      {"component_order", to_string(c.order)},
      {"chirp", c.chirp_sign < 0 ? "exp(-i alpha b)" : "exp(+i alpha b)"},
      {"chirp_sign", c.chirp_sign},
      {"omega_sign", c.chirp_sign < 0 ? "alpha = +Omega" : "alpha = -Omega"},
      {"phi_sign", c.phi_sign},
      {"phibar", "Phibar = -(1/(2 omega_bar)) int_0^xi f^2 <= 0; T' = T - s Phibar, Z' = Z + s Phibar with s = phi_sign"},
      {"lifetime_convention", "t_reduced = (hbar/mc^2)(alpha^2 - abar^2)/(2 abar); t_paper = 2 pi t_reduced; both reported"},
      {"time_bridge", cfg.bridge == TimeBridge::Reduced ? "reduced: 1 Compton time = 1.28808866819e-21 s"
                                                        : "2pi: 1 Compton time = 2 pi x 1.28808866819e-21 s"},
      {"asymmetry", "A = (N_total - N_outside)/(N_total + N_outside); N_total = 8 pi K0(2 abar), N_outside = lab "
                    "norm beyond the right light cone Z > |T|"},
      {"units", "lengths in hbar/mc, times in hbar/mc^2, fields as fdot/m"}};
  m["config"] = cfg.echo;
  return m;
}

namespace {

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    s += format_double(v);
    first = false;
  }
  s += '\n';
  return s;
}

// CSV outputs go to --out with the metadata in a sidecar at --out + ".json".
// Without --out only the CSV is printed, so it can be piped as is.
void emit_table(const RunConfig& cfg, const std::string& csv, nlohmann::ordered_json side, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << csv;
    return;
  }
  write_atomic(cfg.output_path, csv);
  write_atomic(cfg.output_path + ".json", side.dump(2) + "\n");
  out << "wrote " << cfg.output_path << " and " << cfg.output_path << ".json\n";
}

void emit_json(const RunConfig& cfg, const nlohmann::ordered_json& doc, std::ostream& out) {
  if (!cfg.output_path.empty()) {
    write_atomic(cfg.output_path, doc.dump(2) + "\n");
    out << "wrote " << cfg.output_path << "\n";
  }
}

int run_density(const RunConfig& cfg, std::ostream& out) {
  GridRequest req;
  req.state = cfg.state;
  req.frame = cfg.frame;
  req.params = {cfg.alphas.front(), cfg.abars.front(), cfg.Omega};
  req.field = cfg.field;
  req.conventions = cfg.conventions;
  req.window = cfg.window;
  req.n1 = cfg.n1;
  req.n2 = cfg.n2;
  req.normalization = cfg.normalization;
  req.light_cone_band = cfg.band;
  req.threads = cfg.threads;
  req.quadrature = cfg.quadrature;
  const DensityGrid g = density_grid(req);

  const double total = static_cast<double>(g.values.size());
  const double coverage = 1.0 - g.masked_cells / total;
  if (coverage < cfg.min_coverage) {
    throw NumericalFailure("unmasked coverage " + format_double(coverage) + " is below --min-coverage " +
                           format_double(cfg.min_coverage));
  }

  std::string csv = "coord1,coord2,value,mask\n";
  for (std::size_t j = 0; j < g.n2(); ++j) {
    for (std::size_t i = 0; i < g.n1(); ++i) {
      csv += format_double(g.axis1[i]) + ',' + format_double(g.axis2[j]) + ',' + format_double(g.at(i, j)) + ',' +
             (g.masked(i, j) ? "1" : "0") + '\n';
    }
  }
  auto side = metadata(cfg);
  const bool lab = g.frame == Frame::Lab;
  side["grid"] = {{"frame", to_string(g.frame)},
                  {"coord1", lab ? "Z (Compton lengths)" : "u (Compton lengths)"},
                  {"coord2", lab ? "T (Compton times)" : "eta (rapidity)"},
                  {"n1", g.n1()},
                  {"n2", g.n2()},
                  {"row_order", "coord2 outer, coord1 inner"},
                  {"normalization", to_string(g.normalization)},
                  {"raw_integral", g.raw_integral},
                  {"cells", g.values.size()},
                  {"masked_cells", g.masked_cells},
                  {"light_cone_cells", g.light_cone_cells},
                  {"coverage", coverage},
                  {"branch_flags", g.branch_flags}};
  emit_table(cfg, csv, side, out);
  out << "density: " << g.n1() << "x" << g.n2() << " cells, " << g.masked_cells << " masked, raw integral "
      << format_double(g.raw_integral) << "\n";
  return 0;
}

template <class F>
std::vector<std::string> sweep(std::size_t n, int threads, F row) {
  std::vector<std::string> rows(n);
  parallel_for(n, [&](std::size_t k) { rows[k] = row(k); }, threads);
  return rows;
}

int run_asymmetry(const RunConfig& cfg, std::ostream& out) {
  const std::size_t na = cfg.alphas.size(), nb = cfg.abars.size(), nt = cfg.times_fs.size();
  auto rows = sweep(na * nb * nt, cfg.threads, [&](std::size_t k) {
    const double alpha = cfg.alphas[k / (nb * nt)];
    const double abar = cfg.abars[(k / nt) % nb];
    const std::size_t t = k % nt;
    const auto r = asymmetry({alpha, abar, 0.0}, cfg.times_fs[t], cfg.bridge, cfg.quadrature);
    return csv_row({alpha, abar, cfg.times_fs[t], r.T_compton, r.value, r.complement, r.n_total, r.n_outside});
  });
  std::string csv = "alpha,abar,time_fs,time_compton,asymmetry,complement,n_total,n_outside\n";
  for (const auto& r : rows) csv += r;
  emit_table(cfg, csv, metadata(cfg), out);
  return 0;
}

int run_variance(const RunConfig& cfg, std::ostream& out) {
  const std::size_t na = cfg.alphas.size(), nb = cfg.abars.size();
  std::string csv;
  if (cfg.coord == VarianceCoord::Z) {
    const std::size_t nt = cfg.times_compton.size();
    auto rows = sweep(na * nb * nt, cfg.threads, [&](std::size_t k) {
      const PacketParams pp{cfg.alphas[k / (nb * nt)], cfg.abars[(k / nt) % nb], 0.0};
      const double T = cfg.times_compton[k % nt];
      const auto c = variance_z_closed(pp, T, cfg.conventions.chirp_sign);
      const auto n = variance_z_numeric(pp, T, cfg.quadrature);
      return csv_row({pp.alpha, pp.abar, T, c.mean, n.mean, c.variance, n.variance, c.delta2, n.delta2, c.norm, n.norm});
    });
    csv = "alpha,abar,time_compton,mean_closed,mean_numeric,variance_closed,variance_numeric,delta2_closed,"
          "delta2_numeric,norm_closed,norm_numeric\n";
    for (const auto& r : rows) csv += r;
  } else {
    const std::size_t ne = cfg.etas.size();
    auto rows = sweep(na * nb * ne, cfg.threads, [&](std::size_t k) {
      const PacketParams pp{cfg.alphas[k / (nb * ne)], cfg.abars[(k / ne) % nb], 0.0};
      const double eta = cfg.etas[k % ne];
      const auto u = variance_u_numeric(pp, eta, cfg.quadrature);
      return csv_row({pp.alpha, pp.abar, eta, u.mean, u.sigma, u.norm});
    });
    csv = "alpha,abar,eta,mean_u,delta_u,norm\n";
    for (const auto& r : rows) csv += r;
  }
  emit_table(cfg, csv, metadata(cfg), out);
  return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const auto gates = residual_gates(cfg.gates);
  char line[256];
  std::snprintf(line, sizeof line, "%-52s %11s %11s %11s %7s %9s  %s\n", "gate", "raw(h)", "raw(h/2)", "extrap",
                "slope", "tol", "result");
  out << line;
  int failed = 0;
  auto doc = metadata(cfg);
  auto& arr = doc["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : gates) {
    const auto& r = g.report;
    std::snprintf(line, sizeof line, "%-52s %11.3e %11.3e %11.3e %7.3f %9.1e  %s%s\n", g.name.c_str(), r.residual_norm,
                  r.residual_half, r.residual_extrapolated, r.order_estimate, g.tolerance, g.passed ? "PASS" : "FAIL",
                  g.floor_reached ? " (round-off floor)" : "");
    out << line;
    failed += !g.passed;
    arr.push_back({{"name", g.name},
                   {"setting", r.setting},
                   {"c1", r.c1},
                   {"c2", r.c2},
                   {"h", r.h},
                   {"residual_norm", r.residual_norm},
                   {"residual_half", r.residual_half},
                   {"residual_extrapolated", r.residual_extrapolated},
                   {"field_scale", r.field_scale},
                   {"order_estimate", r.order_estimate},
                   {"tolerance", g.tolerance},
                   {"gated_value", g.gated_value},
                   {"passed", g.passed}});
  }
  doc["failed"] = failed;
  out << gates.size() - failed << "/" << gates.size() << " gates passed (" << to_string(cfg.gates.mode)
      << " residual)\n";
  emit_json(cfg, doc, out);
  return failed ? 1 : 0;
}

int run_lifetime(const RunConfig& cfg, std::ostream& out) {
  auto doc = metadata(cfg);
  auto& arr = doc["lifetimes"] = nlohmann::ordered_json::array();
  for (double a : cfg.alphas) {
    for (double b : cfg.abars) {
      const Lifetime t = lifetime({a, b, 0.0});
      out << "alpha=" << format_double(a) << " abar=" << format_double(b) << ": t_reduced = " << format_double(t.t_reduced_s)
          << " s, t_paper (2pi) = " << format_double(t.t_paper_s) << " s\n";
      arr.push_back({{"alpha", a}, {"abar", b}, {"t_reduced_s", t.t_reduced_s}, {"t_paper_s", t.t_paper_s}});
    }
  }
  doc["note"] =
      "The displayed bound (alpha^2 - abar^2)/(2 abar m) with the reduced Compton time gives t_reduced; the worked "
      "numbers quoted alongside it (0.73 fs, 3.64 fs) are larger by 2 pi and are reproduced by t_paper. The source "
      "does not say which is intended, so both are reported.";
  emit_json(cfg, doc, out);
  return 0;
}

int run_collider(const RunConfig& cfg, std::ostream& out) {
  const auto c = collider_estimates(cfg.omega_over_m, cfg.a0, cfg.gamma0, cfg.leak_alpha, cfg.leak_abar);
  const std::pair<const char*, double> rows[] = {
      {"gamma_rf", c.gamma_rf},
      {"omega0_gev", c.omega0_gev},
      {"laser_period_s", c.laser_period_s},
      {"recollision_time_s", c.recollision_time_s},
      {"recollision_time_doppler_s", c.recollision_time_doppler_s},
      {"recollision_time_inv_omega_s", c.recollision_time_inv_omega_s},
      {"leak_time_s", c.leak_time_s},
      {"leak_time_reduced_s", c.leak_time_reduced_s},
      {"gamma0", c.gamma0},
      {"rr_fraction", c.rr_fraction}};
  auto doc = metadata(cfg);
  auto& res = doc["estimates"];
  for (const auto& [k, v] : rows) {
    out << k << " = " << format_double(v) << "\n";
    res[k] = v;
  }
  doc["note"] =
      "recollision_time_s = T_L/gamma and recollision_time_doppler_s = T_L/(2 gamma) with T_L = 2 pi/omega; "
      "recollision_time_inv_omega_s = 1/(omega gamma). gamma0 defaults to Omega0/m when not given.";
  emit_json(cfg, doc, out);
  return 0;
}

nlohmann::ordered_json cjson(cplx z) { return {z.real(), z.imag()}; }

int run_decompose(const RunConfig& cfg, std::ostream& out) {
  const PacketParams pp{cfg.alphas.front(), cfg.abars.front(), 0.0};
  const CrdiParts parts = crdi_parts(pp, cfg.field, cfg.point, cfg.conventions, cfg.quadrature);
  const Spinor4 rest = rest_frame_spinor(pp, cfg.field, cfg.point, cfg.conventions, cfg.quadrature);
  const FourVector j = current(rest);
  const double xi = light_cone_phase(cfg.field, cfg.point);
  const BoostRotation br = decompose_boost_rotation(cfg.field, xi);

  auto doc = metadata(cfg);
  auto& R = doc["R"] = nlohmann::ordered_json::array();
  for (int r = 0; r < 4; ++r) {
    auto row = nlohmann::ordered_json::array();
    for (int c = 0; c < 4; ++c) row.push_back(cjson(parts.R(r, c)));
    R.push_back(row);
  }
  doc["eta_prime"] = parts.eta_p;
  doc["c_field"] = cjson(parts.c_field);
  auto& rs = doc["rest_spinor"] = nlohmann::ordered_json::array();
  for (int k = 0; k < 4; ++k) rs.push_back(cjson(rest(k)));
  const double spatial = j.tail<3>().norm();
  doc["rest_current"] = {j(0), j(1), j(2), j(3)};
  doc["spatial_to_temporal_ratio"] = spatial / std::abs(j(0));
  doc["xi"] = xi;
  doc["boost_rotation"] = {{"theta", br.theta},
                           {"w", br.w},
                           {"V", {br.V(0), br.V(1), br.V(2)}},
                           {"proper_velocity", {br.proper_velocity(0), br.proper_velocity(1), br.proper_velocity(2),
                                                br.proper_velocity(3)}}};
  out << "eta' = " << format_double(parts.eta_p) << ", c = " << format_double(parts.c_field.real()) << " + "
      << format_double(parts.c_field.imag()) << "i\n";
  out << "rest-frame |j_spatial|/|j0| = " << format_double(spatial / std::abs(j(0))) << "\n";
  out << "field part at xi = " << format_double(xi) << ": theta = " << format_double(br.theta)
      << ", w = " << format_double(br.w) << "\n";
  emit_json(cfg, doc, out);
  return 0;
}

bool is_usage(ErrorKind k) {
  return k == ErrorKind::Usage || k == ErrorKind::NoDamping || k == ErrorKind::Sign || k == ErrorKind::Applicability;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::Density: return run_density(cfg, out);
      case Command::Asymmetry: return run_asymmetry(cfg, out);
      case Command::Variance: return run_variance(cfg, out);
      case Command::Verify: return run_verify(cfg, out);
      case Command::Lifetime: return run_lifetime(cfg, out);
      case Command::Collider: return run_collider(cfg, out);
      case Command::Decompose: return run_decompose(cfg, out);
    }
  } catch (const Error& e) {
    err << (is_usage(e.kind()) ? "usage error" : "numerical failure") << " [" << to_string(e.kind()) << "]: " << e.what()
        << "\n";
    return is_usage(e.kind()) ? 2 : 1;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace nsp::cli
