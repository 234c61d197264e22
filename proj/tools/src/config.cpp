#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "cli.hpp"

namespace nsp::cli {

const char* to_string(Command c) {
  switch (c) {
    case Command::Density: return "density";
    case Command::Asymmetry: return "asymmetry";
    case Command::Variance: return "variance";
    case Command::Verify: return "verify";
    case Command::Lifetime: return "lifetime";
    case Command::Collider: return "collider";
    case Command::Decompose: return "decompose";
  }
  return "unknown";
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw option storage, bound to CLI11 before parsing and resolved afterwards.
struct Raw {
  std::vector<double> alpha{30.0}, abar{0.005};
  double Omega = 0.0;
  std::string order = "minus-first";
  int chirp_sign = -1;
  int phi_sign = 1;
  std::string field = "off";
  double a0 = 0.0, omega_bar = 0.1;
  std::vector<double> envelope;
  double abs_tol = 1e-12, rel_tol = 1e-10;

  std::string state = "free", frame = "lab", normalization = "raw";
  std::vector<double> window{0.0, 80.0, 0.0, 60.0};
  std::vector<int> res{200};
  double band = 0.5, min_coverage = 0.05;

  std::vector<std::string> time;
  std::string bridge = "reduced", coord = "z";
  std::vector<double> eta;

  std::string suite = "all", gate = "extrapolated";
  double h = 1e-3;
  int points = 0;

  double omega_over_m = 0.0, a0_collider = 0.0;
  std::optional<double> gamma0;
  double leak_alpha = 30.0, leak_abar = 1e-2;

  std::vector<double> point{1.0, 35.0};

  std::string out, units = "compton", config;
  std::uint64_t seed = 0;
  int threads = 0;
};

void add_common(CLI::App* s, Raw& r) {
  s->add_option("--config", r.config, "Flat key = value file; command-line flags take precedence");
  s->add_option("--out", r.out, "Output path (CSV or JSON, plus a .json sidecar for CSV)");
  s->add_option("--threads", r.threads, "Worker threads (0: NONSPREAD_THREADS or all cores)")->check(CLI::NonNegativeNumber);
  s->add_option("--seed", r.seed, "Seed for randomized test-point sampling");
  s->add_option("--units", r.units, "Unit for untagged times: compton or si-mixed (fs)")
      ->check(CLI::IsMember({"compton", "si-mixed"}));
  s->add_option("--abs-tol", r.abs_tol, "Absolute quadrature tolerance");
  s->add_option("--rel-tol", r.rel_tol, "Relative quadrature tolerance");
}

void add_packet(CLI::App* s, Raw& r, bool lists) {
  auto* a = s->add_option("--alpha", r.alpha, "Chirp parameter alpha");
  auto* b = s->add_option("--abar", r.abar, "Size parameter abar (> 0)");
  if (lists) {
    a->delimiter(',');
    b->delimiter(',');
  } else {
    a->expected(1);
    b->expected(1);
  }
  s->add_option("--component-order", r.order, "minus-first or plus-first")
      ->check(CLI::IsMember({"minus-first", "plus-first"}));
  s->add_option("--chirp-sign", r.chirp_sign, "Rapidity chirp e^{s i alpha b}, s = -1 or 1")->check(CLI::IsMember({-1, 1}));
  s->add_option("--phi-sign", r.phi_sign, "Sign of Phibar in the primed coordinates")->check(CLI::IsMember({-1, 1}));
}

void add_field(CLI::App* s, Raw& r) {
  s->add_option("--field", r.field, "off, linear or circular")->check(CLI::IsMember({"off", "linear", "circular"}));
  s->add_option("--a0", r.a0, "Field amplitude a0");
  s->add_option("--omega-bar", r.omega_bar, "Laser frequency in units of m");
  s->add_option("--envelope", r.envelope, "sin^2 envelope start,length in xi")->delimiter(',')->expected(2);
}

double parse_number(const std::string& s, const char* what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw UsageError(std::string(what) + ": cannot parse '" + s + "' as a number");
  }
  return v;
}

// "1fs", "776344c", "776344compton" or a bare number in the --units system.
double parse_time(const std::string& text, UnitSystem units, TimeBridge bridge, double* fs_out) {
  std::string num = text;
  std::string unit;
  for (const char* tag : {"compton", "fs", "c"}) {
    const std::string t(tag);
    if (num.size() > t.size() && num.compare(num.size() - t.size(), t.size(), t) == 0) {
      unit = t;
      num.resize(num.size() - t.size());
      break;
    }
  }
  const double v = parse_number(num, "--time");
  const bool fs = unit == "fs" || (unit.empty() && units == UnitSystem::SiMixed);
  const double per_fs = time_compton_from_fs(1.0, bridge);
  *fs_out = fs ? v : v / per_fs;
  return fs ? v * per_fs : v;
}

PacketParams checked_packet(double alpha, double abar, double Omega) {
  PacketParams p{alpha, abar, Omega};
  if (!(abar > 0.0)) {
    throw UsageError("abar must be > 0: without the e^{-abar E_p} envelope the packet is not normalizable (got abar = " +
                     format_double(abar) + ")");
  }
  p.validate();
  return p;
}

nlohmann::ordered_json echo(const RunConfig& c, const Raw& r) {
  nlohmann::ordered_json j;
  j["command"] = to_string(c.command);
  j["alpha"] = c.alphas;
  j["abar"] = c.abars;
  j["Omega"] = c.Omega;
  j["field"] = {{"kind", nsp::to_string(c.field.kind)}, {"a0", c.field.a0}, {"omega_bar", c.field.omega_bar}};
  if (c.field.envelope.enabled) {
    j["field"]["envelope"] = {{"start", c.field.envelope.start}, {"length", c.field.envelope.length}};
  }
  j["quadrature"] = {{"abs_tol", c.quadrature.abs_tol}, {"rel_tol", c.quadrature.rel_tol}};
  switch (c.command) {
    case Command::Density:
      j["state"] = nsp::to_string(c.state);
      j["frame"] = nsp::to_string(c.frame);
      j["window"] = {c.window.c1_min, c.window.c1_max, c.window.c2_min, c.window.c2_max};
      j["resolution"] = {c.n1, c.n2};
      j["normalization"] = nsp::to_string(c.normalization);
      j["light_cone_band"] = c.band;
      j["min_coverage"] = c.min_coverage;
      break;
    case Command::Asymmetry:
    case Command::Variance:
      j["time_input"] = r.time;
      j["time_compton"] = c.times_compton;
      j["coord"] = c.coord == VarianceCoord::Z ? "z" : "u";
      if (!c.etas.empty()) j["eta"] = c.etas;
      break;
    case Command::Verify:
      j["suite"] = c.gates.suite;
      j["gate"] = nsp::to_string(c.gates.mode);
      j["h"] = c.gates.h;
      j["random_points"] = c.gates.random_points;
      break;
    case Command::Collider:
      j["omega_over_m"] = c.omega_over_m;
      j["a0"] = c.a0;
      j["gamma0"] = c.gamma0 ? nlohmann::ordered_json(*c.gamma0) : nlohmann::ordered_json(nullptr);
      j["leak_alpha"] = c.leak_alpha;
      j["leak_abar"] = c.leak_abar;
      break;
    case Command::Decompose:
      j["point"] = {c.point.T, c.point.Z};
      break;
    case Command::Lifetime:
      break;
  }
  j["units"] = c.units == UnitSystem::Compton ? "compton" : "si-mixed";
  j["seed"] = c.seed;
  j["threads_requested"] = c.threads;
  j["output"] = c.output_path;
  return j;
}

RunConfig resolve(Command cmd, const Raw& r) {
  RunConfig c;
  c.command = cmd;
  c.output_path = r.out;
  c.seed = r.seed;
  c.threads = r.threads;
  c.units = r.units == "si-mixed" ? UnitSystem::SiMixed : UnitSystem::Compton;
  c.quadrature.abs_tol = r.abs_tol;
  c.quadrature.rel_tol = r.rel_tol;
  c.quadrature.validate();
  c.conventions.order = r.order == "plus-first" ? ComponentOrder::PlusFirst : ComponentOrder::MinusFirst;
  c.conventions.chirp_sign = r.chirp_sign;
  c.conventions.phi_sign = r.phi_sign;
  c.alphas = r.alpha;
  c.abars = r.abar;
  c.Omega = r.Omega;
  c.bridge = r.bridge == "2pi" ? TimeBridge::TwoPi : TimeBridge::Reduced;

  if (r.field == "off") {
    c.field = FieldProfile::off();
  } else {
    Envelope env;
    if (!r.envelope.empty()) env = Envelope{true, r.envelope[0], r.envelope[1]};
    c.field = r.field == "linear" ? FieldProfile::linear(r.a0, r.omega_bar, env)
                                  : FieldProfile::circular(r.a0, r.omega_bar, env);
  }
  c.field.validate();

  const bool packet_cmd = cmd != Command::Verify && cmd != Command::Collider;
  const bool eigen = cmd == Command::Density && r.state == "eigenstate";
  if (packet_cmd && !eigen) {
    if (c.alphas.empty() || c.abars.empty()) throw UsageError("--alpha and --abar need at least one value");
    for (double a : c.alphas) {
      for (double b : c.abars) checked_packet(a, b, 0.0);
    }
  }

  switch (cmd) {
    case Command::Density: {
      static const std::map<std::string, StateKind> states{
          {"free", StateKind::Free}, {"laser", StateKind::Laser}, {"eigenstate", StateKind::Eigenstate}};
      c.state = states.at(r.state);
      c.frame = r.frame == "rindler" ? Frame::Rindler : Frame::Lab;
      c.normalization = r.normalization == "unit" ? Normalization::UnitIntegral : Normalization::Raw;
      c.window = {r.window[0], r.window[1], r.window[2], r.window[3]};
      if (!(c.window.c1_max > c.window.c1_min) || !(c.window.c2_max > c.window.c2_min)) {
        throw UsageError("--window must be c1_min,c1_max,c2_min,c2_max with nonzero area");
      }
      c.n1 = r.res[0];
      c.n2 = r.res.size() > 1 ? r.res[1] : r.res[0];
      if (c.n1 < 2 || c.n2 < 2) throw UsageError("--res must be at least 2 in each direction");
      c.band = r.band;
      c.min_coverage = r.min_coverage;
      if (c.state == StateKind::Laser && c.field.is_off()) throw UsageError("--state laser needs --field linear|circular with a0 > 0");
      if (!eigen && (c.alphas.size() != 1 || c.abars.size() != 1)) {
        throw UsageError("density takes a single --alpha and --abar");
      }
      if (c.output_path.empty()) throw UsageError("density needs --out");
      break;
    }
    case Command::Asymmetry:
    case Command::Variance: {
      c.coord = r.coord == "u" ? VarianceCoord::U : VarianceCoord::Z;
      if (cmd == Command::Variance && c.coord == VarianceCoord::U) {
        if (r.eta.empty()) throw UsageError("variance --coord u needs --eta");
        c.etas = r.eta;
      } else {
        if (r.time.empty()) throw UsageError(std::string(to_string(cmd)) + " needs --time");
        for (const auto& t : r.time) {
          double fs = 0.0;
          c.times_compton.push_back(parse_time(t, c.units, c.bridge, &fs));
          c.times_fs.push_back(fs);
        }
      }
      break;
    }
    case Command::Verify:
      c.gates.suite = r.suite;
      c.gates.mode = r.gate == "raw" ? GateMode::Raw : GateMode::Extrapolated;
      c.gates.h = r.h;
      c.gates.random_points = r.points;
      c.gates.seed = r.seed;
      c.gates.threads = r.threads;
      if (!(r.h > 0.0)) throw UsageError("--step must be positive");
      break;
    case Command::Collider:
      c.omega_over_m = r.omega_over_m;
      c.a0 = r.a0_collider;
      c.gamma0 = r.gamma0;
      c.leak_alpha = r.leak_alpha;
      c.leak_abar = r.leak_abar;
      if (!(c.omega_over_m > 0.0) || !(c.a0 > 0.0) || (c.gamma0 && !(*c.gamma0 > 0.0))) {
        throw UsageError("collider needs positive --omega-over-m, --a0 and (if given) --gamma0");
      }
      checked_packet(c.leak_alpha, c.leak_abar, 0.0);
      break;
    case Command::Decompose:
      c.point = {r.point[0], r.point[1]};
      if (c.alphas.size() != 1 || c.abars.size() != 1) throw UsageError("decompose takes a single --alpha and --abar");
      break;
    case Command::Lifetime:
      break;
  }
  c.echo = echo(c, r);
  return c;
}

// Turns the config file into `--key=value` tokens for every key the command
// line does not already set. Unknown or sectioned keys are usage errors.
std::vector<std::string> config_tokens(const std::string& path, CLI::App* sub, const std::vector<std::string>& cli) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::FileError& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  std::set<std::string> given;
  for (const auto& a : cli) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> tokens;
  for (const auto& it : items) {
    if (!it.parents.empty()) throw UsageError("--config: sections are not supported (key '" + it.fullname() + "')");
    if (it.name == "config") throw UsageError("--config: nested config files are not supported");
    if (sub->get_option_no_throw("--" + it.name) == nullptr) {
      throw UsageError("--config: unknown key '" + it.name + "' for command '" + sub->get_name() + "'");
    }
    if (given.count(it.name)) continue;
    std::string joined;
    for (std::size_t k = 0; k < it.inputs.size(); ++k) joined += (k ? "," : "") + it.inputs[k];
    tokens.push_back("--" + it.name + "=" + joined);
  }
  return tokens;
}

}  // namespace

ParseOutcome parse_config(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Raw r;
  CLI::App app{"Nonspreading Dirac wave packets: densities, asymmetry, moments, residual gates and estimates",
               "nonspread"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "nonspread 0.1.0");

  std::map<CLI::App*, Command> commands;
  auto* density = app.add_subcommand("density", "Density grid in the lab or Rindler frame");
  add_common(density, r);
  add_packet(density, r, false);
  add_field(density, r);
  density->add_option("--Omega", r.Omega, "Rindler eigenenergy for --state eigenstate");
  density->add_option("--state", r.state, "free, laser or eigenstate")->check(CLI::IsMember({"free", "laser", "eigenstate"}));
  density->add_option("--frame", r.frame, "lab (Z, T) or rindler (u, eta)")->check(CLI::IsMember({"lab", "rindler"}));
  density->add_option("--window", r.window, "c1_min,c1_max,c2_min,c2_max")->delimiter(',')->expected(4);
  density->add_option("--res", r.res, "Cells per axis: N or N1,N2")->delimiter(',')->expected(1, 2);
  density->add_option("--normalization", r.normalization, "raw or unit")->check(CLI::IsMember({"raw", "unit"}));
  density->add_option("--band", r.band, "Light-cone mask half-width in cells");
  density->add_option("--min-coverage", r.min_coverage, "Fail (exit 1) below this unmasked fraction")
      ->check(CLI::Range(0.0, 1.0));
  commands[density] = Command::Density;

  auto* asym = app.add_subcommand("asymmetry", "Asymmetry ratio over an (alpha, abar) sweep");
  add_common(asym, r);
  add_packet(asym, r, true);
  asym->add_option("--time", r.time, "Lab time(s), tagged fs or c (Compton)")->delimiter(',');
  asym->add_option("--bridge", r.bridge, "fs conversion: reduced (hbar/mc^2) or 2pi")->check(CLI::IsMember({"reduced", "2pi"}));
  commands[asym] = Command::Asymmetry;

  auto* var = app.add_subcommand("variance", "Closed-form and numeric Z moments, or numeric u spread");
  add_common(var, r);
  add_packet(var, r, true);
  var->add_option("--coord", r.coord, "z (lab line at fixed T) or u (Rindler slice at fixed eta)")
      ->check(CLI::IsMember({"z", "u"}));
  var->add_option("--time", r.time, "Lab time(s) for --coord z")->delimiter(',');
  var->add_option("--eta", r.eta, "Rindler time(s) for --coord u")->delimiter(',');
  var->add_option("--bridge", r.bridge, "fs conversion: reduced or 2pi")->check(CLI::IsMember({"reduced", "2pi"}));
  commands[var] = Command::Variance;

  auto* ver = app.add_subcommand("verify", "Dirac-equation residual gates");
  add_common(ver, r);
  ver->add_option("--suite", r.suite, "all, rindler, volkov, free, laser or transformed")
      ->check(CLI::IsMember({"all", "rindler", "volkov", "free", "laser", "transformed"}));
  ver->add_option("--gate", r.gate, "extrapolated or raw")->check(CLI::IsMember({"extrapolated", "raw"}));
  ver->add_option("--step", r.h, "Finite-difference step h");
  ver->add_option("--points", r.points, "Extra seeded random points per case")->check(CLI::NonNegativeNumber);
  commands[ver] = Command::Verify;

  auto* life = app.add_subcommand("lifetime", "Nonspreading lifetime in both conventions");
  add_common(life, r);
  add_packet(life, r, true);
  commands[life] = Command::Lifetime;

  auto* col = app.add_subcommand("collider", "Rest-frame collider estimates");
  add_common(col, r);
  col->add_option("--omega-over-m", r.omega_over_m, "Laser frequency over electron mass")->required();
  col->add_option("--a0", r.a0_collider, "Field amplitude a0")->required();
  col->add_option("--gamma0", r.gamma0, "Electron gamma for the radiation-reaction bound");
  col->add_option("--leak-alpha", r.leak_alpha, "alpha of the leakage-time reference packet");
  col->add_option("--leak-abar", r.leak_abar, "abar of the leakage-time reference packet");
  commands[col] = Command::Collider;

  auto* dec = app.add_subcommand("decompose", "CRDI rest-frame map and its boost/rotation split at a point");
  add_common(dec, r);
  add_packet(dec, r, false);
  add_field(dec, r);
  dec->add_option("--point", r.point, "T,Z")->delimiter(',')->expected(2);
  commands[dec] = Command::Decompose;

  try {
    // Locate the subcommand to know which keys the config file may set.
    std::vector<std::string> argv = args;
    auto cmd_it = std::find_if(argv.begin(), argv.end(), [&](const std::string& a) {
      return std::any_of(commands.begin(), commands.end(), [&](const auto& kv) { return kv.first->get_name() == a; });
    });
    if (cmd_it != argv.end()) {
      CLI::App* sub = app.get_subcommand(*cmd_it);
      const std::vector<std::string> rest(cmd_it + 1, argv.end());
      std::string cfg_path;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] == "--config" && i + 1 < rest.size()) cfg_path = rest[i + 1];
        if (rest[i].rfind("--config=", 0) == 0) cfg_path = rest[i].substr(9);
      }
      if (!cfg_path.empty()) {
        auto toks = config_tokens(cfg_path, sub, rest);
        argv.insert(cmd_it + 1, toks.begin(), toks.end());
      }
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return {std::nullopt, 0};
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return {std::nullopt, 0};
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return {std::nullopt, 0};
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return {std::nullopt, 2};
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return {std::nullopt, 2};
  }

  for (const auto& [sub, cmd] : commands) {
    if (!sub->parsed()) continue;
    try {
      return {resolve(cmd, r), 0};
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << "\n";
    } catch (const Error& e) {
      err << "usage error: " << e.what() << "\n";
    }
    return {std::nullopt, 2};
  }
  err << "usage error: no command given\n";
  return {std::nullopt, 2};
}

}  // namespace nsp::cli
