#include "nonspread/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nonspread/quadrature.hpp"

namespace nsp {

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Off: return "off";
    case FieldKind::Linear: return "linear";
    case FieldKind::Circular: return "circular";
    case FieldKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

double Envelope::operator()(double xi) const {
  if (!enabled) return 1.0;
  const double s = (xi - start) / length;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double v = std::sin(pi * s);
  return v * v;
}

// Cumulative G(xi) = int_{lo}^{xi} (f1^2 + f2^2) at the nodes of a fixed
// grid; between nodes the remainder is integrated on the fly.
class PhiCache {
 public:
  PhiCache(const FieldProfile& p, double lo, double hi, std::vector<double> nodes)
      : lo_(lo), hi_(hi), nodes_(std::move(nodes)) {
    cum_.assign(nodes_.size(), 0.0);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      cum_[i] = cum_[i - 1] + piece(p, nodes_[i - 1], nodes_[i]);
    }
  }

  double G(const FieldProfile& p, double xi) const {
    if (xi <= lo_) return 0.0;
    if (xi >= hi_) return cum_.back();
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xi);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return cum_[k] + piece(p, nodes_[k], xi);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  static double piece(const FieldProfile& p, double a, double b) {
    if (b <= a) return 0.0;
    auto f2 = [&](double x) {
      const auto v = fdot(p, x);
      return v.f1 * v.f1 + v.f2 * v.f2;
    };
    if (p.kind == FieldKind::Tabulated) {
      // f is linear on each table segment, so Simpson is exact.
      return (b - a) / 6.0 * (f2(a) + 4.0 * f2(0.5 * (a + b)) + f2(b));
    }
    return quad::gk15<double>(f2, a, b, [](double v) { return std::abs(v); }).value;
  }

  double lo_, hi_;
  std::vector<double> nodes_;
  std::vector<double> cum_;
};

FieldProfile FieldProfile::off() { return {}; }

FieldProfile FieldProfile::linear(double a0, double omega_bar, Envelope env) {
  FieldProfile p;
  p.kind = FieldKind::Linear;
  p.a0 = a0;
  p.omega_bar = omega_bar;
  p.envelope = env;
  p.validate();
  p.finalize();
  return p;
}

FieldProfile FieldProfile::circular(double a0, double omega_bar, Envelope env) {
  FieldProfile p = linear(a0, omega_bar, env);
  p.kind = FieldKind::Circular;
  p.phi_cache.reset();
  p.finalize();
  return p;
}

FieldProfile FieldProfile::tabulated(FieldTable table, double omega_bar) {
  FieldProfile p;
  p.kind = FieldKind::Tabulated;
  p.omega_bar = omega_bar;
  p.table = std::make_shared<const FieldTable>(std::move(table));
  p.validate();
  p.finalize();
  return p;
}

void FieldProfile::validate() const {
  if (!(omega_bar > 0.0) || !std::isfinite(omega_bar)) {
    throw Error(ErrorKind::Domain, "field profile: omega_bar must be positive");
  }
  if (!(a0 >= 0.0) || !std::isfinite(a0)) throw Error(ErrorKind::Domain, "field profile: a0 must be >= 0");
  if (envelope.enabled && !(envelope.length > 0.0)) {
    throw Error(ErrorKind::Domain, "field profile: envelope length must be positive");
  }
  if (kind == FieldKind::Tabulated) {
    if (!table || table->xi.size() < 2) throw Error(ErrorKind::Domain, "tabulated field needs >= 2 samples");
    if (table->f1.size() != table->xi.size() || table->f2.size() != table->xi.size()) {
      throw Error(ErrorKind::Domain, "tabulated field: column lengths differ");
    }
    for (std::size_t i = 1; i < table->xi.size(); ++i) {
      if (!(table->xi[i] > table->xi[i - 1])) throw Error(ErrorKind::Domain, "tabulated field: xi not increasing");
    }
  }
}

void FieldProfile::finalize() {
  phi_cache.reset();
  if (kind == FieldKind::Tabulated) {
    phi_cache = std::make_shared<const PhiCache>(*this, table->xi.front(), table->xi.back(), table->xi);
  } else if (!is_off() && envelope.enabled) {
    const double lo = envelope.start;
    const double hi = envelope.start + envelope.length;
    const int n = std::max(8, static_cast<int>(std::ceil(envelope.length / 0.25)));
    std::vector<double> nodes(n + 1);
    for (int i = 0; i <= n; ++i) nodes[i] = lo + (hi - lo) * i / n;
    nodes.back() = hi;
    phi_cache = std::make_shared<const PhiCache>(*this, lo, hi, std::move(nodes));
  }
}

FieldValue fdot(const FieldProfile& p, double xi) {
  switch (p.kind) {
    case FieldKind::Off: return {};
    case FieldKind::Linear: return {p.a0 * std::cos(xi) * p.envelope(xi), 0.0};
    case FieldKind::Circular: {
      const double e = p.a0 * p.envelope(xi);
      return {e * std::cos(xi), e * std::sin(xi)};
    }
    case FieldKind::Tabulated: {
      const auto& t = *p.table;
      if (xi < t.xi.front() || xi > t.xi.back()) {
        std::ostringstream os;
        os << "tabulated field: xi = " << xi << " outside [" << t.xi.front() << ", " << t.xi.back() << "]";
        throw Error(ErrorKind::Range, os.str());
      }
      auto it = std::upper_bound(t.xi.begin(), t.xi.end(), xi);
      std::size_t k = static_cast<std::size_t>(it - t.xi.begin());
      k = std::clamp<std::size_t>(k, 1, t.xi.size() - 1);
      const double w = (xi - t.xi[k - 1]) / (t.xi[k] - t.xi[k - 1]);
      return {(1 - w) * t.f1[k - 1] + w * t.f1[k], (1 - w) * t.f2[k - 1] + w * t.f2[k]};
    }
  }
  return {};
}

double phi_accumulated(const FieldProfile& p, double xi) {
  if (p.is_off()) return 0.0;
  const double scale = -1.0 / (2.0 * p.omega_bar);
  if (p.kind == FieldKind::Tabulated || p.envelope.enabled) {
    if (p.kind == FieldKind::Tabulated && (xi < p.table->xi.front() || xi > p.table->xi.back() ||
                                           0.0 < p.table->xi.front() || 0.0 > p.table->xi.back())) {
      throw Error(ErrorKind::Range, "tabulated field: Phi needs both 0 and xi inside the table");
    }
    if (p.phi_cache) return scale * (p.phi_cache->G(p, xi) - p.phi_cache->G(p, 0.0));
    auto f2 = [&](double x) {
      const auto v = fdot(p, x);
      return v.f1 * v.f1 + v.f2 * v.f2;
    };
    const auto r = quad::adaptive_scalar(f2, std::min(0.0, xi), std::max(0.0, xi), 1e-15, 1e-13);
    if (!r.converged) throw Error(ErrorKind::QuadratureFailure, "Phi quadrature did not converge", r.err);
    return scale * (xi >= 0 ? r.value : -r.value);
  }
  const double a2 = p.a0 * p.a0;
  if (p.kind == FieldKind::Circular) return scale * a2 * xi;
  return scale * a2 * (0.5 * xi + 0.25 * std::sin(2.0 * xi));
}

SpacetimePoint primed_coords(const SpacetimePoint& x, const FieldProfile& p) {
  if (p.is_off()) return x;
  const double phi = phi_accumulated(p, light_cone_phase(p, x));
  return {x.T - phi, x.Z + phi};
}

double invert_xi(const FieldProfile& p, double xi_prime) {
  if (p.is_off()) return xi_prime;
  const double w = p.omega_bar;
  if (p.kind == FieldKind::Circular && !p.envelope.enabled) return xi_prime / (1.0 + p.a0 * p.a0);

  auto forward = [&](double xi) { return xi - 2.0 * w * phi_accumulated(p, xi); };
  auto slope = [&](double xi) {
    const auto v = fdot(p, xi);
    return 1.0 + v.f1 * v.f1 + v.f2 * v.f2;
  };
  // The forward map has slope >= 1 wherever it is monotone, so the root lies
  // within |forward(xi') - xi'| of xi'.
  const double d = std::abs(forward(xi_prime) - xi_prime);
  double lo = xi_prime - d;
  double hi = xi_prime + d;
  if (d == 0.0) return xi_prime;
  double flo = forward(lo) - xi_prime;
  double fhi = forward(hi) - xi_prime;
  if (flo > 0.0 || fhi < 0.0) {
    std::ostringstream os;
    os << "invert_xi: forward map not monotone on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::MultivaluedInverse, os.str());
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = forward(x) - xi_prime;
    if (std::abs(fx) < 1e-13 * std::max(1.0, std::abs(xi_prime))) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double s = slope(x);
    if (!(s > 0.0)) {
      std::ostringstream os;
      os << "invert_xi: forward map not monotone on [" << lo << ", " << hi << "]";
      throw Error(ErrorKind::MultivaluedInverse, os.str());
    }
    double next = x - fx / s;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

SpacetimePoint unprimed_coords(const SpacetimePoint& xp, const FieldProfile& p) {
  if (p.is_off()) return xp;
  const double xi = invert_xi(p, p.omega_bar * (xp.T - xp.Z));
  const double phi = phi_accumulated(p, xi);
  return {xp.T + phi, xp.Z - phi};
}

RindlerPoint rindler_from_lab(const SpacetimePoint& x) {
  if (!(x.Z > std::abs(x.T))) {
    std::ostringstream os;
    os << "point (T=" << x.T << ", Z=" << x.Z << ") is not in the right Rindler wedge";
    throw Error(ErrorKind::Wedge, os.str());
  }
  return {std::atanh(x.T / x.Z), std::sqrt((x.Z - x.T) * (x.Z + x.T))};
}

SpacetimePoint lab_from_rindler(const RindlerPoint& r) {
  if (!(r.u > 0.0)) throw Error(ErrorKind::Wedge, "Rindler coordinate u must be positive");
  return {r.u * std::sinh(r.eta), r.u * std::cosh(r.eta)};
}

RigidKinematics rigid_frame_kinematics(double g, double z, double T) {
  const double lever = 1.0 + g * z;
  if (!(lever > 0.0)) throw Error(ErrorKind::Domain, "rigid frame: 1 + g z must be positive (horizon)");
  return {g * T / std::hypot(lever, g * T), lever};
}

}  // namespace nsp
