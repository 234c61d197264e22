#include "nonspread/algebra.hpp"

#include <cmath>

#include <Eigen/LU>

namespace nsp {

namespace {

GammaSet build_gammas() {
  GammaSet s;
  const Matrix4C zero = Matrix4C::Zero();
  for (auto& m : s.g) m = zero;
  // gamma^0
  s.g[0](0, 2) = s.g[0](1, 3) = s.g[0](2, 0) = s.g[0](3, 1) = 1.0;
  // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
  const std::array<Eigen::Matrix2cd, 3> sigma = [] {
    std::array<Eigen::Matrix2cd, 3> p;
    p[0] << 0, 1, 1, 0;
    p[1] << 0, -I, I, 0;
    p[2] << 1, 0, 0, -1;
    return p;
  }();
  for (int k = 0; k < 3; ++k) {
    s.g[k + 1].block<2, 2>(0, 2) = sigma[k];
    s.g[k + 1].block<2, 2>(2, 0) = -sigma[k];
  }
  s.g5 = I * s.g[0] * s.g[1] * s.g[2] * s.g[3];
  return s;
}

}  // namespace

const GammaSet& gamma_set() {
  static const GammaSet s = build_gammas();
  return s;
}

const Matrix4R& metric() {
  static const Matrix4R m = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
  return m;
}

Matrix4C boost_z(double w) {
  const double ep = std::exp(0.5 * w);
  const double em = std::exp(-0.5 * w);
  Matrix4C b = Matrix4C::Zero();
  b(0, 0) = ep;
  b(1, 1) = em;
  b(2, 2) = em;
  b(3, 3) = ep;
  return b;
}

FourVector current(const Spinor4& psi) {
  const auto& gs = gamma_set();
  const Spinor4 bar = gs.g[0].adjoint() * psi;  // (psi^dagger gamma^0)^dagger
  FourVector j;
  for (int mu = 0; mu < 4; ++mu) j[mu] = bar.dot(gs.g[mu] * psi).real();
  return j;
}

// Eigen's fixed-size 4x4 inverse is the cofactor expansion.
Matrix4C inverse4(const Matrix4C& m) {
  const cplx det = m.determinant();
  if (!(std::abs(det) > 1e-12)) {
    throw Error(ErrorKind::Inversion, "matrix is singular (|det| = " + std::to_string(std::abs(det)) + ")");
  }
  return m.inverse();
}

Tetrad vierbein(const Matrix4C& r) {
  const Matrix4C rinv = inverse4(r);
  const auto& gs = gamma_set();
  const Matrix4R& eta = metric();
  Tetrad t;
  for (int a = 0; a < 4; ++a) {
    const Matrix4C conj_inv = rinv * gs.g[a] * r;
    const Matrix4C conj_fwd = r * gs.g[a] * rinv;
    for (int m = 0; m < 4; ++m) {
      // gamma_mu = eta_{mu mu} gamma^mu
      t.e_up(a, m) = 0.25 * eta(m, m) * (conj_inv * gs.g[m]).trace().real();
      t.e_down(a, m) = 0.25 * eta(m, m) * (conj_fwd * gs.g[m]).trace().real();
    }
  }
  return t;
}

std::array<Matrix4C, 4> frame_gammas(const Tetrad& t) {
  const auto& gs = gamma_set();
  std::array<Matrix4C, 4> out;
  for (int mu = 0; mu < 4; ++mu) {
    out[mu] = Matrix4C::Zero();
    for (int a = 0; a < 4; ++a) out[mu] += t.e_down(mu, a) * gs.g[a];
  }
  return out;
}

SpinorConnection spinor_connection(const TetradField& field, const ChartPoint& x, double h, int order,
                                   std::string chart) {
  if (!(h > 0.0)) throw Error(ErrorKind::Domain, "spinor_connection: h must be positive");
  if (order != 2 && order != 4) throw Error(ErrorKind::Domain, "spinor_connection: order must be 2 or 4");

  const Tetrad centre = field(x);
  const auto& gs = gamma_set();
  const Matrix4R& eta = metric();

  SpinorConnection out;
  out.chart = std::move(chart);
  out.h = h;
  out.order = order;
  for (int mu = 0; mu < 4; ++mu) {
    auto at = [&](double step) {
      ChartPoint y = x;
      y[mu] += step;
      return field(y).e_up;
    };
    Matrix4R de;
    if (order == 2) {
      de = (at(h) - at(-h)) / (2.0 * h);
    } else {
      de = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
    }
    // Omega^i_j = -(d e_up) e_down, lowered on the first index.
    const Matrix4R om_mixed = -de * centre.e_down;
    const Matrix4R om_low = eta * om_mixed;
    Matrix4C sum = Matrix4C::Zero();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == j || om_low(i, j) == 0.0) continue;
        sum += om_low(i, j) * (gs.g[i] * gs.g[j]);
      }
    }
    out.omega[mu] = 0.25 * sum;
  }
  return out;
}

}  // namespace nsp
