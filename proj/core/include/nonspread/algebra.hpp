#pragma once

#include <array>
#include <functional>
#include <string>

#include "nonspread/types.hpp"

namespace nsp {

// Contravariant components (t, x, y, z). Bilinears of the packets are real,
// so a real vector is enough here.
using FourVector = Eigen::Vector4d;

struct GammaSet {
  std::array<Matrix4C, 4> g;  // gamma^0 .. gamma^3
  Matrix4C g5;
};

// Chiral representation: gamma^0 = [[0,1],[1,0]], gamma^k = [[0,s_k],[-s_k,0]],
// gamma^5 = i g0 g1 g2 g3 = diag(-1,-1,1,1).
const GammaSet& gamma_set();

// Minkowski metric diag(+1,-1,-1,-1).
const Matrix4R& metric();

// exp(-gamma^0 gamma^3 w / 2) = diag(e^{w/2}, e^{-w/2}, e^{-w/2}, e^{w/2}).
Matrix4C boost_z(double w);

// j^mu = psi^dagger gamma^0 gamma^mu psi.
FourVector current(const Spinor4& psi);

// 4x4 inverse and determinant. Throws ErrorKind::Inversion when |det| < 1e-12.
Matrix4C inverse4(const Matrix4C& m);

struct Tetrad {
  Matrix4R e_up;    // e^alpha_mu, row alpha, column mu
  Matrix4R e_down;  // e^mu_alpha, row mu, column alpha
};

// e^alpha_mu = 1/4 Tr[R^-1 gamma^alpha R gamma_mu] and its inverse
// e^mu_alpha = 1/4 Tr[R gamma^mu R^-1 gamma_alpha]. With these,
// R gamma^mu R^-1 = e^mu_alpha gamma^alpha.
Tetrad vierbein(const Matrix4C& r);

// gamma~^mu = e^mu_alpha gamma^alpha for each mu.
std::array<Matrix4C, 4> frame_gammas(const Tetrad& t);

// Coordinates (x^0, x^1, x^2, x^3) of the chart the tetrad field lives in.
using ChartPoint = Eigen::Vector4d;
using TetradField = std::function<Tetrad(const ChartPoint&)>;

struct SpinorConnection {
  std::array<Matrix4C, 4> omega;  // Omega_mu, mu = 0..3 in the supplied chart
  std::string chart;
  double h = 0.0;
  int order = 4;
};

// Omega^i_{j mu} = -e^nu_j d_mu e^i_nu, Omega_mu = 1/4 Omega_{ij mu} gamma^i gamma^j,
// with d_mu by central differences of the given order (2 or 4). Directions in
// which the field does not vary give exactly zero.
SpinorConnection spinor_connection(const TetradField& field, const ChartPoint& x, double h,
                                   int order = 4, std::string chart = "lab");

}  // namespace nsp
