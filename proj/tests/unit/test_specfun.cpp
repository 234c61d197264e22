#include <random>

#include "doctest.h"
#include "frozen_values.hpp"
#include "nonspread/specfun.hpp"

using namespace nsp;

namespace {

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("K_nu matches mpmath for complex orders and arguments") {
  for (const auto& c : frozen::kBesselK) {
    INFO("nu = " << c.nu << ", z = " << c.z);
    CHECK(rel_err(bessel_k(c.nu, c.z), c.value) < 1e-11);
  }
}

TEST_CASE("K_{1/2} has the elementary closed form") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> re(0.1, 50.0), im(-20.0, 20.0);
  for (int k = 0; k < 50; ++k) {
    const cplx z(re(rng), im(rng));
    const cplx exact = std::sqrt(pi / (2.0 * z)) * std::exp(-z);
    CHECK(rel_err(bessel_k(cplx(0.5, 0.0), z), exact) < 1e-10);
  }
}

TEST_CASE("K_nu obeys the three-term recurrence and K_{-nu} = K_nu") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> nr(-3.0, 3.0), ni(-50.0, 50.0), zr(0.2, 30.0), zi(-10.0, 10.0);
  for (int k = 0; k < 60; ++k) {
    const cplx nu(nr(rng), ni(rng));
    const cplx z(zr(rng), zi(rng));
    const cplx lhs = bessel_k(nu + 1.0, z) - bessel_k(nu - 1.0, z);
    const cplx rhs = 2.0 * nu / z * bessel_k(nu, z);
    const double scale = std::abs(bessel_k(nu + 1.0, z)) + std::abs(bessel_k(nu - 1.0, z));
    INFO("nu = " << nu << ", z = " << z);
    CHECK(std::abs(lhs - rhs) / scale < 1e-9);
    CHECK(rel_err(bessel_k(-nu, z), bessel_k(nu, z)) < 1e-10);
  }
}

TEST_CASE("scaled Bessel result carries the exponent separately") {
  // K_{1/2+40i}(900) underflows a double; the scaled form stays finite.
  const BesselResult r = bessel_k_scaled(cplx(0.5, 40.0), cplx(900.0, 0.0));
  CHECK(r.log_scale < -800.0);
  CHECK(std::isfinite(std::abs(r.scaled)));
  CHECK(std::abs(r.scaled) > 0.0);
  const BesselResult half = bessel_k_scaled(cplx(0.5, 0.0), cplx(900.0, 0.0));
  CHECK(std::abs(half.scaled * std::exp(half.log_scale + 900.0) - std::sqrt(pi / 1800.0)) < 1e-14);
  CHECK(bessel_k_scaled(cplx(0.5, 0.0), cplx(1e-8, 0.0)).near_singular);
}

TEST_CASE("modified Struve functions match mpmath") {
  for (const auto& c : frozen::kStruve) {
    INFO("L_" << c.order << "(" << c.x << ")");
    CHECK(struve_l(c.order, c.x) == doctest::Approx(c.value).epsilon(1e-12));
  }
  CHECK_THROWS_AS(struve_l(2, 1.0), Error);
}

TEST_CASE("rapidity integral reproduces 2 K_{i alpha}(abar)") {
  for (const auto& c : frozen::kRapidity) {
    RapidityIntegrand f;
    f.damping = c.abar;
    f.weight = [](cplx) { return Spinor4(1.0, 0.0, 0.0, 0.0); };
    f.phase = [&](cplx b) { return -c.abar * std::cosh(b) - I * c.alpha * b; };
    const RapidityResult r = rapidity_integral(f);
    INFO("abar = " << c.abar << ", alpha = " << c.alpha);
    CHECK(std::abs(r.value[0] - c.value) < 1e-10 * std::max(1.0, std::abs(c.value)) + 1e-14);
  }
}

TEST_CASE("tilted rapidity contour leaves the integral unchanged") {
  RapidityIntegrand f;
  f.damping = 0.4;
  f.weight = [](cplx b) { return Spinor4(std::exp(0.5 * b), 0.0, std::exp(-0.5 * b), 0.0); };
  f.phase = [](cplx b) { return -0.4 * std::cosh(b) - I * 3.0 * b + I * 2.0 * std::sinh(b); };
  const RapidityResult flat = rapidity_integral(f);
  RapidityContour c;
  c.theta_mag = 0.2;
  c.sign_left = 1;
  c.sign_right = 1;
  const RapidityResult tilted = rapidity_integral(f, {}, c);
  CHECK((flat.value - tilted.value).norm() < 1e-9 * flat.value.norm());
}

TEST_CASE("quadrature settings are validated") {
  QuadratureSpec q;
  q.rel_tol = -1.0;
  CHECK_THROWS_AS(q.validate(), Error);
  CHECK_NOTHROW(QuadratureSpec{}.validate());
}
