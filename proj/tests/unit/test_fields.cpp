#include <random>

#include "doctest.h"
#include "nonspread/fields.hpp"
#include "nonspread/quadrature.hpp"

using namespace nsp;

TEST_CASE("field profiles validate their parameters") {
  CHECK(FieldProfile::off().is_off());
  CHECK_FALSE(FieldProfile::linear(1.0, 0.1).is_off());
  CHECK_THROWS_AS(FieldProfile::linear(1.0, -0.1).validate(), Error);
  CHECK_THROWS_AS(FieldProfile::tabulated({{0.0, 1.0, 0.5}, {0, 0, 0}, {0, 0, 0}}, 0.1), Error);
}

TEST_CASE("accumulated phase matches direct integration of -f^2/(2 omega)") {
  Envelope env{true, 0.5, 6.0};
  for (const auto& f : {FieldProfile::linear(1.3, 0.1), FieldProfile::circular(0.8, 0.2),
                        FieldProfile::linear(1.0, 0.1, env)}) {
    for (double xi : {-3.0, 0.0, 0.7, 4.2, 11.0}) {
      auto integrand = [&](double s) {
        const FieldValue v = fdot(f, s);
        return -(v.f1 * v.f1 + v.f2 * v.f2) / (2 * f.omega_bar);
      };
      const auto q = quad::adaptive_scalar(integrand, 0.0, xi == 0.0 ? 1e-300 : xi, 1e-15, 1e-13);
      const double expected = xi == 0.0 ? 0.0 : q.value;
      CHECK(phi_accumulated(f, xi) == doctest::Approx(expected).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("phibar is nonincreasing in xi") {
  const auto f = FieldProfile::linear(2.0, 0.1);
  double prev = phi_accumulated(f, -5.0);
  for (double xi = -5.0; xi <= 20.0; xi += 0.37) {
    const double v = phi_accumulated(f, xi);
    CHECK(v <= prev + 1e-14);
    prev = v;
  }
}

TEST_CASE("invert_xi round-trips and has the circular closed form") {
  const auto circ = FieldProfile::circular(0.7, 0.1);
  for (double xp : {-8.0, -0.3, 0.0, 2.5, 40.0}) {
    CHECK(invert_xi(circ, xp) == doctest::Approx(xp / (1 + 0.7 * 0.7)).epsilon(1e-13).scale(1.0));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-30.0, 30.0);
  for (const auto& f : {FieldProfile::linear(1.0, 0.1), FieldProfile::linear(3.0, 0.05),
                        FieldProfile::linear(1.0, 0.1, Envelope{true, 0.0, 10.0})}) {
    for (int k = 0; k < 50; ++k) {
      const double xi = U(rng);
      const double xi_p = xi - 2 * f.omega_bar * phi_accumulated(f, xi);
      CHECK(invert_xi(f, xi_p) == doctest::Approx(xi).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("primed and unprimed coordinates are inverse maps") {
  const auto f = FieldProfile::linear(1.2, 0.1);
  for (SpacetimePoint x : {SpacetimePoint{1.0, 35.0}, SpacetimePoint{-4.0, 2.0}, SpacetimePoint{20.0, -7.5}}) {
    const SpacetimePoint xp = primed_coords(x, f);
    // T - Z changes by -2 Phibar, T + Z is untouched.
    CHECK(xp.T + xp.Z == doctest::Approx(x.T + x.Z));
    const SpacetimePoint back = unprimed_coords(xp, f);
    CHECK(back.T == doctest::Approx(x.T).epsilon(1e-12));
    CHECK(back.Z == doctest::Approx(x.Z).epsilon(1e-12));
  }
}

TEST_CASE("Rindler chart covers the right wedge only") {
  const RindlerPoint r{0.6, 2.5};
  const SpacetimePoint x = lab_from_rindler(r);
  CHECK(x.Z * x.Z - x.T * x.T == doctest::Approx(r.u * r.u));
  const RindlerPoint back = rindler_from_lab(x);
  CHECK(back.eta == doctest::Approx(r.eta));
  CHECK(back.u == doctest::Approx(r.u));
  CHECK_THROWS_AS(rindler_from_lab({2.0, 1.0}), Error);
  CHECK_THROWS_AS(rindler_from_lab({0.0, -1.0}), Error);
  CHECK_THROWS_AS(lab_from_rindler({0.0, -1.0}), Error);
}

TEST_CASE("rigid frame shows the Lorentz contraction of a Born-rigid rod") {
  // Points of a Born-rigid frame with acceleration g at height z follow
  // Z(T) = sqrt((1/g + z)^2 + T^2). A short rod's lab length at time T is its
  // proper length times sqrt(1 - v^2).
  const double g = 0.05, z = 3.0, dz = 1e-4;
  for (double T : {0.0, 5.0, 40.0}) {
    auto Z = [&](double zz) { return std::hypot(1 / g + zz, T); };
    const double lab_length = Z(z + dz / 2) - Z(z - dz / 2);
    const RigidKinematics k = rigid_frame_kinematics(g, z, T);
    CHECK(lab_length / dz == doctest::Approx(std::sqrt(1 - k.v_over_c * k.v_over_c)).epsilon(1e-7));
    CHECK(k.proper_time_factor == doctest::Approx(1 + g * z));
  }
  CHECK_THROWS_AS(rigid_frame_kinematics(0.5, -3.0, 0.0), Error);
}
