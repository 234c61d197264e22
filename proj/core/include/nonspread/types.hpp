#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nsp {

using cplx = std::complex<double>;

// Chiral-representation Dirac spinor and 4x4 complex matrix. Row-major storage
// keeps entry (r, c) at index 4r + c when the raw buffer is inspected.
using Spinor4 = Eigen::Matrix<cplx, 4, 1>;
using Matrix4C = Eigen::Matrix<cplx, 4, 4, Eigen::RowMajor>;
using Matrix4R = Eigen::Matrix<double, 4, 4, Eigen::RowMajor>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Reduced Compton time hbar/(m c^2) in seconds (CODATA 2018).
inline constexpr double compton_time_s = 1.28808866819e-21;
inline constexpr double electron_mass_mev = 0.51099895;
inline constexpr double fine_structure = 1.0 / 137.035999;

enum class ErrorKind {
  Domain,
  QuadratureFailure,
  Range,
  NoDamping,
  Wedge,
  Masked,
  Inversion,
  MultivaluedInverse,
  Applicability,
  Coverage,
  Sign,
  Usage,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library. `estimate` carries the achieved
// error estimate for quadrature failures and is NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double estimate = std::nan(""))
      : std::runtime_error(what), kind_(kind), estimate_(estimate) {}

  ErrorKind kind() const noexcept { return kind_; }
  double estimate() const noexcept { return estimate_; }

 private:
  ErrorKind kind_;
  double estimate_;
};

}  // namespace nsp
