#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "nonspread/types.hpp"

namespace nsp::quad {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1], positive half.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
  double a, b;
  V value;
  double err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

template <class V>
struct Result {
  V value;
  double err = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

template <class V, class F, class Norm>
Segment<V> gk15(const F& f, double a, double b, const Norm& norm) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const V fc = f(c);
  V kron = fc * kWgk[7];
  V gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kXgk[j];
    const V s = f(c - dx) + f(c + dx);
    kron = kron + s * kWgk[j];
    if (j % 2 == 1) gauss = gauss + s * kWg[j / 2];
  }
  kron = kron * hw;
  gauss = gauss * hw;
  return {a, b, kron, norm(kron - gauss)};
}

// Globally adaptive Gauss-Kronrod with bisection of the worst segment.
// `breaks` seeds the initial partition (must be increasing, at least two).
template <class V, class F, class Norm>
Result<V> adaptive(const F& f, const std::vector<double>& breaks, double abs_tol,
                   double rel_tol, int max_subdivisions, const Norm& norm) {
  std::priority_queue<Segment<V>> heap;
  V total{};
  bool first = true;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto s = gk15<V>(f, breaks[i], breaks[i + 1], norm);
    if (first) {
      total = s.value;
      first = false;
    } else {
      total = total + s.value;
    }
    err += s.err;
    heap.push(std::move(s));
  }
  int count = static_cast<int>(heap.size());
  while (err > std::max(abs_tol, rel_tol * norm(total)) && count < max_subdivisions) {
    Segment<V> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    auto left = gk15<V>(f, worst.a, mid, norm);
    auto right = gk15<V>(f, mid, worst.b, norm);
    total = total - worst.value + left.value + right.value;
    err += left.err + right.err - worst.err;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  V sum{};
  double esum = 0.0;
  bool init = true;
  while (!heap.empty()) {
    const auto& s = heap.top();
    if (init) {
      sum = s.value;
      init = false;
    } else {
      sum = sum + s.value;
    }
    esum += s.err;
    heap.pop();
  }
  Result<V> out;
  out.value = sum;
  out.err = esum;
  out.subdivisions = count;
  out.converged = esum <= std::max(abs_tol, rel_tol * norm(sum));
  return out;
}

template <class F>
Result<double> adaptive_scalar(const F& f, double a, double b, double abs_tol, double rel_tol,
                               int max_subdivisions = 2000) {
  return adaptive<double>(f, {a, b}, abs_tol, rel_tol, max_subdivisions,
                          [](double x) { return std::abs(x); });
}

}  // namespace nsp::quad
