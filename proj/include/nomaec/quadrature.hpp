#pragma once

// Adaptive Gauss-Kronrod (7/15) integration with a global error queue, in the
// style of QUADPACK's QAG. Header-only so the integrand inlines.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "nomaec/errors.hpp"

namespace nomaec {

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1) {
      throw DomainError("QuadratureSettings: need rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(const F& f, double lo, double hi) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double resabs = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kKronrodWeights[j] * (f1[j] + f2[j]);
    resabs += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double resasc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  kronrod *= half;
  gauss *= half;
  resabs *= scale;
  resasc *= scale;

  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return Segment{lo, hi, kronrod, err};
}

}  // namespace detail

// Integrates f over [breakpoints.front(), breakpoints.back()], starting from the
// partition given by the (increasing) breakpoints and bisecting the segment with
// the largest error estimate until the total estimate meets the tolerance.
template <class F>
QuadratureResult integrate_adaptive(const F& f, std::span<const double> breakpoints,
                                    const QuadratureSettings& q) {
  q.validate();
  if (breakpoints.size() < 2) throw DomainError("integrate_adaptive: need at least two breakpoints");

  std::priority_queue<detail::Segment> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k] < breakpoints[k + 1])) {
      throw DomainError("integrate_adaptive: breakpoints must be strictly increasing");
    }
    auto seg = detail::gauss_kronrod_15(f, breakpoints[k], breakpoints[k + 1]);
    total += seg.value;
    total_err += seg.error;
    queue.push(seg);
  }

  while (!(total_err <= std::max(q.abs_tol, q.rel_tol * std::abs(total)))) {
    if (!std::isfinite(total) || !std::isfinite(total_err)) {
      throw ConvergenceError("integrate_adaptive: non-finite integrand");
    }
    if (static_cast<int>(queue.size()) >= q.max_subdivisions) {
      throw ConvergenceError("integrate_adaptive: subdivision budget of " +
                             std::to_string(q.max_subdivisions) + " exhausted (estimate " +
                             std::to_string(total) + ", error " + std::to_string(total_err) + ")");
    }
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw ConvergenceError("integrate_adaptive: round-off limited, cannot bisect further");
    }
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    total += (left.value + right.value) - worst.value;
    total_err += (left.error + right.error) - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-add from scratch so the running updates leave no drift.
  QuadratureResult result;
  result.intervals = static_cast<int>(queue.size());
  double comp = 0.0;
  while (!queue.empty()) {
    const auto& seg = queue.top();
    const double t = result.value + seg.value;
    comp += std::abs(result.value) >= std::abs(seg.value) ? (result.value - t) + seg.value
                                                          : (seg.value - t) + result.value;
    result.value = t;
    result.abs_error += seg.error;
    queue.pop();
  }
  result.value += comp;
  return result;
}

// Integrates f over [0, inf). The range is split at `scale`; [0, scale] gets a
// geometric partition refined down to `fine_scale`, and the tail is mapped onto
// (0, 1] by t = scale / s with the same geometric partition in s.
template <class F>
QuadratureResult integrate_half_line(const F& f, double scale, double fine_scale,
                                     const QuadratureSettings& q) {
  if (!(scale > 0.0) || !(fine_scale > 0.0)) {
    throw DomainError("integrate_half_line: scales must be positive");
  }
  const double ratio = std::min(1.0, fine_scale / scale);
  const int levels = std::clamp(static_cast<int>(std::ceil(-std::log2(ratio))) + 4, 4, 80);
  std::vector<double> unit(levels + 1);
  unit[0] = 0.0;
  for (int k = 1; k <= levels; ++k) unit[k] = std::ldexp(1.0, k - levels);

  std::vector<double> head(unit.size());
  std::transform(unit.begin(), unit.end(), head.begin(), [scale](double u) { return u * scale; });
  const auto inner = integrate_adaptive(f, head, q);

  const auto tail_integrand = [&f, scale](double s) {
    const double t = scale / s;
    const double v = f(t);
    return v == 0.0 ? 0.0 : v * (scale / (s * s));
  };
  const auto outer = integrate_adaptive(tail_integrand, unit, q);
  return QuadratureResult{inner.value + outer.value, inner.abs_error + outer.abs_error,
                          inner.intervals + outer.intervals};
}

}  // namespace nomaec
