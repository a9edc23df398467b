#include "nomaec/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nomaec/errors.hpp"

namespace nomaec {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10000;

// Acklam's rational approximation to the standard normal lower quantile,
// relative error ~1e-9; used only as the Newton seed.
double normal_quantile_seed(double p) {
  constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                       -2.759285104469687e+02, 1.383577518672690e+02,
                                       -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                       -1.556989798598866e+02, 6.680131188771972e+01,
                                       -1.328068155288572e+01};
  constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                       -2.400758277161838e+00, -2.549732539343734e+00,
                                       4.374664141464968e+00,  2.938163982698783e+00};
  constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                       2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// E1(z) for z > 1 by the modified Lentz continued fraction; returns e^z E1(z).
double e1_scaled_continued_fraction(double z) { return exp_integral_en_scaled(1, z); }

}  // namespace

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gaussian_q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("gaussian_q_inv: p must lie in (0, 1), got " + std::to_string(p));
  }
  double x = -normal_quantile_seed(p);
  for (int it = 0; it < 100; ++it) {
    const double density = normal_density(x);
    if (density == 0.0) break;
    const double step = (gaussian_q(x) - p) / density;
    x += step;
    if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(x))) return x;
  }
  return x;
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive");
  return std::lgamma(x);
}

double beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: arguments must be positive");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double exp_integral_ei(double x) {
  if (!(x < 0.0)) {
    throw DomainError("exp_integral_ei: only negative arguments are supported");
  }
  const double z = -x;
  if (z > 1.0) {
    return -e1_scaled_continued_fraction(z) * std::exp(-z);
  }
  // Ei(-z) = gamma + ln z + sum_k (-z)^k / (k k!)
  double sum = 0.0;
  double power = 1.0;
  for (int k = 1; k < kMaxIterations; ++k) {
    power *= -z / k;
    const double term = power / k;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return kEulerGamma + std::log(z) + sum;
}

double exp_integral_en_scaled(int n, double x) {
  if (n < 0 || !(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("exp_integral_en_scaled: need n >= 0 and finite x > 0");
  }
  if (n == 0) return 1.0 / x;

  if (x > 1.0) {
    constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
    double b = x + n;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
      const double an = -static_cast<double>(i) * (n - 1 + i);
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const double del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("exp_integral_en_scaled: continued fraction did not converge");
  }

  const int nm1 = n - 1;
  double ans = nm1 != 0 ? 1.0 / nm1 : -std::log(x) - kEulerGamma;
  double fact = 1.0;
  for (int i = 1; i <= kMaxIterations; ++i) {
    fact *= -x / i;
    double del;
    if (i != nm1) {
      del = -fact / (i - nm1);
    } else {
      double psi = -kEulerGamma;
      for (int k = 1; k <= nm1; ++k) psi += 1.0 / k;
      del = fact * (-std::log(x) + psi);
    }
    ans += del;
    if (std::abs(del) < std::abs(ans) * kEps) return ans * std::exp(x);
  }
  throw ConvergenceError("exp_integral_en_scaled: series did not converge");
}

double hyp_u(double a, double b, double z, const QuadratureSettings& q) {
  if (!(a > 0.0) || !(z > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
    throw DomainError("hyp_u: need finite a > 0 and z > 0");
  }
  const double p = b - a - 1.0;
  const auto integrand = [a, p, z](double t) {
    const double log_value = -z * t + (a - 1.0) * std::log(t) + p * std::log1p(t);
    return std::exp(log_value);
  };
  // The integrand lives on a scale of about 1/(z + |p|) near the origin, and
  // after the t = 1/s map the tail concentrates near s ~ z when z is small.
  const double fine = std::min({1.0 / (z + std::abs(p) + 1.0), z, 1.0});
  const auto result = integrate_half_line(integrand, 1.0, fine, q);
  return a == 1.0 ? result.value : result.value * std::exp(-std::lgamma(a));
}

double gen_binom(double x, int y) {
  if (y < 0) throw DomainError("gen_binom: lower index must be non-negative");
  double value = 1.0;
  for (int k = 0; k < y; ++k) value *= (x - k) / (k + 1);
  return value;
}

double log_shifted_power_laplace(int k, double z, double b) {
  if (k < 1 || !(z > 0.0) || !(b > 0.0)) {
    throw DomainError("shifted_power_laplace: need k >= 1, z > 0, b > 0");
  }
  return (1.0 - k) * std::log(b) + std::log(exp_integral_en_scaled(k, b * z));
}

double shifted_power_laplace(int k, double z, double b) {
  return std::exp(log_shifted_power_laplace(k, z, b));
}

}  // namespace nomaec
