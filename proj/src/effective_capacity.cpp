#include "nomaec/effective_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "nomaec/errors.hpp"
#include "nomaec/special_functions.hpp"

namespace nomaec {
namespace {

// Neumaier-compensated running sum; the closed forms add alternating terms.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Sum of terms given as (sign, log|term|), kept relative to the largest term
// seen so far so that neither factor of a term overflows.
class LogSpaceSum {
 public:
  void add(int sign, double log_abs) {
    if (empty_ || log_abs > log_scale_) {
      const double carried = empty_ ? 0.0 : sum_.value() * std::exp(log_scale_ - log_abs);
      sum_ = CompensatedSum{};
      sum_.add(carried);
      log_scale_ = log_abs;
      empty_ = false;
    }
    sum_.add(sign * std::exp(log_abs - log_scale_));
  }
  double log_abs() const { return std::log(std::abs(sum_.value())) + log_scale_; }
  int sign() const { return sum_.value() < 0.0 ? -1 : 1; }

 private:
  CompensatedSum sum_;
  double log_scale_ = 0.0;
  bool empty_ = true;
};

double binomial_integer(int n, int k) {
  double value = 1.0;
  for (int j = 1; j <= k; ++j) value = value * (n - k + j) / j;
  return std::round(value);
}

void check_common(int rank, int num_users, const PairPower& p, const FblParams& fp,
                  double theta, double rho) {
  if (num_users < 1 || rank < 1 || rank > num_users) {
    throw DomainError("rank " + std::to_string(rank) + " outside 1.." + std::to_string(num_users));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive and finite");
  p.validate();
  fp.validate();
}

EcEstimate finish(double log_argument_input, double theta, const FblParams& fp, EcMethod method,
                  const char* who) {
  if (!(log_argument_input > 0.0) || !std::isfinite(log_argument_input)) {
    std::ostringstream os;
    os << who << ": logarithm argument " << log_argument_input
       << " is not positive and finite (theta=" << theta << ", n=" << fp.blocklength
       << ", eps=" << fp.error_prob << ")";
    throw NumericalError(os.str());
  }
  // The expectation is at least eps because the service factor is
  // non-negative. The truncated kernel expansion can dip below zero when
  // eps > 1/2 makes beta negative, and rounding can do the same near the cap,
  // so the bound is enforced here for every evaluator.
  const double argument = std::max(log_argument_input, fp.error_prob);
  EcEstimate est;
  est.method = method;
  est.value = -std::log(argument) / (theta * fp.blocklength);
  if (est.value == 0.0) est.value = 0.0;  // no negative zero in output
  return est;
}

EcEstimate zero_estimate(EcMethod method) {
  EcEstimate est;
  est.method = method;
  est.value = 0.0;
  return est;
}

// sum_i C(u-1, i) (-1)^i U(1, b, eta_i), eta_i = (V-u+1+i)/(rho alpha_u), and
// the sum of the magnitudes of its terms.
struct AlternatingSum {
  double value;
  double magnitude;
};

AlternatingSum alternating_u_sum(int u, int num_users, double alpha_u, double rho, double b,
                                 const QuadratureSettings& q) {
  CompensatedSum sum;
  double magnitude = 0.0;
  for (int i = 0; i < u; ++i) {
    const double eta = (num_users - u + 1 + i) / (rho * alpha_u);
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    const double term = binomial_integer(u - 1, i) * hyp_u(1.0, b, eta, q);
    sum.add(sign * term);
    magnitude += term;
  }
  return {sum.value(), magnitude};
}

// Beyond this ratio of term magnitudes to the result, the alternating sum
// has lost too many of the digits its U values carry.
constexpr double kMaxCancellation = 1e3;

bool cancels(const AlternatingSum& s) {
  return !(s.magnitude <= kMaxCancellation * std::abs(s.value));
}

// Same finite sum with the binomial expansion folded back under the integral
// representation U(1, b, z) = int_0^inf e^{-z t} (1 + t)^{b-2} dt:
//   int_0^inf e^{-eta_0 t} (1 - e^{-t/(rho alpha_u)})^{u-1} g(t) dt.
// The weight is non-negative, so nothing cancels. `g` receives log1p(t).
template <class G>
double fused_u_sum(int u, int num_users, double alpha_u, double rho, double zeta, G&& g,
                   const QuadratureSettings& q) {
  const double eta0 = (num_users - u + 1) / (rho * alpha_u);
  const double step = 1.0 / (rho * alpha_u);
  const auto f = [&](double t) {
    double log_w = -eta0 * t;
    if (u > 1) log_w += (u - 1) * std::log(-std::expm1(-step * t));
    return std::exp(log_w) * g(std::log1p(t));
  };
  const double scale = u / (eta0 + 2.0 * std::abs(zeta) + 2.0);
  const double fine = 1e-2 * std::min(scale, rho * alpha_u);
  return integrate_half_line(f, scale, fine, q).value;
}

}  // namespace

const char* to_string(EcMethod m) {
  switch (m) {
    case EcMethod::monte_carlo: return "mc";
    case EcMethod::closed_form: return "closed";
    case EcMethod::high_snr: return "high_snr";
    case EcMethod::asymptotic: return "asymptotic";
    case EcMethod::quadrature: return "quadrature";
  }
  return "?";
}

const char* to_string(UserRole r) { return r == UserRole::weak ? "weak" : "strong"; }

void SeriesSettings::validate() const {
  if (s_max < 2 || !(term_tol > 0.0)) {
    throw DomainError("SeriesSettings: need s_max >= 2 and term_tol > 0");
  }
}

ClosedFormContext ClosedFormContext::make(double theta, const FblParams& fp, int rank,
                                          int num_users) {
  const double n = fp.blocklength;
  ClosedFormContext ctx{};
  ctx.zeta = -theta * n / (2.0 * std::numbers::ln2);
  ctx.beta = theta * std::sqrt(n) * gaussian_q_inv(fp.error_prob);
  ctx.k = 0.5 * ctx.beta * ctx.beta + ctx.beta;
  ctx.xi = order_weight(rank, num_users);
  return ctx;
}

double ec_cap(const FblParams& fp, double theta) {
  fp.validate();
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  if (fp.error_prob == 1.0) return 0.0;
  return -std::log(fp.error_prob) / (theta * fp.blocklength);
}

EcEstimate ec_strong_closed(int u, int num_users, const PairPower& p, const FblParams& fp,
                            double theta, double rho, const QuadratureSettings& q) {
  check_common(u, num_users, p, fp, theta, rho);
  if (fp.error_prob == 1.0) return zero_estimate(EcMethod::closed_form);
  const auto ctx = ClosedFormContext::make(theta, fp, u, num_users);
  const double au = p.alpha_strong;
  const auto with_k = alternating_u_sum(u, num_users, au, rho, 2.0 + 2.0 * ctx.zeta, q);
  const auto with_y = alternating_u_sum(u, num_users, au, rho, 2.0 * ctx.zeta, q);
  double sum = with_k.value * (ctx.k + 1.0) - with_y.value * (ctx.k - 0.5 * ctx.beta);
  if (cancels(with_k) || cancels(with_y)) {
    const double two_zeta = 2.0 * ctx.zeta;
    sum = fused_u_sum(
        u, num_users, au, rho, ctx.zeta,
        [&](double l) {
          return std::exp(two_zeta * l) * (ctx.k + 1.0) -
                 std::exp((two_zeta - 2.0) * l) * (ctx.k - 0.5 * ctx.beta);
        },
        q);
  }
  const double moment = ctx.xi / (rho * au) * sum;
  const double eps = fp.error_prob;
  return finish(eps + (1.0 - eps) * moment, theta, fp, EcMethod::closed_form, "ec_strong_closed");
}

EcEstimate ec_strong_high_snr(int u, int num_users, const PairPower& p, const FblParams& fp,
                              double theta, double rho, const QuadratureSettings& q) {
  check_common(u, num_users, p, fp, theta, rho);
  if (fp.error_prob == 1.0) return zero_estimate(EcMethod::high_snr);
  const auto ctx = ClosedFormContext::make(theta, fp, u, num_users);
  const double au = p.alpha_strong;
  const auto alt = alternating_u_sum(u, num_users, au, rho, 2.0 + 2.0 * ctx.zeta, q);
  double sum = alt.value;
  if (cancels(alt)) {
    const double two_zeta = 2.0 * ctx.zeta;
    sum = fused_u_sum(u, num_users, au, rho, ctx.zeta,
                      [&](double l) { return std::exp(two_zeta * l); }, q);
  }
  const double moment = ctx.xi / (rho * au) * std::exp(ctx.beta) * sum;
  const double eps = fp.error_prob;
  return finish(eps + (1.0 - eps) * moment, theta, fp, EcMethod::high_snr, "ec_strong_high_snr");
}

double weak_binomial_moment(double c, int t, int num_users, const PairPower& p, double rho,
                            const SeriesSettings& ss) {
  ss.validate();
  p.validate();
  const double au = p.alpha_strong;
  const double shift = 1.0 / au;                  // b of (gamma + b)^{-s}
  const double log_ratio = std::log((1.0 - au) / au);  // log |(alpha_u - 1)/alpha_u|
  const double log_prefactor = -c * std::log(au) + std::log(order_weight(t, num_users)) -
                               std::log(rho);
  // All terms share one sign pattern and first grow, peaking near s*;
  // the tolerance stop and the divergence check apply beyond it.
  const int s_peak = static_cast<int>(std::ceil(std::max(0.0, -c) * (1.0 - au) / au)) + 2;
  const double log_tol = std::log(ss.term_tol);

  CompensatedSum total;
  for (int r = 0; r < t; ++r) {
    const double lambda = (num_users - t + 1 + r) / rho;
    LogSpaceSum series;
    series.add(1, -std::log(lambda));  // s = 0: int e^{-lambda g} dg

    double log_binom = 0.0;  // log |C(c, s)|
    int binom_sign = 1;
    double previous = -std::numeric_limits<double>::infinity();
    int growing = 0;
    for (int s = 1; s <= ss.s_max; ++s) {
      const double factor = c - s + 1;
      if (factor == 0.0) break;  // c a non-negative integer: the series terminates
      log_binom += std::log(std::abs(factor)) - std::log(static_cast<double>(s));
      if (factor < 0.0) binom_sign = -binom_sign;
      // ((alpha_u - 1)/alpha_u)^s is negative for odd s
      const int sign = (s % 2 == 1) ? -binom_sign : binom_sign;
      const double log_term =
          log_binom + s * log_ratio + log_shifted_power_laplace(s, lambda, shift);
      if (!std::isfinite(log_term)) {
        throw ConvergenceError("weak_binomial_moment: non-finite term at s=" + std::to_string(s));
      }
      series.add(sign, log_term);
      if (s > s_peak) {
        growing = log_term > previous ? growing + 1 : 0;
        if (growing >= 3) {
          throw ConvergenceError("weak_binomial_moment: terms keep growing past s=" +
                                 std::to_string(s_peak) + " (at s=" + std::to_string(s) + ")");
        }
        if (log_term < log_tol + series.log_abs()) break;
      }
      previous = log_term;
    }
    const double value = series.sign() * std::exp(series.log_abs() + log_prefactor);
    const double sign = r % 2 == 0 ? 1.0 : -1.0;
    total.add(sign * binomial_integer(t - 1, r) * value);
  }
  return total.value();
}

EcEstimate ec_weak_closed(int t, int num_users, const PairPower& p, const FblParams& fp,
                          double theta, double rho, const SeriesSettings& ss,
                          [[maybe_unused]] const QuadratureSettings& q) {
  check_common(t, num_users, p, fp, theta, rho);
  if (fp.error_prob == 1.0) return zero_estimate(EcMethod::closed_form);
  const auto ctx = ClosedFormContext::make(theta, fp, t, num_users);
  const double a = weak_binomial_moment(2.0 * ctx.zeta, t, num_users, p, rho, ss);
  const double b = weak_binomial_moment(2.0 * ctx.zeta - 2.0, t, num_users, p, rho, ss);
  const double moment = a * (ctx.k + 1.0) - b * (ctx.k - 0.5 * ctx.beta);
  const double eps = fp.error_prob;
  return finish(eps + (1.0 - eps) * moment, theta, fp, EcMethod::closed_form, "ec_weak_closed");
}

EcEstimate ec_weak_high_snr(int t, int num_users, const PairPower& p, const FblParams& fp,
                            double theta, double rho, const SeriesSettings& ss,
                            [[maybe_unused]] const QuadratureSettings& q) {
  check_common(t, num_users, p, fp, theta, rho);
  if (fp.error_prob == 1.0) return zero_estimate(EcMethod::high_snr);
  const auto ctx = ClosedFormContext::make(theta, fp, t, num_users);
  const double a = weak_binomial_moment(2.0 * ctx.zeta, t, num_users, p, rho, ss);
  const double eps = fp.error_prob;
  return finish(eps + (1.0 - eps) * std::exp(ctx.beta) * a, theta, fp, EcMethod::high_snr,
                "ec_weak_high_snr");
}

double ec_strong_asymptote(const FblParams& fp, double theta) { return ec_cap(fp, theta); }

double ec_weak_asymptote(const PairPower& p, const FblParams& fp, double theta) {
  p.validate();
  fp.validate();
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  if (fp.error_prob == 1.0) return 0.0;
  const auto ctx = ClosedFormContext::make(theta, fp, 1, 1);
  const double au = p.alpha_strong;
  const double limit =
      std::exp(-2.0 * ctx.zeta * std::log(au) + ctx.beta * std::sqrt(1.0 - au * au));
  const double eps = fp.error_prob;
  return finish(eps + (1.0 - eps) * limit, theta, fp, EcMethod::asymptotic, "ec_weak_asymptote")
      .value;
}

EcEstimate ec_quadrature(const UserQoS& user, int num_users, const PairPower& p,
                         const FblParams& fp, double rho, IntegrandForm form,
                         const QuadratureSettings& q) {
  check_common(user.rank, num_users, p, fp, user.theta, rho);
  if (fp.error_prob == 1.0) return zero_estimate(EcMethod::quadrature);
  const auto ctx = ClosedFormContext::make(user.theta, fp, user.rank, num_users);
  const FblRateModel rate(fp);
  const FadingConfig cfg{num_users, rho};
  const double tn = user.theta * fp.blocklength;
  const bool weak = user.role == UserRole::weak;

  const auto service = [&](double x) {
    switch (form) {
      case IntegrandForm::exact:
        return std::exp(-tn * rate(x));
      case IntegrandForm::maclaurin: {
        const double bd = ctx.beta * dispersion(x);
        return std::exp(2.0 * ctx.zeta * std::log1p(x)) * (1.0 + bd + 0.5 * bd * bd);
      }
      case IntegrandForm::expanded: {
        const double y = 1.0 / ((1.0 + x) * (1.0 + x));
        return std::exp(2.0 * ctx.zeta * std::log1p(x)) *
               ((ctx.k + 1.0) - (ctx.k - 0.5 * ctx.beta) * y);
      }
      case IntegrandForm::high_snr:
        return std::exp(2.0 * ctx.zeta * std::log1p(x) + ctx.beta);
    }
    return 0.0;
  };
  const auto integrand = [&](double gamma) {
    const double density = ordered_pdf(user.rank, cfg, gamma);
    if (density == 0.0) return 0.0;
    const double x = weak ? sinr_weak(gamma, p) : sinr_strong(gamma, p);
    return service(x) * density;
  };
  const double fine =
      std::min(rho, 1.0 / (p.alpha_strong * (1.0 + 2.0 * std::abs(ctx.zeta) + std::abs(ctx.beta))));
  const auto moment = integrate_half_line(integrand, rho, fine, q);
  const double eps = fp.error_prob;
  return finish(eps + (1.0 - eps) * moment.value, user.theta, fp, EcMethod::quadrature,
                "ec_quadrature");
}

}  // namespace nomaec
