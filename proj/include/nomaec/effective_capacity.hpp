#pragma once

// Effective capacity of the strong and weak user of a NOMA pair under finite
// blocklength. Four evaluators are provided and are expected to agree within
// their approximation error:
//
//   * Monte Carlo over sampled ordered SNRs (the reference);
//   * the closed forms, which integrate a second-order expansion of the
//     dispersion factor term by term (hypergeometric-U sum for the strong
//     user, generalized-binomial series for the weak user);
//   * the high-SNR closed forms, which set the dispersion to one;
//   * the rho -> infinity asymptotes.
//
// ec_quadrature integrates the same integrands numerically and bridges the
// Monte-Carlo and closed-form paths in tests.
//
// EC values are in bits/s/Hz. Internally the service term is
// exp(-theta * n * r) with r in bits per channel use.

#include <cstdint>
#include <span>
#include <vector>

#include "nomaec/fading_model.hpp"
#include "nomaec/fbl_rate.hpp"
#include "nomaec/quadrature.hpp"

namespace nomaec {

enum class UserRole { weak, strong };

struct UserQoS {
  double theta = 0.01;  // delay exponent
  int rank = 1;         // position in the ascending gain order, 1..V
  UserRole role = UserRole::strong;
};

enum class EcMethod { monte_carlo, closed_form, high_snr, asymptotic, quadrature };

const char* to_string(EcMethod m);
const char* to_string(UserRole r);

struct EcEstimate {
  double value = 0.0;
  EcMethod method = EcMethod::closed_form;
  double ci_half_width = 0.0;  // 95 %, Monte Carlo only
  std::int64_t samples = 0;    // Monte Carlo only
};

// Truncation control for the weak user's generalized-binomial series.
struct SeriesSettings {
  int s_max = 200000;
  double term_tol = 1e-12;

  void validate() const;
};

// Constants shared by all closed-form expressions of one user.
struct ClosedFormContext {
  double zeta;  // -theta n / (2 ln 2)
  double beta;  // theta sqrt(n) Q^{-1}(eps)
  double k;     // beta^2 / 2 + beta
  double xi;    // 1 / B(rank, V - rank + 1)

  static ClosedFormContext make(double theta, const FblParams& fp, int rank, int num_users);
};

// -ln(eps) / (theta n): no evaluator can exceed this, since the expectation
// inside the logarithm is at least eps.
double ec_cap(const FblParams& fp, double theta);

struct MonteCarloOptions {
  std::int64_t n_samples = 1'000'000;
  std::uint64_t seed = 1;
  int block_size = 1 << 16;  // samples per RNG stream
  int threads = 0;           // 0: hardware concurrency

  void validate() const;
};

// Evaluates several users on the same sampled channels. Block b of the run
// uses RngStream(seed, b) and block results are merged in a fixed pairwise
// order, so the output depends on (seed, n_samples, block_size) only.
// `rate_scale` multiplies every rate (the 2/V time-sharing factor of a
// multi-pair schedule; 1 for a single pair).
std::vector<EcEstimate> ec_monte_carlo(std::span<const UserQoS> users, const PairPower& p,
                                       const FblParams& fp, const FadingConfig& cfg,
                                       const MonteCarloOptions& mc, double rate_scale = 1.0);

EcEstimate ec_monte_carlo(const UserQoS& user, const PairPower& p, const FblParams& fp,
                          const FadingConfig& cfg, const MonteCarloOptions& mc,
                          double rate_scale = 1.0);

EcEstimate ec_strong_closed(int u, int num_users, const PairPower& p, const FblParams& fp,
                            double theta, double rho, const QuadratureSettings& q = {});

EcEstimate ec_weak_closed(int t, int num_users, const PairPower& p, const FblParams& fp,
                          double theta, double rho, const SeriesSettings& ss = {},
                          const QuadratureSettings& q = {});

EcEstimate ec_strong_high_snr(int u, int num_users, const PairPower& p, const FblParams& fp,
                              double theta, double rho, const QuadratureSettings& q = {});

EcEstimate ec_weak_high_snr(int t, int num_users, const PairPower& p, const FblParams& fp,
                            double theta, double rho, const SeriesSettings& ss = {},
                            const QuadratureSettings& q = {});

double ec_strong_asymptote(const FblParams& fp, double theta);
double ec_weak_asymptote(const PairPower& p, const FblParams& fp, double theta);

// Series part of the weak-user closed form, exposed for convergence testing:
//   alpha_u^{-c} (xi / rho) sum_r C(t-1, r) (-1)^r S_r(c),
// where S_r(c) is the integrated binomial series of
// (1 + (alpha_u - 1)/(alpha_u gamma + 1))^c against e^{-(V-t+1+r) gamma / rho}.
// Equals int_0^inf ((gamma+1)/(alpha_u gamma+1))^c f_(t:V)(gamma) dgamma.
double weak_binomial_moment(double c, int t, int num_users, const PairPower& p, double rho,
                            const SeriesSettings& ss);

// Which integrand ec_quadrature integrates against the ordered-SNR density.
enum class IntegrandForm {
  exact,      // exp(-theta n r)
  maclaurin,  // (1+x)^{2 zeta} (1 + beta delta + (beta delta)^2 / 2)
  expanded,   // maclaurin with sqrt(1 - y) ~ 1 - y/2: what the closed forms integrate
  high_snr,   // (1+x)^{2 zeta} e^{beta}
};

EcEstimate ec_quadrature(const UserQoS& user, int num_users, const PairPower& p,
                         const FblParams& fp, double rho, IntegrandForm form,
                         const QuadratureSettings& q = {});

}  // namespace nomaec
