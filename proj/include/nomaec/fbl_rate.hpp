#pragma once

// Finite-blocklength rate model for a two-user NOMA pair.

namespace nomaec {

// Power split of a NOMA pair. The weak user gets the larger share, and the
// shares sum to one.
struct PairPower {
  double alpha_weak = 0.8;
  double alpha_strong = 0.2;

  static PairPower from_strong(double alpha_strong) {
    return PairPower{1.0 - alpha_strong, alpha_strong};
  }
  void validate() const;
};

struct FblParams {
  int blocklength = 400;    // n, channel uses
  double error_prob = 1e-5; // epsilon in (0, 1]; 1 is the degenerate "always fail" limit

  void validate() const;
};

// SNR of the strong user after SIC: alpha_u * gamma_u.
double sinr_strong(double gamma, const PairPower& p);
// SINR of the weak user, who treats the strong user's layer as noise.
double sinr_weak(double gamma, const PairPower& p);

// Channel dispersion sqrt(1 - (1 + x)^{-2}).
double dispersion(double sinr);

// log2(1 + x) - dispersion(x) / sqrt(n) * Q^{-1}(eps), in bits per channel use.
// Not clamped; negative at low SINR when eps < 1/2.
double fbl_rate(double sinr, const FblParams& fp);

// fbl_rate with Q^{-1}(eps)/sqrt(n) precomputed, for inner loops.
class FblRateModel {
 public:
  explicit FblRateModel(const FblParams& fp);

  double operator()(double sinr) const;
  double penalty_scale() const { return penalty_scale_; }

 private:
  double penalty_scale_;
};

}  // namespace nomaec
