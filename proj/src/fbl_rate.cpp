#include "nomaec/fbl_rate.hpp"

#include <cmath>
#include <numbers>

#include "nomaec/errors.hpp"
#include "nomaec/special_functions.hpp"

namespace nomaec {

void PairPower::validate() const {
  if (!(alpha_strong > 0.0 && alpha_strong < alpha_weak && alpha_weak < 1.0)) {
    throw DomainError("PairPower: need 0 < alpha_strong < alpha_weak < 1");
  }
  if (std::abs(alpha_weak + alpha_strong - 1.0) > 1e-12) {
    throw DomainError("PairPower: alpha_weak + alpha_strong must equal 1");
  }
}

void FblParams::validate() const {
  if (blocklength < 1) throw DomainError("FblParams: blocklength must be >= 1");
  if (!(error_prob > 0.0 && error_prob <= 1.0)) {
    throw DomainError("FblParams: error probability must lie in (0, 1]");
  }
}

double sinr_strong(double gamma, const PairPower& p) { return p.alpha_strong * gamma; }

double sinr_weak(double gamma, const PairPower& p) {
  if (std::isinf(gamma)) return p.alpha_weak / p.alpha_strong;
  return p.alpha_weak * gamma / (p.alpha_strong * gamma + 1.0);
}

double dispersion(double sinr) {
  // 1 - (1+x)^{-2} = x (2 + x) / (1 + x)^2, without cancellation at small x
  if (std::isinf(sinr)) return 1.0;
  const double onep = 1.0 + sinr;
  return std::sqrt(sinr * (2.0 + sinr)) / onep;
}

FblRateModel::FblRateModel(const FblParams& fp)
    : penalty_scale_((fp.validate(), gaussian_q_inv(fp.error_prob)) /
                     std::sqrt(static_cast<double>(fp.blocklength))) {}

double FblRateModel::operator()(double sinr) const {
  return std::log1p(sinr) / std::numbers::ln2 - dispersion(sinr) * penalty_scale_;
}

double fbl_rate(double sinr, const FblParams& fp) { return FblRateModel(fp)(sinr); }

}  // namespace nomaec
