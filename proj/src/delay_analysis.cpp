#include "nomaec/delay_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "nomaec/errors.hpp"

namespace nomaec {

void DelayTarget::validate() const {
  if (!(d_max > 0.0)) throw DomainError("DelayTarget: d_max must be positive");
  if (!(nonempty_prob > 0.0 && nonempty_prob <= 1.0)) {
    throw DomainError("DelayTarget: non-empty probability must lie in (0, 1]");
  }
}

double delay_violation(const EcEstimate& ec, double theta, const DelayTarget& target) {
  target.validate();
  if (!(theta > 0.0)) throw DomainError("delay_violation: theta must be positive");
  if (!(ec.value >= 0.0)) throw DomainError("delay_violation: EC must be non-negative");
  const double p = target.nonempty_prob * std::exp(-theta * ec.value * target.d_max);
  return std::clamp(p, 0.0, 1.0);
}

double delay_floor(const FblParams& fp, double d_max) {
  fp.validate();
  if (!(d_max >= 0.0)) throw DomainError("delay_floor: d_max must be non-negative");
  return std::pow(fp.error_prob, d_max / fp.blocklength);
}

}  // namespace nomaec
