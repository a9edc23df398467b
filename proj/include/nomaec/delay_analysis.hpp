#pragma once

#include "nomaec/effective_capacity.hpp"

namespace nomaec {

// Delay bound D_max is counted in the same normalized blocks as the EC rate,
// so theta * EC * D_max is dimensionless.
struct DelayTarget {
  double d_max = 400.0;
  double nonempty_prob = 1.0;  // Pr{queue non-empty}; 1 gives the conservative bound

  void validate() const;
};

// nonempty_prob * exp(-theta * EC * D_max), clamped to [0, 1].
double delay_violation(const EcEstimate& ec, double theta, const DelayTarget& target);

// eps^{D_max / n}: since theta * EC <= -ln(eps)/n for every theta, the
// violation bound can never fall below this, however strict theta gets.
double delay_floor(const FblParams& fp, double d_max);

}  // namespace nomaec
