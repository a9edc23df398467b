#include "nomaec/fading_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nomaec/errors.hpp"

namespace nomaec {

void FadingConfig::validate() const {
  if (num_users < 1) throw DomainError("FadingConfig: need at least one user");
  if (!(mean_snr > 0.0) || !std::isfinite(mean_snr)) {
    throw DomainError("FadingConfig: mean SNR must be positive and finite");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_seed(seed, stream)) {}

double RngStream::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform()); }

double order_weight(int rank, int num_users) {
  if (rank < 1 || rank > num_users) {
    throw DomainError("order_weight: rank " + std::to_string(rank) + " outside 1.." +
                      std::to_string(num_users));
  }
  return std::exp(std::lgamma(num_users + 1.0) - std::lgamma(static_cast<double>(rank)) -
                  std::lgamma(num_users - rank + 1.0));
}

double ordered_pdf(int rank, const FadingConfig& cfg, double gamma) {
  cfg.validate();
  const double xi = order_weight(rank, cfg.num_users);
  if (!(gamma >= 0.0)) throw DomainError("ordered_pdf: gamma must be non-negative");
  const double v = gamma / cfg.mean_snr;
  // xi f F^{i-1} (1-F)^{V-i} with f = e^{-v}/rho, F = 1 - e^{-v}
  if (rank > 1 && v == 0.0) return 0.0;
  const double log_cdf = rank > 1 ? (rank - 1) * std::log(-std::expm1(-v)) : 0.0;
  return xi / cfg.mean_snr * std::exp(-(cfg.num_users - rank + 1) * v + log_cdf);
}

void sample_unit_ordered(std::span<double> out, RngStream& rng) {
  for (double& g : out) g = rng.exponential();
  std::sort(out.begin(), out.end());
}

OrderedGainSample sample_ordered(const FadingConfig& cfg, RngStream& rng) {
  cfg.validate();
  OrderedGainSample sample{std::vector<double>(cfg.num_users)};
  sample_unit_ordered(sample.gamma, rng);
  for (double& g : sample.gamma) g *= cfg.mean_snr;
  return sample;
}

}  // namespace nomaec
