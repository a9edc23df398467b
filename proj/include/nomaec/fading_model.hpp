#pragma once

// Rayleigh block fading with V users ordered by channel gain.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nomaec {

struct FadingConfig {
  int num_users = 10;     // V
  double mean_snr = 1.0;  // rho, linear

  void validate() const;
};

// Instantaneous received SNRs gamma_i = rho |h_i|^2 sorted ascending.
struct OrderedGainSample {
  std::vector<double> gamma;
};

// SplitMix64 finalizer applied to (seed, stream); distinct streams of the same
// seed get statistically independent engine states.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// One independent random stream. Stream k of seed s is always the same
// sequence, so parallel work split into numbered blocks is reproducible.
// Not thread-safe: use one stream per worker.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  // Uniform on (0, 1], 53 random bits.
  double uniform();
  // Exponential with unit mean.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

// xi_i = 1 / B(i, V - i + 1) = V! / ((i-1)! (V-i)!).
double order_weight(int rank, int num_users);

// Density of the rank-th smallest of V i.i.d. exponential SNRs with mean rho.
double ordered_pdf(int rank, const FadingConfig& cfg, double gamma);

// Fills `out` (size V) with V sorted unit-mean exponentials. Scaling by rho
// gives an OrderedGainSample, so two SNRs driven by the same stream see
// common random numbers.
void sample_unit_ordered(std::span<double> out, RngStream& rng);

OrderedGainSample sample_ordered(const FadingConfig& cfg, RngStream& rng);

}  // namespace nomaec
