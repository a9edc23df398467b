#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "nomaec/effective_capacity.hpp"
#include "nomaec/errors.hpp"

namespace nomaec {
namespace {

constexpr double kZ95 = 1.959963984540054;

// Running mean and centred second moment (Welford), mergeable (Chan et al.).
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double y) {
    count += 1.0;
    const double delta = y - mean;
    mean += delta / count;
    m2 += delta * (y - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    Moments out;
    out.count = a.count + b.count;
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * (b.count / out.count);
    out.m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / out.count);
    return out;
  }
};

Moments reduce_pairwise(const std::vector<Moments>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Moments::merge(reduce_pairwise(blocks, lo, mid), reduce_pairwise(blocks, mid, hi));
}

void check_user(const UserQoS& user, int num_users) {
  if (user.rank < 1 || user.rank > num_users) {
    throw DomainError("ec_monte_carlo: rank " + std::to_string(user.rank) + " outside 1.." +
                      std::to_string(num_users));
  }
  if (user.role == UserRole::strong && user.rank < 2) {
    throw DomainError("ec_monte_carlo: a strong user needs a weaker partner (rank >= 2)");
  }
  if (user.role == UserRole::weak && user.rank > num_users - 1) {
    throw DomainError("ec_monte_carlo: a weak user needs a stronger partner (rank <= V-1)");
  }
  if (!(user.theta > 0.0) || !std::isfinite(user.theta)) {
    throw DomainError("ec_monte_carlo: theta must be positive");
  }
}

}  // namespace

void MonteCarloOptions::validate() const {
  if (n_samples < 1) throw DomainError("MonteCarloOptions: need at least one sample");
  if (block_size < 1) throw DomainError("MonteCarloOptions: block size must be positive");
  if (threads < 0) throw DomainError("MonteCarloOptions: thread count must be >= 0");
}

std::vector<EcEstimate> ec_monte_carlo(std::span<const UserQoS> users, const PairPower& p,
                                       const FblParams& fp, const FadingConfig& cfg,
                                       const MonteCarloOptions& mc, double rate_scale) {
  cfg.validate();
  fp.validate();
  p.validate();
  mc.validate();
  if (!(rate_scale > 0.0)) throw DomainError("ec_monte_carlo: rate scale must be positive");
  for (const auto& u : users) check_user(u, cfg.num_users);

  std::vector<EcEstimate> out(users.size());
  for (auto& e : out) {
    e.method = EcMethod::monte_carlo;
    e.samples = mc.n_samples;
  }
  // eps = 1: every sample contributes exactly 1 inside the logarithm.
  if (fp.error_prob == 1.0 || users.empty()) return out;

  const FblRateModel rate(fp);
  const double eps = fp.error_prob;
  const double n = fp.blocklength;
  const std::size_t n_users = users.size();
  const std::int64_t n_blocks = (mc.n_samples + mc.block_size - 1) / mc.block_size;

  std::vector<Moments> block_moments(static_cast<std::size_t>(n_blocks) * n_users);
  std::atomic<std::int64_t> next_block{0};

  const auto worker = [&]() {
    std::vector<double> unit(cfg.num_users);
    std::vector<Moments> local(n_users);
    for (std::int64_t b = next_block++; b < n_blocks; b = next_block++) {
      RngStream rng(mc.seed, static_cast<std::uint64_t>(b));
      const std::int64_t count = std::min<std::int64_t>(mc.block_size, mc.n_samples - b * mc.block_size);
      std::fill(local.begin(), local.end(), Moments{});
      for (std::int64_t k = 0; k < count; ++k) {
        sample_unit_ordered(unit, rng);
        for (std::size_t j = 0; j < n_users; ++j) {
          const auto& user = users[j];
          const double gamma = cfg.mean_snr * unit[user.rank - 1];
          const double x = user.role == UserRole::weak ? sinr_weak(gamma, p) : sinr_strong(gamma, p);
          const double r = rate_scale * rate(x);
          local[j].add(eps + (1.0 - eps) * std::exp(-user.theta * n * r));
        }
      }
      std::copy(local.begin(), local.end(), block_moments.begin() + b * n_users);
    }
  };

  int threads = mc.threads > 0 ? mc.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = static_cast<int>(std::clamp<std::int64_t>(threads, 1, n_blocks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t j = 0; j < n_users; ++j) {
    std::vector<Moments> column(static_cast<std::size_t>(n_blocks));
    for (std::int64_t b = 0; b < n_blocks; ++b) column[b] = block_moments[b * n_users + j];
    const Moments total = reduce_pairwise(column, 0, column.size());
    const double tn = users[j].theta * n;
    auto& est = out[j];
    // A mean of terms that are each at least eps can still round below it.
    est.value = -std::log(std::max(total.mean, fp.error_prob)) / tn;
    if (est.value == 0.0) est.value = 0.0;
    if (total.count > 1.0) {
      const double sd = std::sqrt(total.m2 / (total.count - 1.0));
      est.ci_half_width = kZ95 * sd / std::sqrt(total.count) / (tn * total.mean);
    } else {
      est.ci_half_width = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

EcEstimate ec_monte_carlo(const UserQoS& user, const PairPower& p, const FblParams& fp,
                          const FadingConfig& cfg, const MonteCarloOptions& mc,
                          double rate_scale) {
  return ec_monte_carlo(std::span<const UserQoS>(&user, 1), p, fp, cfg, mc, rate_scale).front();
}

}  // namespace nomaec
