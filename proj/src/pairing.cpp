#include "nomaec/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "nomaec/errors.hpp"

namespace nomaec {
namespace {

void check_even(int num_users) {
  if (num_users < 2 || num_users % 2 != 0) {
    throw DomainError("pairing: the number of users must be even and >= 2, got " +
                      std::to_string(num_users));
  }
}

bool same_power(const PairPower& a, const PairPower& b) {
  return a.alpha_weak == b.alpha_weak && a.alpha_strong == b.alpha_strong;
}

}  // namespace

void PairingSet::validate(int num_users) const {
  check_even(num_users);
  if (static_cast<int>(pairs.size()) * 2 != num_users) {
    throw DomainError("PairingSet: need exactly V/2 pairs");
  }
  std::vector<int> seen(num_users + 1, 0);
  for (const auto& pair : pairs) {
    if (pair.weak_rank < 1 || pair.strong_rank > num_users || pair.weak_rank >= pair.strong_rank) {
      throw DomainError("PairingSet: each pair needs 1 <= weak_rank < strong_rank <= V");
    }
    pair.power.validate();
    ++seen[pair.weak_rank];
    ++seen[pair.strong_rank];
  }
  for (int r = 1; r <= num_users; ++r) {
    if (seen[r] != 1) {
      throw DomainError("PairingSet: rank " + std::to_string(r) + " must appear exactly once");
    }
  }
}

PairingSet PairingSet::canonical() const {
  PairingSet out = *this;
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

std::string PairingSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) os << ',';
    os << '(' << pairs[i].weak_rank << ',' << pairs[i].strong_rank << ')';
  }
  os << '}';
  return os.str();
}

PairingSet make_pairing(std::initializer_list<std::pair<int, int>> pairs, const PairPower& power) {
  PairingSet ps;
  for (const auto& [t, u] : pairs) ps.pairs.push_back(NomaPair{t, u, power});
  return ps;
}

PairRates pair_rates(const NomaPair& pair, double gamma_weak, double gamma_strong, int num_users,
                     const FblParams& fp) {
  check_even(num_users);
  pair.power.validate();
  if (!(gamma_weak >= 0.0) || !(gamma_strong >= 0.0)) {
    throw DomainError("pair_rates: SNRs must be non-negative");
  }
  const FblRateModel rate(fp);
  const double share = 2.0 / num_users;
  return PairRates{share * rate(sinr_weak(gamma_weak, pair.power)),
                   share * rate(sinr_strong(gamma_strong, pair.power))};
}

PairEc pair_ec(const NomaPair& pair, int num_users, const FblParams& fp, double theta_weak,
               double theta_strong, double rho, const MonteCarloOptions& mc) {
  check_even(num_users);
  if (pair.weak_rank < 1 || pair.strong_rank > num_users || pair.weak_rank >= pair.strong_rank) {
    throw DomainError("pair_ec: need 1 <= weak_rank < strong_rank <= V");
  }
  const std::vector<UserQoS> users = {{theta_weak, pair.weak_rank, UserRole::weak},
                                      {theta_strong, pair.strong_rank, UserRole::strong}};
  const auto est = ec_monte_carlo(users, pair.power, fp, FadingConfig{num_users, rho}, mc,
                                  2.0 / num_users);
  return PairEc{est[0], est[1]};
}

PairEc pair_ec_closed(const NomaPair& pair, int num_users, const FblParams& fp, double theta_weak,
                      double theta_strong, double rho) {
  check_even(num_users);
  if (pair.weak_rank < 1 || pair.strong_rank > num_users || pair.weak_rank >= pair.strong_rank) {
    throw DomainError("pair_ec_closed: need 1 <= weak_rank < strong_rank <= V");
  }
  const double share = 2.0 / num_users;
  PairEc out{ec_weak_closed(pair.weak_rank, num_users, pair.power, fp, share * theta_weak, rho),
             ec_strong_closed(pair.strong_rank, num_users, pair.power, fp, share * theta_strong,
                              rho)};
  out.weak.value *= share;
  out.strong.value *= share;
  return out;
}

TotalEc total_ec(const PairingSet& ps, int num_users, const FblParams& fp, double theta,
                 double rho, const MonteCarloOptions& mc) {
  ps.validate(num_users);
  const PairingSet canon = ps.canonical();

  // One Monte-Carlo pass per distinct power split; users sharing a pass see
  // the same draws as they would in separate calls with the same seed.
  std::vector<PairEc> per_pair(canon.pairs.size());
  std::vector<bool> done(canon.pairs.size(), false);
  for (std::size_t i = 0; i < canon.pairs.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> group;
    std::vector<UserQoS> users;
    for (std::size_t j = i; j < canon.pairs.size(); ++j) {
      if (done[j] || !same_power(canon.pairs[j].power, canon.pairs[i].power)) continue;
      group.push_back(j);
      users.push_back({theta, canon.pairs[j].weak_rank, UserRole::weak});
      users.push_back({theta, canon.pairs[j].strong_rank, UserRole::strong});
      done[j] = true;
    }
    const auto est = ec_monte_carlo(users, canon.pairs[i].power, fp,
                                    FadingConfig{num_users, rho}, mc, 2.0 / num_users);
    for (std::size_t g = 0; g < group.size(); ++g) {
      per_pair[group[g]] = PairEc{est[2 * g], est[2 * g + 1]};
    }
  }

  TotalEc total;
  for (const auto& pe : per_pair) {
    total.value += pe.weak.value + pe.strong.value;
    total.ci_half_width += pe.weak.ci_half_width + pe.strong.ci_half_width;
  }
  return total;
}

std::vector<PairingSet> enumerate_matchings(int num_users, const PairPower& power) {
  check_even(num_users);
  std::vector<PairingSet> out;
  std::vector<int> remaining(num_users);
  for (int i = 0; i < num_users; ++i) remaining[i] = i + 1;
  PairingSet current;

  std::function<void(std::vector<int>&)> recurse = [&](std::vector<int>& left) {
    if (left.empty()) {
      out.push_back(current);
      return;
    }
    const int first = left.front();
    for (std::size_t k = 1; k < left.size(); ++k) {
      const int partner = left[k];
      std::vector<int> rest;
      rest.reserve(left.size() - 2);
      for (std::size_t j = 1; j < left.size(); ++j) {
        if (j != k) rest.push_back(left[j]);
      }
      current.pairs.push_back(NomaPair{first, partner, power});
      recurse(rest);
      current.pairs.pop_back();
    }
  };
  recurse(remaining);
  return out;
}

BestPairing best_pairing(int num_users, const FblParams& fp, double theta, double rho,
                         const MonteCarloOptions& mc, const PairPower& power) {
  check_even(num_users);
  if (num_users > 12) throw DomainError("best_pairing: exhaustive search supports V <= 12");
  power.validate();

  // Each user's EC depends only on its rank and role, so one pass over the
  // common draws prices every matching.
  std::vector<UserQoS> users;
  for (int r = 1; r < num_users; ++r) users.push_back({theta, r, UserRole::weak});
  for (int r = 2; r <= num_users; ++r) users.push_back({theta, r, UserRole::strong});
  const auto est = ec_monte_carlo(users, power, fp, FadingConfig{num_users, rho}, mc,
                                  2.0 / num_users);
  const auto weak = [&](int r) -> const EcEstimate& { return est[r - 1]; };
  const auto strong = [&](int r) -> const EcEstimate& { return est[num_users - 1 + r - 2]; };

  BestPairing result;
  for (auto& matching : enumerate_matchings(num_users, power)) {
    TotalEc total;
    for (const auto& pair : matching.pairs) {
      total.value += weak(pair.weak_rank).value + strong(pair.strong_rank).value;
      total.ci_half_width +=
          weak(pair.weak_rank).ci_half_width + strong(pair.strong_rank).ci_half_width;
    }
    result.ranking.emplace_back(std::move(matching), total);
  }

  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& [ps, total] : result.ranking) best_value = std::max(best_value, total.value);
  const double tie_floor = best_value - 1e-12 * std::abs(best_value);
  for (const auto& [ps, total] : result.ranking) {
    if (total.value >= tie_floor) {  // ranking is in lexicographic order here
      result.pairing = ps;
      result.total = total;
      break;
    }
  }
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [](const auto& a, const auto& b) { return a.second.value > b.second.value; });
  return result;
}

}  // namespace nomaec
