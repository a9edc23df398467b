#pragma once

// Multi-pair NOMA: V users split into V/2 two-user pairs that share the
// channel by time division, each pair getting a 2/V fraction of the time.

#include <compare>
#include <string>
#include <vector>

#include "nomaec/effective_capacity.hpp"

namespace nomaec {

struct NomaPair {
  int weak_rank = 1;
  int strong_rank = 2;
  PairPower power{};

  auto operator<=>(const NomaPair& other) const {
    if (auto c = weak_rank <=> other.weak_rank; c != 0) return c;
    return strong_rank <=> other.strong_rank;
  }
  bool operator==(const NomaPair& other) const {
    return weak_rank == other.weak_rank && strong_rank == other.strong_rank;
  }
};

struct PairingSet {
  std::vector<NomaPair> pairs;

  // Throws DomainError unless the pairs form a perfect matching of 1..V with
  // weak_rank < strong_rank in every pair.
  void validate(int num_users) const;
  // Pairs sorted by weak rank; the canonical form used for ordering and ties.
  PairingSet canonical() const;
  std::string to_string() const;  // "{(1,6),(2,5),(3,4)}"
};

PairingSet make_pairing(std::initializer_list<std::pair<int, int>> pairs,
                        const PairPower& power = {});

struct PairRates {
  double weak;
  double strong;
};

// (2/V) * fbl_rate for each member of the pair.
PairRates pair_rates(const NomaPair& pair, double gamma_weak, double gamma_strong, int num_users,
                     const FblParams& fp);

struct PairEc {
  EcEstimate weak;
  EcEstimate strong;
};

PairEc pair_ec(const NomaPair& pair, int num_users, const FblParams& fp, double theta_weak,
               double theta_strong, double rho, const MonteCarloOptions& mc);

// Closed-form counterpart of pair_ec. Scaling every rate by 2/V is the same
// as evaluating the two-user expressions at theta' = (2/V) theta and scaling
// the result by 2/V.
PairEc pair_ec_closed(const NomaPair& pair, int num_users, const FblParams& fp, double theta_weak,
                      double theta_strong, double rho);

struct TotalEc {
  double value = 0.0;
  // Sum of the per-user half-widths: a bound that holds whatever the
  // correlation between users sharing the same channel draws.
  double ci_half_width = 0.0;
};

// Sum of weak and strong EC over all pairs. Every call with the same seed
// sees the same channel draws, so different pairing sets are compared under
// common random numbers.
TotalEc total_ec(const PairingSet& ps, int num_users, const FblParams& fp, double theta,
                 double rho, const MonteCarloOptions& mc);

// All perfect matchings of 1..V in lexicographic order of their canonical form;
// there are (V-1)!! of them.
std::vector<PairingSet> enumerate_matchings(int num_users, const PairPower& power = {});

struct BestPairing {
  PairingSet pairing;
  TotalEc total;
  std::vector<std::pair<PairingSet, TotalEc>> ranking;  // every matching, best first
};

// Exhaustive search over all matchings for the largest total EC (V even,
// V <= 12). Totals within a relative 1e-12 of each other count as ties and go
// to the lexicographically smallest matching.
BestPairing best_pairing(int num_users, const FblParams& fp, double theta, double rho,
                         const MonteCarloOptions& mc, const PairPower& power = {});

}  // namespace nomaec
