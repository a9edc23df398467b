#pragma once

// Scenario configuration, parameter sweeps and figure-data generation.
//
// The configuration is the only place where SNR is given in dB; everything it
// hands to the core is linear. Output is CSV with every number written in the
// shortest scientific form that parses back to the same double.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nomaec/delay_analysis.hpp"
#include "nomaec/effective_capacity.hpp"
#include "nomaec/pairing.hpp"

namespace nomaec {

// Failure at the harness boundary. `code` is a short machine-readable tag
// ("config", "io", "domain", "convergence", "numerical", ...).
class HarnessError : public std::runtime_error {
 public:
  HarnessError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Tag for any exception escaping the library, used in CLI error lines.
std::string error_code(const std::exception& e);

// Seed used when a configuration does not name one: $NOMAEC_SEED if set,
// otherwise 1. A value that is not a non-negative integer is a config error.
std::uint64_t default_seed();

struct SystemConfig {
  int V = 10;
  int t = 2;  // weak-user rank
  int u = 8;  // strong-user rank
  double alpha_weak = 0.8;
  double alpha_strong = 0.2;
  int n = 400;
  double epsilon = 1e-5;
  double theta_weak = 0.01;
  double theta_strong = 0.01;
  double rho_db = 15.0;
  std::uint64_t seed = default_seed();
  std::int64_t n_samples = 1'000'000;
  double d_max = 400.0;
  double nonempty_prob = 1.0;
  std::vector<std::pair<int, int>> pairs;  // optional multi-pair schedule

  void validate() const;  // throws HarnessError("config", ...)

  PairPower power() const { return PairPower{alpha_weak, alpha_strong}; }
  FblParams fbl() const { return FblParams{n, epsilon}; }
  double rho_linear() const;
  DelayTarget delay() const { return DelayTarget{d_max, nonempty_prob}; }
};

// Unknown keys and type mismatches are rejected. Keys absent from `j` keep
// their value in `base`, so the same call applies partial overrides.
SystemConfig config_from_json(const nlohmann::json& j, SystemConfig base = {});
nlohmann::json config_to_json(const SystemConfig& cfg);
SystemConfig load_config(const std::string& path);

// "key=value" with value parsed as JSON when possible, as a string otherwise.
void apply_override(nlohmann::json& overrides, std::string_view assignment);

enum class SweepAxis { rho_db, theta, epsilon };
enum class Evaluator { mc, closed, high_snr, asymptotic, quadrature };

SweepAxis parse_axis(std::string_view name);
const char* to_string(SweepAxis axis);
Evaluator parse_evaluator(std::string_view name);
const char* to_string(Evaluator ev);
std::vector<Evaluator> parse_evaluators(std::string_view list);  // "mc,closed"

// Grid syntax: "1,2,5" | "start:stop:step" | "log:start:stop:count".
// The result must be strictly monotone.
std::vector<double> parse_grid(std::string_view spec);

struct SweepSpec {
  SweepAxis axis = SweepAxis::rho_db;
  std::vector<double> grid;
  std::vector<Evaluator> evaluators;
  std::string output_path;

  void validate() const;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_number(double x);
void write_csv(const Table& table, std::ostream& os);
std::string to_csv(const Table& table);
void write_csv_file(const Table& table, const std::string& path);

// Columns: the axis, then weak_<ev> and strong_<ev> for every evaluator
// (plus <role>_mc_ci for Monte Carlo). Grid point k uses the Monte-Carlo seed
// derive_seed(cfg.seed, k); points run concurrently, rows stay in grid order.
Table sweep_table(const SystemConfig& cfg, const SweepSpec& spec);
void run_sweep(const SystemConfig& cfg, const SweepSpec& spec);

// Baked-in parameters of figures 2..10 with `overrides` (a JSON object of
// SystemConfig fields) applied on top.
SystemConfig figure_config(int fig, const nlohmann::json& overrides = nlohmann::json::object());
Table figure_table(int fig, const nlohmann::json& overrides = nlohmann::json::object());
void run_figure(int fig, const nlohmann::json& overrides, const std::string& path);

// Runs the built-in invariant checks, one line per check. True if all pass.
bool run_selftest(std::ostream& os);

}  // namespace nomaec
