// nomaec: figure data, parameter sweeps and pairing search from the command line.
//
// Errors go to stderr as a single JSON line {"error": <code>, "message": ...};
// the exit status is 2 for usage errors and 1 for everything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nomaec/harness.hpp"

namespace {

int fail(const std::string& code, const std::string& message) {
  std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << '\n';
  return code == "usage" ? 2 : 1;
}

void write_pairing_csv(const std::vector<std::pair<nomaec::PairingSet, nomaec::TotalEc>>& rows,
                       std::ostream& os) {
  os << "rank,pairing,T_ec,T_ec_ci\n";
  int rank = 1;
  for (const auto& [ps, total] : rows) {
    os << rank++ << ",\"" << ps.to_string() << "\"," << nomaec::format_number(total.value) << ','
       << nomaec::format_number(total.ci_half_width) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective capacity of finite-blocklength NOMA links"};
  app.require_subcommand(1);

  int fig = 0;
  std::vector<std::string> sets;
  std::string fig_out;
  auto* figure = app.add_subcommand("figure", "Write the data of one figure (2..10) as CSV");
  figure->add_option("id", fig, "Figure number")->required();
  figure->add_option("--set", sets, "Override a configuration field, key=value");
  figure->add_option("--out", fig_out, "Output path (default figure<id>.csv)");

  std::string config_path, axis, grid, evaluators, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Evaluate EC over a one-dimensional grid");
  sweep->add_option("--config", config_path, "JSON scenario file")->required();
  sweep->add_option("--axis", axis, "rho_db, theta or epsilon")->required();
  sweep->add_option("--grid", grid, "a,b,c | start:stop:step | log:start:stop:count")->required();
  sweep->add_option("--evaluators", evaluators, "Subset of mc,closed,high_snr,asymptotic,quadrature")
      ->required();
  sweep->add_option("--out", sweep_out, "Output CSV path")->required();

  int num_users = 0;
  double rho_db = 0.0, theta = 0.01, epsilon = 1e-5, alpha_strong = 0.2;
  int blocklength = 400;
  std::int64_t samples = 1'000'000;
  std::string seed_text, pairing_out;
  bool exhaustive = false;
  auto* pairing = app.add_subcommand(
      "pairing", "Total EC of the distinct-channel pairing, or of every pairing with --exhaustive");
  pairing->add_option("--V", num_users, "Number of users (even)")->required();
  pairing->add_option("--rho-db", rho_db, "Transmit SNR in dB")->required();
  pairing->add_flag("--exhaustive", exhaustive, "Rank all perfect matchings");
  pairing->add_option("--theta", theta, "Delay exponent of every user")->capture_default_str();
  pairing->add_option("--n", blocklength, "Blocklength")->capture_default_str();
  pairing->add_option("--epsilon", epsilon, "Decoding error probability")->capture_default_str();
  pairing->add_option("--alpha-strong", alpha_strong, "Strong-user power share")
      ->capture_default_str();
  pairing->add_option("--samples", samples, "Monte-Carlo samples")->capture_default_str();
  pairing->add_option("--seed", seed_text, "Seed (default $NOMAEC_SEED or 1)");
  pairing->add_option("--out", pairing_out, "Output CSV path (default stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (figure->parsed()) {
      nlohmann::json overrides = nlohmann::json::object();
      for (const auto& s : sets) nomaec::apply_override(overrides, s);
      const std::string path = fig_out.empty() ? "figure" + std::to_string(fig) + ".csv" : fig_out;
      nomaec::run_figure(fig, overrides, path);
      std::cout << path << '\n';
      return 0;
    }
    if (sweep->parsed()) {
      const nomaec::SystemConfig cfg = nomaec::load_config(config_path);
      nomaec::SweepSpec spec;
      spec.axis = nomaec::parse_axis(axis);
      spec.grid = nomaec::parse_grid(grid);
      spec.evaluators = nomaec::parse_evaluators(evaluators);
      spec.output_path = sweep_out;
      nomaec::run_sweep(cfg, spec);
      std::cout << sweep_out << '\n';
      return 0;
    }
    if (pairing->parsed()) {
      nlohmann::json j = {{"V", num_users}, {"t", 1}, {"u", num_users}, {"rho_db", rho_db},
                          {"theta", theta}, {"n", blocklength}, {"epsilon", epsilon},
                          {"alpha_strong", alpha_strong}, {"alpha_weak", 1.0 - alpha_strong},
                          {"n_samples", samples}};
      if (!seed_text.empty()) nomaec::apply_override(j, "seed=" + seed_text);
      const nomaec::SystemConfig cfg = nomaec::config_from_json(j);
      cfg.validate();
      nomaec::MonteCarloOptions mc;
      mc.n_samples = cfg.n_samples;
      mc.seed = cfg.seed;

      std::vector<std::pair<nomaec::PairingSet, nomaec::TotalEc>> rows;
      if (exhaustive) {
        rows = nomaec::best_pairing(cfg.V, cfg.fbl(), theta, cfg.rho_linear(), mc, cfg.power())
                   .ranking;
      } else {
        nomaec::PairingSet ps;
        for (int k = 1; k <= cfg.V / 2; ++k) {
          ps.pairs.push_back(nomaec::NomaPair{k, cfg.V + 1 - k, cfg.power()});
        }
        rows.emplace_back(ps, nomaec::total_ec(ps, cfg.V, cfg.fbl(), theta, cfg.rho_linear(), mc));
      }
      if (pairing_out.empty()) {
        write_pairing_csv(rows, std::cout);
      } else {
        std::ofstream out(pairing_out, std::ios::binary);
        if (!out) return fail("io", "cannot open '" + pairing_out + "' for writing");
        write_pairing_csv(rows, out);
      }
      return 0;
    }
    if (selftest->parsed()) {
      if (nomaec::run_selftest(std::cout)) return 0;
      return fail("selftest", "one or more invariant checks failed");
    }
  } catch (const std::exception& e) {
    return fail(nomaec::error_code(e), e.what());
  }
  return fail("usage", "no subcommand");
}
