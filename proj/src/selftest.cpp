#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "nomaec/harness.hpp"
#include "nomaec/special_functions.hpp"

namespace nomaec {
namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

std::vector<Check> checks() {
  const FblParams fp{400, 1e-5};
  const PairPower p{};
  const double rho15 = std::pow(10.0, 1.5);
  return {
      {"gaussian_q_round_trip",
       [] {
         for (double x = -6.0; x <= 6.0; x += 0.25) {
           if (std::abs(gaussian_q_inv(gaussian_q(x)) - x) > 1e-8) return false;
         }
         return true;
       }},
      {"hyp_u_reduces_to_reciprocal",
       [] {
         for (double z : {0.1, 1.0, 10.0, 100.0}) {
           if (std::abs(hyp_u(1.0, 2.0, z) * z - 1.0) > 1e-10) return false;
         }
         return true;
       }},
      {"hyp_u_matches_e1",
       [] {
         return std::abs(hyp_u(1.0, 1.0, 1.0) - std::numbers::e * -exp_integral_ei(-1.0)) < 1e-9;
       }},
      {"ordered_pdf_normalizes",
       [] {
         const FadingConfig cfg{10, 3.0};
         for (int i = 1; i <= cfg.num_users; ++i) {
           const auto r = integrate_half_line([&](double g) { return ordered_pdf(i, cfg, g); },
                                               cfg.mean_snr, cfg.mean_snr / 100.0, QuadratureSettings{});
           if (std::abs(r.value - 1.0) > 1e-8) return false;
         }
         return true;
       }},
      {"ec_zero_at_unit_error_probability",
       [&] {
         const FblParams one{400, 1.0};
         return ec_strong_closed(8, 10, p, one, 0.01, rho15).value == 0.0 &&
                ec_weak_closed(2, 10, p, one, 0.01, rho15).value == 0.0 &&
                ec_strong_asymptote(one, 0.01) == 0.0 && ec_weak_asymptote(p, one, 0.01) == 0.0;
       }},
      {"ec_below_cap",
       [&] {
         const double cap = ec_cap(fp, 0.01);
         return ec_strong_closed(8, 10, p, fp, 0.01, 1e4).value <= cap &&
                ec_weak_closed(2, 10, p, fp, 0.01, 1e4).value <= cap;
       }},
      {"ec_nonincreasing_in_theta",
       [&] {
         double prev_s = INFINITY, prev_w = INFINITY;
         for (double theta : {0.001, 0.01, 0.1, 1.0}) {
           const double s = ec_strong_closed(8, 10, p, fp, theta, rho15).value;
           const double w = ec_weak_closed(2, 10, p, fp, theta, rho15).value;
           if (s > prev_s + 1e-9 || w > prev_w + 1e-9) return false;
           prev_s = s;
           prev_w = w;
         }
         return true;
       }},
      {"monte_carlo_reproducible",
       [&] {
         MonteCarloOptions mc;
         mc.n_samples = 20000;
         mc.block_size = 4096;
         const UserQoS user{0.01, 8, UserRole::strong};
         mc.threads = 1;
         const double a = ec_monte_carlo(user, p, fp, FadingConfig{10, rho15}, mc).value;
         mc.threads = 3;
         const double b = ec_monte_carlo(user, p, fp, FadingConfig{10, rho15}, mc).value;
         return a == b;
       }},
      {"matching_count",
       [] { return enumerate_matchings(6).size() == 15 && enumerate_matchings(8).size() == 105; }},
      {"delay_violation_above_floor",
       [&] {
         const FblParams f6{400, 1e-6};
         const double floor = delay_floor(f6, 400.0);
         for (double theta : {0.001, 0.01, 0.1, 1.0}) {
           const auto ec = ec_strong_closed(8, 10, p, f6, theta, 100.0);
           if (delay_violation(ec, theta, DelayTarget{400.0, 1.0}) < floor) return false;
         }
         return true;
       }},
      {"csv_numbers_round_trip",
       [] {
         for (double x : {0.1, 2.878231366242557, 1e-300, 6.02214076e23, -0.0}) {
           const std::string s = format_number(x);
           double y = 1.0;
           std::from_chars(s.data(), s.data() + s.size(), y);
           if (std::signbit(x) != std::signbit(y) || x != y) return false;
         }
         return true;
       }},
  };
}

}  // namespace

bool run_selftest(std::ostream& os) {
  bool all = true;
  for (const auto& check : checks()) {
    bool ok = false;
    std::string detail;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      detail = std::string(" (") + error_code(e) + ": " + e.what() + ")";
    }
    os << (ok ? "PASS " : "FAIL ") << check.name << detail << '\n';
    all = all && ok;
  }
  return all;
}

}  // namespace nomaec
