#include "nomaec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "nomaec/errors.hpp"

namespace nomaec {
namespace {

using nlohmann::json;

double parse_double(std::string_view s, const char* what) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw HarnessError("config", std::string(what) + ": cannot parse number '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Short label for a series parameter value: "15", "0.001".
std::string label(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class Int>
Int json_integer(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<Int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<Int>(d);
  }
  throw HarnessError("config", "'" + key + "' must be an integer");
}

double json_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw HarnessError("config", "'" + key + "' must be a number");
  return v.get<double>();
}

enum class Measure { ec, violation };

struct GridPlan {
  SweepAxis axis = SweepAxis::rho_db;
  std::vector<double> grid;
  std::vector<Evaluator> evaluators;
  std::vector<UserRole> roles{UserRole::weak, UserRole::strong};
  Measure measure = Measure::ec;
  std::optional<SweepAxis> series_axis;
  std::vector<double> series_values;
  bool floor_column = false;
};

void set_axis(SystemConfig& cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::rho_db:
      cfg.rho_db = value;
      break;
    case SweepAxis::theta:
      cfg.theta_weak = value;
      cfg.theta_strong = value;
      break;
    case SweepAxis::epsilon:
      cfg.epsilon = value;
      break;
  }
}

std::string series_suffix(SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::rho_db:
      return "_rho" + label(value) + "dB";
    case SweepAxis::theta:
      return "_theta" + label(value);
    case SweepAxis::epsilon:
      return "_eps" + label(value);
  }
  return {};
}

std::vector<std::string> plan_header(const GridPlan& plan) {
  std::vector<std::string> header{to_string(plan.axis)};
  if (plan.floor_column) header.emplace_back("floor");
  const std::size_t n_series = plan.series_axis ? plan.series_values.size() : 1;
  for (std::size_t s = 0; s < n_series; ++s) {
    const std::string suffix =
        plan.series_axis ? series_suffix(*plan.series_axis, plan.series_values[s]) : "";
    for (const auto role : plan.roles) {
      const std::string stem =
          std::string(to_string(role)) + (plan.measure == Measure::violation ? "_viol_" : "_");
      for (const auto ev : plan.evaluators) {
        header.push_back(stem + to_string(ev) + suffix);
        if (ev == Evaluator::mc) header.push_back(stem + "mc_ci" + suffix);
      }
    }
  }
  return header;
}

// Cells of one (grid point, series) combination, in plan_header order.
std::vector<double> evaluate_cells(const SystemConfig& c, const GridPlan& plan,
                                   std::uint64_t seed) {
  c.validate();
  const PairPower p = c.power();
  const FblParams fp = c.fbl();
  const double rho = c.rho_linear();
  const auto theta_of = [&](UserRole r) { return r == UserRole::weak ? c.theta_weak : c.theta_strong; };
  const auto rank_of = [&](UserRole r) { return r == UserRole::weak ? c.t : c.u; };

  std::vector<EcEstimate> mc;
  if (std::find(plan.evaluators.begin(), plan.evaluators.end(), Evaluator::mc) !=
      plan.evaluators.end()) {
    std::vector<UserQoS> users;
    for (const auto role : plan.roles) users.push_back({theta_of(role), rank_of(role), role});
    MonteCarloOptions opts;
    opts.n_samples = c.n_samples;
    opts.seed = seed;
    opts.threads = 1;  // grid points already run concurrently
    mc = ec_monte_carlo(users, p, fp, FadingConfig{c.V, rho}, opts);
  }

  std::vector<double> cells;
  for (std::size_t ri = 0; ri < plan.roles.size(); ++ri) {
    const UserRole role = plan.roles[ri];
    const bool weak = role == UserRole::weak;
    const double theta = theta_of(role);
    const int rank = rank_of(role);
    for (const auto ev : plan.evaluators) {
      EcEstimate est;
      switch (ev) {
        case Evaluator::mc:
          est = mc[ri];
          break;
        case Evaluator::closed:
          est = weak ? ec_weak_closed(rank, c.V, p, fp, theta, rho)
                     : ec_strong_closed(rank, c.V, p, fp, theta, rho);
          break;
        case Evaluator::high_snr:
          est = weak ? ec_weak_high_snr(rank, c.V, p, fp, theta, rho)
                     : ec_strong_high_snr(rank, c.V, p, fp, theta, rho);
          break;
        case Evaluator::asymptotic:
          est.method = EcMethod::asymptotic;
          est.value = weak ? ec_weak_asymptote(p, fp, theta) : ec_strong_asymptote(fp, theta);
          break;
        case Evaluator::quadrature:
          est = ec_quadrature(UserQoS{theta, rank, role}, c.V, p, fp, rho, IntegrandForm::exact);
          break;
      }
      if (plan.measure == Measure::ec) {
        cells.push_back(est.value);
        if (ev == Evaluator::mc) cells.push_back(est.ci_half_width);
      } else {
        const DelayTarget target = c.delay();
        const double viol = delay_violation(est, theta, target);
        cells.push_back(viol);
        // Delta method through exp(-theta D EC).
        if (ev == Evaluator::mc) cells.push_back(theta * target.d_max * viol * est.ci_half_width);
      }
    }
  }
  return cells;
}

struct TaskFailure {
  std::string code;
  std::string message;
};

// Runs fn(task) for task in [0, n_tasks) on a thread pool. The failure of the
// lowest-numbered task is rethrown, so errors are reported deterministically.
template <class Fn>
void run_tasks(std::size_t n_tasks, Fn&& fn, const std::vector<std::string>& task_names) {
  std::vector<std::optional<TaskFailure>> failures(n_tasks);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t k = next++; k < n_tasks; k = next++) {
      try {
        fn(k);
      } catch (const std::exception& e) {
        failures[k] = TaskFailure{error_code(e), e.what()};
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads = std::min(hw, n_tasks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (std::size_t k = 0; k < n_tasks; ++k) {
    if (failures[k]) {
      throw HarnessError(failures[k]->code,
                         "evaluation failed at " + task_names[k] + ": " + failures[k]->message);
    }
  }
}

Table evaluate_plan(const SystemConfig& base, const GridPlan& plan) {
  const std::size_t n_points = plan.grid.size();
  const std::size_t n_series = plan.series_axis ? plan.series_values.size() : 1;
  const std::size_t n_tasks = n_points * n_series;

  std::vector<SystemConfig> configs(n_tasks, base);
  std::vector<std::string> names(n_tasks);
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t s = 0; s < n_series; ++s) {
      auto& c = configs[i * n_series + s];
      std::string name = std::string(to_string(plan.axis)) + "=" + label(plan.grid[i]);
      if (plan.series_axis) {
        set_axis(c, *plan.series_axis, plan.series_values[s]);
        name += std::string(", ") + to_string(*plan.series_axis) + "=" + label(plan.series_values[s]);
      }
      set_axis(c, plan.axis, plan.grid[i]);
      names[i * n_series + s] = std::move(name);
    }
  }

  std::vector<std::vector<double>> cells(n_tasks);
  run_tasks(
      n_tasks,
      [&](std::size_t k) {
        cells[k] = evaluate_cells(configs[k], plan, derive_seed(base.seed, k / n_series));
      },
      names);

  Table table;
  table.header = plan_header(plan);
  for (std::size_t i = 0; i < n_points; ++i) {
    std::vector<double> row{plan.grid[i]};
    if (plan.floor_column) {
      const auto& c = configs[i * n_series];
      row.push_back(delay_floor(c.fbl(), c.d_max));
    }
    for (std::size_t s = 0; s < n_series; ++s) {
      const auto& part = cells[i * n_series + s];
      row.insert(row.end(), part.begin(), part.end());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string pairing_column(const PairingSet& ps) {
  std::string name = "T";
  for (const auto& pair : ps.pairs) {
    name += "_" + std::to_string(pair.weak_rank) + std::to_string(pair.strong_rank);
  }
  return name;
}

Table pairing_figure(const SystemConfig& base, const std::vector<double>& grid) {
  if (base.theta_weak != base.theta_strong) {
    throw HarnessError("config", "figure 3 needs theta_weak == theta_strong");
  }
  const PairPower power = base.power();
  std::vector<PairingSet> sets = {
      make_pairing({{1, 6}, {2, 5}, {3, 4}}, power),
      make_pairing({{1, 4}, {2, 5}, {3, 6}}, power),
      make_pairing({{1, 2}, {3, 4}, {5, 6}}, power),
  };
  if (base.V != 6) sets.clear();
  if (!base.pairs.empty()) {
    PairingSet custom;
    for (const auto& [t, u] : base.pairs) custom.pairs.push_back(NomaPair{t, u, power});
    sets.push_back(custom.canonical());
  }
  if (sets.empty()) {
    throw HarnessError("config", "figure 3 with V != 6 needs an explicit 'pairs' schedule");
  }

  Table table;
  table.header.emplace_back("rho_db");
  for (const auto& ps : sets) {
    table.header.push_back(pairing_column(ps));
    table.header.push_back(pairing_column(ps) + "_ci");
  }

  std::vector<std::vector<double>> cells(grid.size());
  std::vector<std::string> names;
  for (double x : grid) names.push_back("rho_db=" + label(x));
  run_tasks(
      grid.size(),
      [&](std::size_t k) {
        SystemConfig c = base;
        c.rho_db = grid[k];
        c.validate();
        MonteCarloOptions opts;
        opts.n_samples = c.n_samples;
        opts.seed = derive_seed(base.seed, k);
        opts.threads = 1;
        // Shared seed: every set at this point is priced on the same draws.
        for (const auto& ps : sets) {
          const TotalEc total = total_ec(ps, c.V, c.fbl(), c.theta_weak, c.rho_linear(), opts);
          cells[k].push_back(total.value);
          cells[k].push_back(total.ci_half_width);
        }
      },
      names);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid[k]};
    row.insert(row.end(), cells[k].begin(), cells[k].end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Error-probability grid shared by the figures plotted against epsilon.
const std::vector<double> kEpsilonGrid = {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2,
                                          0.05, 0.1,  0.2,  0.3,  0.5,  0.7,  0.9, 0.99};

}  // namespace

std::string error_code(const std::exception& e) {
  if (const auto* h = dynamic_cast<const HarnessError*>(&e)) return h->code();
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return "config";
  return "internal";
}

std::uint64_t default_seed() {
  const char* env = std::getenv("NOMAEC_SEED");
  if (env == nullptr || *env == '\0') return 1;
  const std::string_view s(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw HarnessError("config", "NOMAEC_SEED must be a non-negative integer, got '" +
                                     std::string(s) + "'");
  }
  return seed;
}

double SystemConfig::rho_linear() const { return std::pow(10.0, rho_db / 10.0); }

void SystemConfig::validate() const {
  try {
    FadingConfig{V, rho_linear()}.validate();
    power().validate();
    fbl().validate();
    if (!(V >= 2)) throw DomainError("V must be at least 2");
    if (!(1 <= t && t < u && u <= V)) throw DomainError("need 1 <= t < u <= V");
    if (!(theta_weak > 0.0) || !(theta_strong > 0.0) || !std::isfinite(theta_weak) ||
        !std::isfinite(theta_strong)) {
      throw DomainError("theta must be positive and finite");
    }
    if (!std::isfinite(rho_db)) throw DomainError("rho_db must be finite");
    if (n_samples < 1) throw DomainError("n_samples must be positive");
    delay().validate();
    if (!pairs.empty()) {
      PairingSet ps;
      for (const auto& [a, b] : pairs) ps.pairs.push_back(NomaPair{a, b, power()});
      ps.validate(V);
    }
  } catch (const DomainError& e) {
    throw HarnessError("config", std::string("invalid configuration: ") + e.what());
  }
}

SystemConfig config_from_json(const json& j, SystemConfig base) {
  if (!j.is_object()) throw HarnessError("config", "configuration must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "V") base.V = json_integer<int>(v, key);
    else if (key == "t") base.t = json_integer<int>(v, key);
    else if (key == "u") base.u = json_integer<int>(v, key);
    else if (key == "alpha_weak") base.alpha_weak = json_number(v, key);
    else if (key == "alpha_strong") base.alpha_strong = json_number(v, key);
    else if (key == "n") base.n = json_integer<int>(v, key);
    else if (key == "epsilon") base.epsilon = json_number(v, key);
    else if (key == "theta_weak") base.theta_weak = json_number(v, key);
    else if (key == "theta_strong") base.theta_strong = json_number(v, key);
    else if (key == "theta") base.theta_weak = base.theta_strong = json_number(v, key);
    else if (key == "rho_db") base.rho_db = json_number(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw HarnessError("config", "'seed' must be a non-negative integer");
      }
      base.seed = v.get<std::uint64_t>();
    }
    else if (key == "n_samples") base.n_samples = json_integer<std::int64_t>(v, key);
    else if (key == "d_max") base.d_max = json_number(v, key);
    else if (key == "nonempty_prob") base.nonempty_prob = json_number(v, key);
    else if (key == "pairs") {
      if (!v.is_array()) throw HarnessError("config", "'pairs' must be an array of [t, u]");
      base.pairs.clear();
      for (const auto& item : v) {
        if (!item.is_array() || item.size() != 2) {
          throw HarnessError("config", "'pairs' entries must be [t, u]");
        }
        base.pairs.emplace_back(json_integer<int>(item[0], "pairs"),
                                json_integer<int>(item[1], "pairs"));
      }
    } else {
      throw HarnessError("config", "unknown configuration key '" + key + "'");
    }
  }
  return base;
}

json config_to_json(const SystemConfig& cfg) {
  json pairs = json::array();
  for (const auto& [t, u] : cfg.pairs) pairs.push_back({t, u});
  return json{{"V", cfg.V},
              {"t", cfg.t},
              {"u", cfg.u},
              {"alpha_weak", cfg.alpha_weak},
              {"alpha_strong", cfg.alpha_strong},
              {"n", cfg.n},
              {"epsilon", cfg.epsilon},
              {"theta_weak", cfg.theta_weak},
              {"theta_strong", cfg.theta_strong},
              {"rho_db", cfg.rho_db},
              {"seed", cfg.seed},
              {"n_samples", cfg.n_samples},
              {"d_max", cfg.d_max},
              {"nonempty_prob", cfg.nonempty_prob},
              {"pairs", pairs}};
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw HarnessError("io", "cannot open configuration file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw HarnessError("config", "'" + path + "' is not valid JSON: " + e.what());
  }
  SystemConfig cfg = config_from_json(j);
  cfg.validate();
  return cfg;
}

void apply_override(json& overrides, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw HarnessError("config", "override must look like key=value, got '" +
                                     std::string(assignment) + "'");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  const std::string value(trim(assignment.substr(eq + 1)));
  const json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  overrides[key] = parsed.is_discarded() ? json(value) : parsed;
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "rho_db") return SweepAxis::rho_db;
  if (name == "theta") return SweepAxis::theta;
  if (name == "epsilon") return SweepAxis::epsilon;
  throw HarnessError("config", "unknown sweep axis '" + std::string(name) +
                                   "' (expected rho_db, theta or epsilon)");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::rho_db:
      return "rho_db";
    case SweepAxis::theta:
      return "theta";
    case SweepAxis::epsilon:
      return "epsilon";
  }
  return "?";
}

Evaluator parse_evaluator(std::string_view name) {
  if (name == "mc") return Evaluator::mc;
  if (name == "closed") return Evaluator::closed;
  if (name == "high_snr") return Evaluator::high_snr;
  if (name == "asymptotic") return Evaluator::asymptotic;
  if (name == "quadrature") return Evaluator::quadrature;
  throw HarnessError("config", "unknown evaluator '" + std::string(name) + "'");
}

const char* to_string(Evaluator ev) {
  switch (ev) {
    case Evaluator::mc:
      return "mc";
    case Evaluator::closed:
      return "closed";
    case Evaluator::high_snr:
      return "high_snr";
    case Evaluator::asymptotic:
      return "asymptotic";
    case Evaluator::quadrature:
      return "quadrature";
  }
  return "?";
}

std::vector<Evaluator> parse_evaluators(std::string_view list) {
  std::vector<Evaluator> out;
  for (const auto token : split(list, ',')) {
    const Evaluator ev = parse_evaluator(trim(token));
    if (std::find(out.begin(), out.end(), ev) != out.end()) {
      throw HarnessError("config", "evaluator '" + std::string(trim(token)) + "' listed twice");
    }
    out.push_back(ev);
  }
  return out;
}

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string_view::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() == 4 && trim(parts[0]) == "log") {
      const double a = parse_double(trim(parts[1]), "grid");
      const double b = parse_double(trim(parts[2]), "grid");
      const double count = parse_double(trim(parts[3]), "grid");
      if (!(a > 0.0 && b > 0.0)) throw HarnessError("config", "log grid needs positive bounds");
      if (!(count >= 1.0 && count == std::floor(count) && count <= 1e6)) {
        throw HarnessError("config", "log grid needs an integer point count >= 1");
      }
      const auto m = static_cast<std::size_t>(count);
      for (std::size_t k = 0; k < m; ++k) {
        const double f = m == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(m - 1);
        grid.push_back(k + 1 == m && m > 1 ? b : a * std::pow(b / a, f));
      }
    } else if (parts.size() == 3) {
      const double start = parse_double(trim(parts[0]), "grid");
      const double stop = parse_double(trim(parts[1]), "grid");
      const double step = parse_double(trim(parts[2]), "grid");
      if (step == 0.0 || (stop - start) * step < 0.0) {
        throw HarnessError("config", "range grid step must be nonzero and point from start to stop");
      }
      const double span = (stop - start) / step;
      if (span > 1e6) throw HarnessError("config", "range grid has too many points");
      const auto m = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
      for (std::size_t k = 0; k < m; ++k) grid.push_back(start + static_cast<double>(k) * step);
    } else {
      throw HarnessError("config", "grid must be a list, start:stop:step or log:start:stop:count");
    }
  } else {
    for (const auto token : split(spec, ',')) grid.push_back(parse_double(trim(token), "grid"));
  }

  const bool up = grid.size() < 2 || grid[1] > grid[0];
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (up ? !(grid[k] > grid[k - 1]) : !(grid[k] < grid[k - 1])) {
      throw HarnessError("config", "grid must be strictly monotone");
    }
  }
  return grid;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw HarnessError("config", "sweep grid is empty");
  if (evaluators.empty()) throw HarnessError("config", "sweep needs at least one evaluator");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const bool up = grid[1] > grid[0];
    if (up ? !(grid[k] > grid[k - 1]) : !(grid[k] < grid[k - 1])) {
      throw HarnessError("config", "grid must be strictly monotone");
    }
  }
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    os << (c ? "," : "") << table.header[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
}

std::string to_csv(const Table& table) {
  std::ostringstream os;
  write_csv(table, os);
  return os.str();
}

void write_csv_file(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw HarnessError("io", "cannot open '" + path + "' for writing");
  write_csv(table, out);
  out.flush();
  if (!out) throw HarnessError("io", "failed writing '" + path + "'");
}

Table sweep_table(const SystemConfig& cfg, const SweepSpec& spec) {
  spec.validate();
  GridPlan plan;
  plan.axis = spec.axis;
  plan.grid = spec.grid;
  plan.evaluators = spec.evaluators;
  return evaluate_plan(cfg, plan);
}

void run_sweep(const SystemConfig& cfg, const SweepSpec& spec) {
  if (spec.output_path.empty()) throw HarnessError("config", "sweep needs an output path");
  write_csv_file(sweep_table(cfg, spec), spec.output_path);
}

SystemConfig figure_config(int fig, const json& overrides) {
  SystemConfig cfg;
  switch (fig) {
    case 2:
      break;
    case 3:
      cfg.V = 6;
      cfg.t = 1;
      cfg.u = 6;
      break;
    case 4:
      cfg.epsilon = 1e-6;
      break;
    case 5:
    case 6:
      break;
    case 7:
    case 8:
      cfg.epsilon = 1e-6;
      cfg.d_max = 400.0;
      cfg.rho_db = 20.0;
      break;
    case 9:
    case 10:
      cfg.n = 100;
      cfg.d_max = 100.0;
      cfg.rho_db = 20.0;
      break;
    default:
      throw HarnessError("usage", "unknown figure " + std::to_string(fig) + " (expected 2..10)");
  }
  cfg = config_from_json(overrides, cfg);
  cfg.validate();
  return cfg;
}

Table figure_table(int fig, const json& overrides) {
  const SystemConfig cfg = figure_config(fig, overrides);
  const auto overridden = [&](const char* key) {
    return overrides.contains(key) ||
           (std::string_view(key).starts_with("theta") && overrides.contains("theta"));
  };
  const auto series = [&](GridPlan& plan, SweepAxis axis, std::vector<double> values,
                          const char* key) {
    if (overridden(key)) return;  // an explicit value collapses the family to one curve
    plan.series_axis = axis;
    plan.series_values = std::move(values);
  };

  GridPlan plan;
  switch (fig) {
    case 2:
      plan.grid = parse_grid("0:40:2");
      plan.evaluators = {Evaluator::mc, Evaluator::closed, Evaluator::high_snr};
      return evaluate_plan(cfg, plan);
    case 3:
      return pairing_figure(cfg, parse_grid("0:40:2"));
    case 4:
      plan.axis = SweepAxis::theta;
      plan.grid = parse_grid("log:0.001:1:13");
      plan.evaluators = {Evaluator::mc, Evaluator::closed};
      series(plan, SweepAxis::rho_db, {15.0, 20.0}, "rho_db");
      return evaluate_plan(cfg, plan);
    case 5:
    case 6:
      plan.axis = SweepAxis::epsilon;
      plan.grid = kEpsilonGrid;
      plan.evaluators = {Evaluator::mc, Evaluator::closed};
      plan.roles = {fig == 5 ? UserRole::strong : UserRole::weak};
      series(plan, SweepAxis::rho_db, {5.0, 15.0, 25.0, 35.0}, "rho_db");
      return evaluate_plan(cfg, plan);
    case 7:
    case 8:
      plan.axis = SweepAxis::theta;
      plan.grid = parse_grid("log:0.001:1:20");
      plan.evaluators = {Evaluator::mc, Evaluator::closed};
      plan.roles = {fig == 7 ? UserRole::strong : UserRole::weak};
      plan.measure = Measure::violation;
      plan.floor_column = true;
      series(plan, SweepAxis::rho_db, {10.0, 20.0, 30.0}, "rho_db");
      return evaluate_plan(cfg, plan);
    case 9:
    case 10:
      plan.axis = SweepAxis::epsilon;
      plan.grid = kEpsilonGrid;
      plan.evaluators = {Evaluator::mc, Evaluator::closed};
      plan.roles = {fig == 9 ? UserRole::strong : UserRole::weak};
      plan.measure = Measure::violation;
      plan.floor_column = true;
      series(plan, SweepAxis::theta, {0.001, 0.01, 0.1, 1.0},
             fig == 9 ? "theta_strong" : "theta_weak");
      return evaluate_plan(cfg, plan);
    default:
      break;
  }
  throw HarnessError("usage", "unknown figure " + std::to_string(fig));
}

void run_figure(int fig, const json& overrides, const std::string& path) {
  write_csv_file(figure_table(fig, overrides), path);
}

}  // namespace nomaec
