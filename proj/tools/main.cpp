// smoothq: smoothed quantile estimation, efficiency tables and Monte Carlo
// validation on the command line.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage or validation error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothq/asymptotics.hpp"
#include "smoothq/distributions.hpp"
#include "smoothq/error.hpp"
#include "smoothq/estimator.hpp"
#include "smoothq/simulation.hpp"

namespace {

using json = nlohmann::ordered_json;

struct IoError {
  std::string message;
};

// ---------------------------------------------------------------------------
// Output records
// ---------------------------------------------------------------------------

using Value = std::variant<double, long long, unsigned long long, std::string>;
using Record = std::vector<std::pair<std::string, Value>>;

// 6 significant digits in CSV; JSON keeps full precision.
std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const std::vector<Record>& records) {
  if (records.empty()) {
    return "";
  }
  std::string out;
  for (std::size_t i = 0; i < records.front().size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += csv_escape(records.front()[i].first);
  }
  out += '\n';
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      const auto& v = rec[i].second;
      if (const auto* d = std::get_if<double>(&v)) {
        out += format_real(*d);
      } else if (const auto* ll = std::get_if<long long>(&v)) {
        out += std::to_string(*ll);
      } else if (const auto* ull = std::get_if<unsigned long long>(&v)) {
        out += std::to_string(*ull);
      } else {
        out += csv_escape(std::get<std::string>(v));
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const std::vector<Record>& records) {
  json arr = json::array();
  for (const auto& rec : records) {
    json obj = json::object();
    for (const auto& [key, v] : rec) {
      if (const auto* d = std::get_if<double>(&v)) {
        obj[key] = *d;
      } else if (const auto* ll = std::get_if<long long>(&v)) {
        obj[key] = *ll;
      } else if (const auto* ull = std::get_if<unsigned long long>(&v)) {
        obj[key] = *ull;
      } else {
        obj[key] = std::get<std::string>(v);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void emit(const std::vector<Record>& records, const std::string& format,
          const std::string& out_path) {
  const std::string text = format == "json" ? to_json(records) : to_csv(records);
  if (out_path.empty()) {
    std::cout << text;
    if (!std::cout) {
      throw IoError{"failed writing to stdout"};
    }
    return;
  }
  std::ofstream f(out_path);
  if (!f) {
    throw IoError{"cannot open output file: " + out_path};
  }
  f << text;
  f.flush();
  if (!f) {
    throw IoError{"failed writing output file: " + out_path};
  }
}

// ---------------------------------------------------------------------------
// Distribution spec mini-grammar: name:p1,p2[,p3]
//   normal:mu,sigma | laplace:mu,b | alaplace:mu,b,kappa
// ---------------------------------------------------------------------------

std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty()) {
      throw smoothq::DomainError("bad number in distribution spec: '" + tok +
                                 "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return out;
}

smoothq::DistributionModel parse_distribution(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw smoothq::DomainError("distribution spec must look like name:params");
  }
  const std::string name = spec.substr(0, colon);
  const std::vector<double> ps = parse_params(spec.substr(colon + 1));
  if (name == "normal") {
    if (ps.size() != 2) {
      throw smoothq::DomainError("normal takes two parameters: mu,sigma");
    }
    return smoothq::Normal(ps[0], ps[1]);
  }
  if (name == "laplace") {
    if (ps.size() != 2) {
      throw smoothq::DomainError("laplace takes two parameters: mu,b");
    }
    return smoothq::Laplace(ps[0], ps[1]);
  }
  if (name == "alaplace") {
    if (ps.size() != 3) {
      throw smoothq::DomainError("alaplace takes three parameters: mu,b,kappa");
    }
    return smoothq::AsymmetricLaplace(ps[0], ps[1], ps[2]);
  }
  throw smoothq::DomainError("unknown distribution '" + name +
                             "' (expected normal, laplace or alaplace)");
}

std::string canonical_spec(const smoothq::DistributionModel& d) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, smoothq::Normal>) {
          return "normal:" + format_real(m.mu) + "," + format_real(m.sigma);
        } else if constexpr (std::is_same_v<T, smoothq::Laplace>) {
          return "laplace:" + format_real(m.mu) + "," + format_real(m.b);
        } else {
          return "alaplace:" + format_real(m.mu) + "," + format_real(m.b) +
                 "," + format_real(m.kappa);
        }
      },
      d);
}

std::string case_label(smoothq::EfficiencyCase c) {
  switch (c) {
    case smoothq::EfficiencyCase::increasing_from_zero:
      return "increasing_from_zero";
    case smoothq::EfficiencyCase::monotone_decreasing:
      return "monotone_decreasing";
    case smoothq::EfficiencyCase::finite_optimum:
      return "finite_optimum";
    case smoothq::EfficiencyCase::boundary_flat:
      return "boundary_flat";
  }
  return "unknown";
}

// "inf" and "0" sentinels in CSV; JSON uses a number when finite.
Value h_star_value(const smoothq::OptimalSmoothing& h, bool json_mode) {
  switch (h.kind) {
    case smoothq::OptimalSmoothing::Kind::infinite:
      return std::string("inf");
    case smoothq::OptimalSmoothing::Kind::zero:
      return json_mode ? Value(0.0) : Value(std::string("0"));
    case smoothq::OptimalSmoothing::Kind::finite:
    default:
      return json_mode ? Value(h.value) : Value(format_real(h.value));
  }
}

std::string optimum_label(const smoothq::OptimalSmoothing& h) {
  switch (h.kind) {
    case smoothq::OptimalSmoothing::Kind::infinite:
      return "limit";
    case smoothq::OptimalSmoothing::Kind::zero:
      return "zero";
    case smoothq::OptimalSmoothing::Kind::finite:
    default:
      return "finite";
  }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string format = "csv";
  std::string out_path;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", opts.out_path, "Write output to a file");
}

int run_estimate(const std::string& path, double z, double h,
                 const CommonOpts& opts) {
  std::ifstream f(path);
  if (!f) {
    throw IoError{"cannot open input file: " + path};
  }
  std::vector<double> values;
  std::string line;
  long long line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      continue;  // blank lines ignored
    }
    std::size_t e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      throw smoothq::DomainError("cannot parse number on line " +
                                 std::to_string(line_no) + ": '" + tok + "'");
    }
    values.push_back(v);
  }
  if (f.bad()) {
    throw IoError{"read failure on input file: " + path};
  }
  if (values.empty()) {
    throw smoothq::DomainError("input file has no values: " + path);
  }

  const smoothq::Sample sample(std::move(values));
  const double q_hat = smoothq::estimate(sample, smoothq::SmoothingParams(z, h));

  std::vector<Record> rows;
  rows.push_back({{"q_hat", q_hat},
                  {"z", z},
                  {"h", h},
                  {"n", static_cast<unsigned long long>(sample.size())}});
  emit(rows, opts.format, opts.out_path);
  return 0;
}

int run_table(const std::string& spec, const std::vector<double>& taus,
              const CommonOpts& opts) {
  const auto d = parse_distribution(spec);
  const bool json_mode = opts.format == "json";
  std::vector<Record> rows;
  for (double tau : taus) {
    const auto report = smoothq::efficiency_report(d, tau);
    rows.push_back({{"distribution", canonical_spec(d)},
                    {"tau", tau},
                    {"q_tau", smoothq::quantile(d, tau)},
                    {"h_star", h_star_value(report.h_star, json_mode)},
                    {"v0", report.v_at_zero},
                    {"v_opt", report.v_at_opt},
                    {"ratio", report.ratio},
                    {"case", case_label(report.classification)}});
  }
  emit(rows, opts.format, opts.out_path);
  return 0;
}

int run_sweep(const std::string& spec, double start, double end, double step,
              const CommonOpts& opts) {
  if (!(start > 0.0 && start <= end && end < 1.0 && step > 0.0)) {
    throw smoothq::DomainError(
        "sweep range must satisfy 0 < start <= end < 1 with step > 0");
  }
  const auto d = parse_distribution(spec);
  const auto count =
      static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<Record> rows;
  for (std::size_t k = 0; k < count; ++k) {
    const double tau = start + static_cast<double>(k) * step;
    const auto report = smoothq::efficiency_report(d, tau);
    rows.push_back({{"tau", tau},
                    {"ratio", report.ratio},
                    {"optimum", optimum_label(report.h_star)}});
  }
  emit(rows, opts.format, opts.out_path);
  return 0;
}

int run_simulate(const std::string& spec, std::optional<double> tau,
                 std::optional<double> z, double h, std::size_t n,
                 std::size_t reps, std::uint64_t seed, const CommonOpts& opts) {
  if (tau.has_value() == z.has_value()) {
    throw smoothq::DomainError("give exactly one of --tau or --z");
  }
  const auto d = parse_distribution(spec);

  smoothq::SimulationConfig cfg{d, smoothq::TauSmoothing{0.5, 0.0}, n, reps,
                                seed};
  double z_out;
  double tau_out;
  if (tau) {
    cfg.point = smoothq::TauSmoothing{*tau, h};
    z_out = smoothq::z_of_tau(d, *tau, h);
    tau_out = *tau;
  } else {
    const smoothq::SmoothingParams p(*z, h);
    cfg.point = p;
    z_out = *z;
    tau_out = smoothq::cdf(d, smoothq::population_minimizer(d, p));
  }
  const auto r = smoothq::run_simulation(cfg);

  std::vector<Record> rows;
  rows.push_back(
      {{"distribution", canonical_spec(d)},
       {"tau", tau_out},
       {"z", z_out},
       {"h", h},
       {"n", static_cast<unsigned long long>(n)},
       {"reps", static_cast<unsigned long long>(reps)},
       {"seed", static_cast<unsigned long long>(seed)},
       {"target_q", r.target_q},
       {"est_mean", r.est_mean},
       {"est_bias", r.est_bias},
       {"scaled_variance", r.scaled_variance},
       {"predicted_variance", r.predicted_variance},
       {"relative_error", r.relative_error},
       {"se_p05", r.standardized_error_quantiles[0]},
       {"se_p25", r.standardized_error_quantiles[1]},
       {"se_p50", r.standardized_error_quantiles[2]},
       {"se_p75", r.standardized_error_quantiles[3]},
       {"se_p95", r.standardized_error_quantiles[4]}});
  emit(rows, opts.format, opts.out_path);
  return 0;
}

int run_population(const std::string& spec, std::optional<double> tau,
                   std::optional<double> z, double h, const CommonOpts& opts) {
  if (tau.has_value() == z.has_value()) {
    throw smoothq::DomainError("give exactly one of --tau or --z");
  }
  const auto d = parse_distribution(spec);
  double z_out;
  if (tau) {
    z_out = smoothq::z_of_tau(d, *tau, h);
  } else {
    z_out = *z;
  }
  const double q =
      smoothq::population_minimizer(d, smoothq::SmoothingParams(z_out, h));
  const double tau_out = tau ? *tau : smoothq::cdf(d, q);

  std::vector<Record> rows;
  rows.push_back({{"distribution", canonical_spec(d)},
                  {"tau", tau_out},
                  {"z", z_out},
                  {"h", h},
                  {"q", q}});
  emit(rows, opts.format, opts.out_path);
  return 0;
}

int run_variance(const std::string& spec, std::optional<double> tau,
                 std::optional<double> z, double h, const CommonOpts& opts) {
  if (tau.has_value() == z.has_value()) {
    throw smoothq::DomainError("give exactly one of --tau or --z");
  }
  const auto d = parse_distribution(spec);
  double z_out;
  double tau_out;
  double var;
  if (tau) {
    var = smoothq::tau_variance(d, *tau, h);
    z_out = smoothq::z_of_tau(d, *tau, h);
    tau_out = *tau;
  } else {
    const smoothq::SmoothingParams p(*z, h);
    var = smoothq::asymptotic_variance(d, p);
    z_out = *z;
    tau_out = smoothq::cdf(d, smoothq::population_minimizer(d, p));
  }

  std::vector<Record> rows;
  rows.push_back({{"distribution", canonical_spec(d)},
                  {"tau", tau_out},
                  {"z", z_out},
                  {"h", h},
                  {"variance", var}});
  emit(rows, opts.format, opts.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "smoothq: smoothed quantile estimators interpolating between the "
      "sample quantile and the sample mean, with their asymptotic "
      "efficiency calculus and a Monte Carlo validation harness"};
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate q(z,h) from a data file");
  std::string input_path;
  double est_z = 0.0;
  double est_h = 0.0;
  CommonOpts est_opts;
  est->add_option("input,--input", input_path,
                  "Input file, one decimal value per line")
      ->required();
  est->add_option("--z", est_z, "Location parameter z")->capture_default_str();
  est->add_option("--h", est_h, "Smoothing parameter h >= 0")
      ->capture_default_str();
  add_common(est, est_opts);

  // table
  auto* table = app.add_subcommand(
      "table", "Efficiency table: h*, v(tau,0), v(tau,h*), ratio per tau");
  std::string table_spec;
  std::vector<double> table_taus{0.25, 0.5, 0.75};
  CommonOpts table_opts;
  table->add_option("dist,--dist", table_spec,
                    "Distribution spec, e.g. normal:0,1 or alaplace:0,1,2")
      ->required();
  table->add_option("--tau", table_taus, "Quantile levels")
      ->delimiter(',')
      ->capture_default_str();
  add_common(table, table_opts);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Efficiency-ratio sweep over a tau grid (figure data)");
  std::string sweep_spec;
  double sweep_start = 0.0;
  double sweep_end = 0.0;
  double sweep_step = 0.0;
  CommonOpts sweep_opts;
  sweep->add_option("dist,--dist", sweep_spec, "Distribution spec")->required();
  sweep->add_option("start", sweep_start, "First tau")->required();
  sweep->add_option("end", sweep_end, "Last tau")->required();
  sweep->add_option("step", sweep_step, "Grid step")->required();
  add_common(sweep, sweep_opts);

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "Monte Carlo validation of the asymptotic variance");
  std::string sim_spec;
  std::optional<double> sim_tau;
  std::optional<double> sim_z;
  double sim_h = 0.0;
  std::size_t sim_n = 2000;
  std::size_t sim_reps = 2000;
  std::uint64_t sim_seed = 0;
  CommonOpts sim_opts;
  sim->add_option("dist,--dist", sim_spec, "Distribution spec")->required();
  sim->add_option("--tau", sim_tau, "Target quantile level");
  sim->add_option("--z", sim_z, "Raw location parameter");
  sim->add_option("--h", sim_h, "Smoothing parameter")->capture_default_str();
  sim->add_option("--n", sim_n, "Sample size per replicate")
      ->capture_default_str();
  sim->add_option("--reps", sim_reps, "Number of replicates")
      ->capture_default_str();
  sim->add_option("--seed", sim_seed, "RNG seed (required; no clock default)")
      ->required();
  add_common(sim, sim_opts);

  // population
  auto* pop = app.add_subcommand("population",
                                 "Population minimizer q(z,h) of the model");
  std::string pop_spec;
  std::optional<double> pop_tau;
  std::optional<double> pop_z;
  double pop_h = 0.0;
  CommonOpts pop_opts;
  pop->add_option("dist,--dist", pop_spec, "Distribution spec")->required();
  pop->add_option("--tau", pop_tau, "Quantile level");
  pop->add_option("--z", pop_z, "Raw location parameter");
  pop->add_option("--h", pop_h, "Smoothing parameter")->capture_default_str();
  add_common(pop, pop_opts);

  // variance
  auto* var = app.add_subcommand(
      "variance", "Asymptotic variance at (tau,h) or raw (z,h)");
  std::string var_spec;
  std::optional<double> var_tau;
  std::optional<double> var_z;
  double var_h = 0.0;
  CommonOpts var_opts;
  var->add_option("dist,--dist", var_spec, "Distribution spec")->required();
  var->add_option("--tau", var_tau, "Quantile level");
  var->add_option("--z", var_z, "Raw location parameter");
  var->add_option("--h", var_h, "Smoothing parameter")->capture_default_str();
  add_common(var, var_opts);

  try {
    app.parse(argc, argv);

    if (est->parsed()) {
      return run_estimate(input_path, est_z, est_h, est_opts);
    }
    if (table->parsed()) {
      return run_table(table_spec, table_taus, table_opts);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_spec, sweep_start, sweep_end, sweep_step,
                       sweep_opts);
    }
    if (sim->parsed()) {
      return run_simulate(sim_spec, sim_tau, sim_z, sim_h, sim_n, sim_reps,
                          sim_seed, sim_opts);
    }
    if (pop->parsed()) {
      return run_population(pop_spec, pop_tau, pop_z, pop_h, pop_opts);
    }
    if (var->parsed()) {
      return run_variance(var_spec, var_tau, var_z, var_h, var_opts);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const smoothq::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
