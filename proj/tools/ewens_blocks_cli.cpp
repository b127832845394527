// Command-line front end: exact block-count distributions, normal-approximation
// error bounds, Kolmogorov distances, the c* root, and decay-rate sweeps,
// emitted as JSON or CSV.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ewens/ewens.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json envelope(const std::string& command, json params_echo, json results, bool reproducible) {
  json env;
  env["artifact_version"] = ewens::kVersion;
  env["command"] = command;
  env["params_echo"] = std::move(params_echo);
  env["results"] = std::move(results);
  if (!reproducible) {
    env["timestamp"] = iso_timestamp();
  }
  return env;
}

ewens::EwensParams parse_params_or_usage(std::int64_t n, const std::string& theta_text) {
  try {
    return ewens::EwensParams::parse(n, theta_text);
  } catch (const ewens::domain_error& e) {
    throw UsageError(e.what());
  }
}

std::string side_name(ewens::KolmogorovReport::Side side) {
  return side == ewens::KolmogorovReport::Side::LeftLimit ? "left-limit" : "right-value";
}

json kolmo_json(const ewens::KolmogorovReport& report) {
  return json{{"distance", report.distance},
              {"argmax_point", report.argmax_point},
              {"side", side_name(report.side)}};
}

// ---- dist ----------------------------------------------------------------

int run_dist(std::int64_t n, const std::string& theta_text, const std::string& format,
             bool reproducible, std::ostream& out) {
  const ewens::EwensParams params = parse_params_or_usage(n, theta_text);
  ewens::LengthDistribution dist = ewens::pmf_poisson_binomial(params);
  const std::vector<double> cdf = ewens::cdf(dist);

  if (format == "csv") {
    out << "x,pmf,cdf,log_pmf,pmf_exact\n";
    for (std::int64_t x = 1; x <= n; ++x) {
      out << x << ',' << format_double(dist.pmf(x)) << ','
          << format_double(cdf[static_cast<std::size_t>(x - 1)]) << ','
          << format_double(dist.log_pmf[static_cast<std::size_t>(x - 1)]) << ',';
      if (dist.exact_pmf) {
        out << (*dist.exact_pmf)[static_cast<std::size_t>(x - 1)].str();
      }
      out << '\n';
    }
    return 0;
  }

  json results;
  results["n"] = params.n;
  results["theta"] = params.theta;
  std::vector<double> pmf(static_cast<std::size_t>(n));
  for (std::int64_t x = 1; x <= n; ++x) pmf[static_cast<std::size_t>(x - 1)] = dist.pmf(x);
  results["pmf"] = pmf;
  results["log_pmf"] = dist.log_pmf;
  results["cdf"] = cdf;
  if (dist.exact_pmf) {
    std::vector<std::string> exact;
    exact.reserve(dist.exact_pmf->size());
    for (const auto& r : *dist.exact_pmf) exact.push_back(r.str());
    results["pmf_exact"] = exact;
  } else {
    results["pmf_exact"] = nullptr;
  }
  const json params_echo{{"n", n}, {"theta", theta_text}, {"format", format}};
  out << envelope("dist", params_echo, results, reproducible).dump(2) << '\n';
  return 0;
}

// ---- bounds --------------------------------------------------------------

int run_bounds(std::int64_t n, const std::string& theta_text, double D, double C,
               bool reproducible, std::ostream& out) {
  if (!(D > 0.0)) throw UsageError("--D must be positive");
  if (!(C > 0.0)) throw UsageError("--C must be positive");
  const ewens::EwensParams params = parse_params_or_usage(n, theta_text);

  const ewens::BoundReport report = ewens::bound_report(params, D, C);
  const ewens::LengthDistribution dist = ewens::pmf_poisson_binomial(params);

  json results;
  results["n"] = params.n;
  results["theta"] = params.theta;
  results["C"] = report.C;
  results["D"] = report.D;
  results["moments"] = {{"mu0", report.moments.mu0},
                        {"sigma0_sq", report.moments.sigma0_sq},
                        {"s3_abs", report.moments.s3_abs},
                        {"s3_signed", report.moments.s3_signed},
                        {"s22", report.moments.s22},
                        {"mu_t", report.moments.mu_T},
                        {"sigma_t_sq", report.moments.sigma_T_sq}};
  results["conditions"] = {{"assth1", report.cond.assth1},
                           {"assth2i", report.cond.assth2i},
                           {"assth2ii", report.cond.assth2ii},
                           {"var_ge_1", report.cond.var_ge_1}};
  if (report.cond.assth1) {
    results["gamma1"] = report.gamma1;
    results["gamma3"] = report.gamma3;
    results["upper"] = *report.upper;
  } else {
    results["gamma1"] = nullptr;
    results["gamma3"] = nullptr;
    results["upper"] = nullptr;
    results["upper_reason"] = "condition assth1 fails at this point";
  }
  results["gamma2"] = report.gamma2;
  results["gamma4"] = report.gamma4;
  if (report.lower_i) {
    results["lower_i"] = {{"value", *report.lower_i}, {"vacuous", !(*report.lower_i > 0.0)}};
  } else {
    results["lower_i"] = nullptr;
  }
  if (report.lower_ii) {
    results["lower_ii"] = {{"value", *report.lower_ii}, {"vacuous", !(*report.lower_ii > 0.0)}};
  } else {
    results["lower_ii"] = nullptr;
  }
  if (!report.lower_i && !report.lower_ii) {
    results["lower_reason"] = "lower-bound hypotheses do not hold at this point";
  }

  if (params.n >= 2) {
    results["lyapunov"] = ewens::lyapunov_fraction(params);
    const auto hb = ewens::hall_barbour_delta(params);
    results["hall_barbour"] = {{"delta", hb.delta},
                               {"term_tail", hb.term_tail},
                               {"term_fourth", hb.term_fourth},
                               {"term_third_abs", hb.term_third_abs},
                               {"sum_sigma4", hb.sum_sigma4}};
    results["kolmo_x"] = kolmo_json(ewens::kolmogorov_distance(
        dist, ewens::make_standardization(ewens::StandardizationKind::ExactMoments, params,
                                          report.moments)));
    results["kolmo_z"] = kolmo_json(ewens::kolmogorov_distance(
        dist, ewens::make_standardization(ewens::StandardizationKind::LogLeading, params,
                                          report.moments)));
  } else {
    results["lyapunov"] = nullptr;
    results["hall_barbour"] = nullptr;
    results["kolmo_x"] = nullptr;
    results["kolmo_z"] = nullptr;
  }
  results["kolmo_y"] = kolmo_json(ewens::kolmogorov_distance(
      dist, ewens::make_standardization(ewens::StandardizationKind::ApproxMoments, params,
                                        report.moments)));

  const json params_echo{{"n", n}, {"theta", theta_text}, {"D", D}, {"C", C}};
  out << envelope("bounds", params_echo, results, reproducible).dump(2) << '\n';
  return 0;
}

// ---- sweep ---------------------------------------------------------------

std::vector<std::int64_t> geometric_grid(std::int64_t n_min, std::int64_t n_max, int points) {
  if (n_min < 1 || n_max < n_min) throw UsageError("need 1 <= n-min <= n-max");
  if (points < 1) throw UsageError("--points must be >= 1");
  std::vector<std::int64_t> grid;
  grid.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    grid.push_back(n_min);
    return grid;
  }
  const double ratio = std::log(static_cast<double>(n_max) / static_cast<double>(n_min)) /
                       static_cast<double>(points - 1);
  for (int k = 0; k < points; ++k) {
    const auto value = static_cast<std::int64_t>(
        std::llround(static_cast<double>(n_min) * std::exp(ratio * static_cast<double>(k))));
    if (grid.empty() || value > grid.back()) {
      grid.push_back(value);
    }
  }
  return grid;
}

const char* kSweepHeader =
    "n,theta,kolmo_x,kolmo_y,kolmo_z,upper,lower_i,lower_ii,rate_normalizer,scaled_error,"
    "log_n,log_scaled_error,status";

void write_sweep_csv(const std::vector<ewens::SweepRow>& rows, std::ostream& out) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  out << kSweepHeader << '\n';
  for (const auto& row : rows) {
    out << row.n << ',' << format_double(row.theta) << ',' << format_double(row.kolmo_x) << ','
        << format_double(row.kolmo_y) << ',' << opt(row.kolmo_z) << ',' << opt(row.upper) << ','
        << opt(row.lower_i) << ',' << opt(row.lower_ii) << ','
        << format_double(row.rate_normalizer) << ',' << format_double(row.scaled_error) << ','
        << format_double(std::log(static_cast<double>(row.n))) << ','
        << format_double(std::log(row.scaled_error)) << ',' << csv_quote(row.status) << '\n';
  }
}

int run_sweep(const std::string& coupling_name, double a, double p, double c, double theta0,
              std::int64_t n_min, std::int64_t n_max, int points, const std::string& n_list,
              double D, unsigned jobs, const std::string& out_path) {
  if (!(D > 0.0)) throw UsageError("--D must be positive");

  ewens::Coupling coupling;
  if (coupling_name == "power") {
    coupling = ewens::PowerCoupling{a, p};
  } else if (coupling_name == "ratio") {
    coupling = ewens::RatioCoupling{c};
  } else if (coupling_name == "fixed") {
    coupling = ewens::FixedCoupling{theta0};
  } else {
    throw UsageError("--coupling must be one of power|ratio|fixed");
  }

  std::vector<std::int64_t> grid;
  if (!n_list.empty()) {
    std::stringstream ss(n_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        grid.push_back(std::stoll(item, &used));
        if (used != item.size()) throw UsageError("bad --n-list entry: '" + item + "'");
      } catch (const std::invalid_argument&) {
        throw UsageError("bad --n-list entry: '" + item + "'");
      } catch (const std::out_of_range&) {
        throw UsageError("--n-list entry out of range: '" + item + "'");
      }
    }
  } else {
    grid = geometric_grid(n_min, n_max, points);
  }
  if (grid.empty()) throw UsageError("empty n grid");

  const double cstar = ewens::solve_cstar(1e-12);
  const ewens::RegimeSpec spec = ewens::RegimeSpec::from(coupling, cstar);
  const auto rows = ewens::sweep(spec, grid, D, jobs);

  if (out_path.empty() || out_path == "-") {
    write_sweep_csv(rows, std::cout);
  } else {
    std::ofstream file(out_path);
    if (!file) throw ewens::error("cannot open output file: " + out_path);
    write_sweep_csv(rows, file);
  }
  return 0;
}

// ---- cstar ---------------------------------------------------------------

int run_cstar(double tolerance, std::ostream& out) {
  if (!(tolerance >= 1e-14)) throw UsageError("--tolerance must be >= 1e-14");
  const double root = ewens::solve_cstar(tolerance);
  const double x1 = root + 1.0;
  const double residual = std::log1p(root) - 2.0 + 3.0 / x1 - 1.0 / (x1 * x1);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10f", root);
  out << "cstar " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.3e", residual);
  out << "residual " << buf << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Length-of-a-Ewens-partition toolkit: exact distributions, normal-approximation "
               "error bounds, and decay-rate sweeps"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a key=value file");
  app.set_version_flag("--version", ewens::kVersion);

  bool reproducible = false;
  app.add_flag("--reproducible", reproducible,
               "Suppress the timestamp field so outputs are byte-identical across runs");

  // dist
  auto* dist_cmd = app.add_subcommand("dist", "Exact pmf and CDF of the number of blocks");
  std::int64_t dist_n = 0;
  std::string dist_theta;
  std::string dist_format = "json";
  dist_cmd->add_option("--n", dist_n, "Sample size (n >= 1)")->required();
  dist_cmd->add_option("--theta", dist_theta, "Concentration: decimal or rational p/q")
      ->required();
  dist_cmd->add_option("--format", dist_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // bounds
  auto* bounds_cmd =
      app.add_subcommand("bounds", "Bound quantities, conditions, and Kolmogorov distances");
  std::int64_t bounds_n = 0;
  std::string bounds_theta;
  double bounds_D = 1.0;
  double bounds_C = ewens::kBerryEsseenConstant;
  bounds_cmd->add_option("--n", bounds_n, "Sample size (n >= 1)")->required();
  bounds_cmd->add_option("--theta", bounds_theta, "Concentration: decimal or rational p/q")
      ->required();
  bounds_cmd->add_option("--D", bounds_D,
                         "Reverse-inequality constant (illustrative; no published value)");
  bounds_cmd->add_option("--C", bounds_C, "Berry-Esseen constant override");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Decay-rate sweep along a coupling, emitted as CSV");
  std::string sw_coupling;
  double sw_a = 1.0, sw_p = 0.5, sw_c = 1.0, sw_theta0 = 1.0;
  std::int64_t sw_nmin = 1024, sw_nmax = 1048576;
  int sw_points = 11;
  std::string sw_nlist;
  double sw_D = 1.0;
  unsigned sw_jobs = 1;
  std::string sw_out;
  sweep_cmd->add_option("--coupling", sw_coupling, "power | ratio | fixed")->required();
  sweep_cmd->add_option("--a", sw_a, "power coupling: theta = a n^p");
  sweep_cmd->add_option("--p", sw_p, "power coupling exponent (0 <= p < 2)");
  sweep_cmd->add_option("--c", sw_c, "ratio coupling: theta = n/c");
  sweep_cmd->add_option("--theta0", sw_theta0, "fixed coupling: theta = theta0");
  sweep_cmd->add_option("--n-min", sw_nmin, "Geometric grid start");
  sweep_cmd->add_option("--n-max", sw_nmax, "Geometric grid end");
  sweep_cmd->add_option("--points", sw_points, "Geometric grid size");
  sweep_cmd->add_option("--n-list", sw_nlist, "Explicit comma-separated n grid (overrides range)");
  sweep_cmd->add_option("--D", sw_D, "Reverse-inequality constant");
  sweep_cmd->add_option("--jobs", sw_jobs, "Rows evaluated in parallel")
      ->envname("EWENS_BERRY_JOBS");
  sweep_cmd->add_option("--out", sw_out, "Output CSV path (stdout when omitted)");

  // cstar
  auto* cstar_cmd = app.add_subcommand("cstar", "Root of the Case-B sign-change equation");
  double cstar_tol = 1e-12;
  cstar_cmd->add_option("--tolerance", cstar_tol, "Bisection tolerance (>= 1e-14)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dist_cmd->parsed()) {
      return run_dist(dist_n, dist_theta, dist_format, reproducible, std::cout);
    }
    if (bounds_cmd->parsed()) {
      return run_bounds(bounds_n, bounds_theta, bounds_D, bounds_C, reproducible, std::cout);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(sw_coupling, sw_a, sw_p, sw_c, sw_theta0, sw_nmin, sw_nmax, sw_points,
                       sw_nlist, sw_D, sw_jobs, sw_out);
    }
    if (cstar_cmd->parsed()) {
      return run_cstar(cstar_tol, std::cout);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ewens::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}
