#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "circseq/csv.hpp"
#include "circseq/droplet_data.hpp"
#include "circseq/errors.hpp"
#include "circseq/model_selection.hpp"
#include "circseq/sequential.hpp"

#ifndef CIRCSEQ_VERSION
#define CIRCSEQ_VERSION "0.0.0"
#endif

namespace circseq::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string out_dir;
  bool degrees = false;
  bool quiet = false;
};

/// Collects what one run did so the manifest can be written last.
class Run {
 public:
  Run(std::string command, const GlobalOptions& global)
      : command_(std::move(command)), global_(global) {}

  void param(const std::string& key, const std::string& value) {
    params_[key] = value;
  }
  void param(const std::string& key, double value) {
    params_[key] = csv::format(value);
  }
  void seed(std::uint64_t s) { seed_ = s; }

  /// Resolves a path against the output directory (flag, then environment).
  fs::path resolve(const std::string& default_name) const {
    fs::path file = global_.out.empty() ? fs::path(default_name) : fs::path(global_.out);
    if (file.is_absolute()) return file;
    std::string dir = global_.out_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv(kOutputDirEnv)) dir = env;
    }
    return dir.empty() ? file : fs::path(dir) / file;
  }

  /// Sibling of the primary output, e.g. fit_report_cdf.csv.
  static fs::path sibling(const fs::path& primary, const std::string& suffix) {
    return primary.parent_path() /
           (primary.stem().string() + suffix + primary.extension().string());
  }

  std::ofstream open(const fs::path& path) {
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot open '" + path.string() + "' for writing");
    outputs_.push_back(path.string());
    return f;
  }

  void write_manifest(const fs::path& primary) {
    const fs::path path = primary.string() + ".manifest";
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot write manifest '" + path.string() + "'");
    f << "command=" << command_ << "\n";
    f << "toolkit_version=" << CIRCSEQ_VERSION << "\n";
    f << "seed=" << (seed_ ? std::to_string(*seed_) : std::string("none")) << "\n";
    for (const auto& [k, v] : params_) f << "param." << k << "=" << v << "\n";
    std::string joined;
    for (const auto& o : outputs_) joined += (joined.empty() ? "" : ";") + o;
    f << "output_paths=" << joined << "\n";
    if (!f) throw ArgumentError("failed writing manifest '" + path.string() + "'");
  }

 private:
  std::string command_;
  const GlobalOptions& global_;
  std::map<std::string, std::string> params_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> outputs_;
};

void check_written(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw ArgumentError("failed writing '" + path.string() + "'");
}

double display_angle(double rad, bool degrees) {
  return degrees ? rad * 180.0 / kPi : rad;
}

const char* angle_unit(bool degrees) { return degrees ? "deg" : "rad"; }

AngleSample load_angles(const std::string& data_path) {
  if (data_path.empty()) {
    return generate_pseudo_data(published_time_to_angle_model()).angle_sample();
  }
  return read_series_csv(data_path).angle_sample();
}

// ---- generate -------------------------------------------------------------

struct GenerateOptions {
  double t_start = 5.0;
  double t_end = 300.0;
  double step = 1.0;
  std::string coeffs = "paper";
};

void cmd_generate(const GenerateOptions& o, const GlobalOptions& g,
                  std::ostream& out) {
  Run run("generate", g);
  run.param("t_start", o.t_start);
  run.param("t_end", o.t_end);
  run.param("step", o.step);
  run.param("coeffs", o.coeffs);

  PolynomialModel model = published_time_to_angle_model();
  if (o.coeffs == "refit") {
    const auto table = table1_dataset();
    const auto t = table.times();
    const auto a = table.angles();
    model = fit_polynomial(t, a, 3, RegressionDirection::TimeToAngle);
  }
  const auto series = generate_pseudo_data(model, {o.t_start, o.t_end, o.step});

  const auto primary = run.resolve("pseudo_data.csv");
  {
    auto f = run.open(primary);
    write_series_csv(f, series);
    check_written(f, primary);
  }
  const auto circular = Run::sibling(primary, "_circular");
  {
    auto f = run.open(circular);
    f << "time_s,angle_rad,x,y\n";
    for (const auto& p : series.points()) {
      f << csv::format(p.time_s) << ',' << csv::format(p.angle_rad) << ','
        << csv::format(std::cos(p.angle_rad)) << ','
        << csv::format(std::sin(p.angle_rad)) << '\n';
    }
    check_written(f, circular);
  }
  run.write_manifest(primary);
  if (!g.quiet) {
    const auto angles = series.angles();
    const auto [lo, hi] = std::minmax_element(angles.begin(), angles.end());
    out << "generated " << series.size() << " observations ("
        << model.coefficients.size() - 1 << "-degree " << o.coeffs
        << " coefficients), angles in [" << display_angle(*lo, g.degrees) << ", "
        << display_angle(*hi, g.degrees) << "] " << angle_unit(g.degrees)
        << " -> " << primary.string() << "\n";
  }
}

// ---- fit ------------------------------------------------------------------

struct FitOptions {
  std::string model = "all";
  std::string data;
  int bins = 20;
};

int cmd_fit(const FitOptions& o, const GlobalOptions& g, std::ostream& out,
            std::ostream& err) {
  Run run("fit", g);
  run.param("model", o.model);
  run.param("data", o.data.empty() ? std::string("<pseudo>") : o.data);
  run.param("bins", std::to_string(o.bins));
  if (o.bins < 1) throw ArgumentError("--bins must be >= 1");

  const auto sample = load_angles(o.data);
  std::vector<ModelKind> kinds;
  if (o.model == "all") {
    kinds.assign(std::begin(kAllModels), std::end(kAllModels));
  } else {
    const auto kind = parse_model_kind(o.model);
    if (!kind) throw ArgumentError("unknown model '" + o.model + "'");
    kinds.push_back(*kind);
  }

  std::vector<FitReport> reports;
  if (o.model == "all") {
    reports = compare_models(sample);
  } else {
    reports.push_back(fit_report(kinds.front(), sample));
  }

  const auto primary = run.resolve("fit_report.csv");
  {
    auto f = run.open(primary);
    f << fit_report_csv_header() << "\n";
    for (const auto& r : reports) f << to_csv_row(r) << "\n";
    check_written(f, primary);
  }

  std::vector<double> sorted(sample.angles().begin(), sample.angles().end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double top = sorted.back() > 0.0 ? sorted.back() : kPi;
  const double width = top / o.bins;
  std::vector<double> counts(static_cast<std::size_t>(o.bins), 0.0);
  for (double a : sorted) {
    auto b = static_cast<std::size_t>(a / width);
    counts[std::min(b, counts.size() - 1)] += 1.0;
  }

  const auto cdf_path = Run::sibling(primary, "_cdf");
  const auto density_path = Run::sibling(primary, "_density");
  auto cdf_file = run.open(cdf_path);
  auto density_file = run.open(density_path);
  cdf_file << "model_id,angle_rad,empirical_cdf,fitted_cdf\n";
  density_file << "model_id,bin_lower,bin_upper,bin_center,histogram_density,fitted_density\n";
  for (const auto& r : reports) {
    if (!r.ok) continue;
    const auto fitted = fit_model(*parse_model_kind(r.model_id), sample);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      cdf_file << r.model_id << ',' << csv::format(sorted[i]) << ','
               << csv::format(static_cast<double>(i + 1) / n) << ','
               << csv::format(fitted.cdf(sorted[i])) << '\n';
    }
    for (std::size_t b = 0; b < counts.size(); ++b) {
      const double lo = width * static_cast<double>(b);
      const double center = lo + 0.5 * width;
      density_file << r.model_id << ',' << csv::format(lo) << ','
                   << csv::format(lo + width) << ',' << csv::format(center) << ','
                   << csv::format(counts[b] / (n * width)) << ','
                   << csv::format(fitted.pdf(center)) << '\n';
    }
  }
  check_written(cdf_file, cdf_path);
  check_written(density_file, density_path);
  run.write_manifest(primary);

  for (const auto& r : reports) {
    if (!r.ok) err << "warning: fit of " << r.model_id << " failed: " << r.diagnostic << "\n";
  }
  if (!g.quiet) {
    out << std::left << std::setw(10) << "model" << std::setw(14) << "logL"
        << std::setw(14) << "AIC" << std::setw(14) << "KS p" << "params\n";
    for (const auto& r : reports) {
      out << std::setw(10) << r.model_id << std::setw(14) << r.log_likelihood
          << std::setw(14) << r.aic << std::setw(14) << r.ks_p_value;
      for (std::size_t i = 0; i < r.params.size(); ++i) {
        // von Mises mu is an angle; the rest are rates or shape parameters.
        const bool is_angle = r.model_id == "vonmises" && i == 0;
        out << (i ? " " : "") << (is_angle ? display_angle(r.params[i], g.degrees) : r.params[i]);
      }
      out << "\n";
    }
    if (reports.size() == 1 && reports[0].model_id == "hcwe" && reports[0].ok) {
      out << "mean direction " << display_angle(hcwe_mean_direction(reports[0].params[0]), g.degrees)
          << " " << angle_unit(g.degrees) << "\n";
    }
  }
  return 0;
}

// ---- sequential -------------------------------------------------------------

struct SequentialOptions {
  std::vector<double> d{0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::size_t m = 5;
  double alpha = 0.05;
  std::size_t subsample = 250;
  std::string order = "ascending";
  std::string data;
};

void print_table3(const std::vector<SequentialResult>& results,
                  const GlobalOptions& g, std::ostream& out) {
  out << std::fixed << std::setprecision(4);
  out << "d       N     CI lambda            CI mu0 (" << angle_unit(g.degrees)
      << ")        CI drying time (s)\n";
  for (const auto& r : results) {
    out << std::setw(8) << std::left << r.d << std::setw(6) << r.n_stop << "("
        << r.ci_lambda.lower << ", " << r.ci_lambda.upper << ")  ("
        << display_angle(r.ci_mu0.lower, g.degrees) << ", "
        << display_angle(r.ci_mu0.upper, g.degrees) << ")  ";
    if (r.ci_drying_time) {
      out << "(" << r.ci_drying_time->lower << ", " << r.ci_drying_time->upper << ")";
    } else {
      out << "(out of model range)";
    }
    if (r.truncated) out << "  [truncated]";
    out << "\n";
  }
  out << std::defaultfloat;
}

void write_table3(Run& run, const fs::path& primary,
                  const std::vector<SequentialResult>& results) {
  auto f = run.open(primary);
  f << table3_csv_header() << "\n";
  for (const auto& r : results) f << to_csv_row(r) << "\n";
  check_written(f, primary);
}

void cmd_sequential(const SequentialOptions& o, const GlobalOptions& g,
                    std::ostream& out) {
  Run run("sequential", g);
  Table3Options options;
  options.d_grid = o.d;
  options.m = o.m;
  options.alpha = o.alpha;
  options.subsample_size = o.subsample;
  options.seed = g.seed.value_or(kDefaultTable3Seed);
  options.order = o.order == "descending" ? SubsampleOrder::Descending
                                          : SubsampleOrder::Ascending;
  run.seed(options.seed);
  run.param("d", csv::join(o.d, ';'));
  run.param("m", std::to_string(o.m));
  run.param("alpha", o.alpha);
  run.param("subsample", std::to_string(o.subsample));
  run.param("order", o.order);
  run.param("data", o.data.empty() ? std::string("<pseudo>") : o.data);

  const auto results = run_table3_analysis(load_angles(o.data), options);
  const auto primary = run.resolve("table3.csv");
  write_table3(run, primary, results);
  run.write_manifest(primary);
  if (!g.quiet) print_table3(results, g, out);
}

// ---- coverage ---------------------------------------------------------------

struct CoverageOptions {
  double lambda = 3.69;
  double d = 0.3;
  std::size_t m = 5;
  double alpha = 0.05;
  std::size_t reps = 1000;
  unsigned threads = 0;
};

void cmd_coverage(const CoverageOptions& o, const GlobalOptions& g,
                  std::ostream& out) {
  Run run("coverage", g);
  const std::uint64_t seed = g.seed.value_or(1);
  run.seed(seed);
  run.param("lambda", o.lambda);
  run.param("d", o.d);
  run.param("m", std::to_string(o.m));
  run.param("alpha", o.alpha);
  run.param("reps", std::to_string(o.reps));

  StoppingConfig config;
  config.m = o.m;
  config.alpha = o.alpha;
  config.d = o.d;
  const auto report = monte_carlo_coverage(o.lambda, config, o.reps, seed, o.threads);

  const auto primary = run.resolve("coverage.csv");
  {
    auto f = run.open(primary);
    f << coverage_csv_header() << "\n" << to_csv_row(report) << "\n";
    check_written(f, primary);
  }
  run.write_manifest(primary);
  if (!g.quiet) {
    out << "coverage " << report.empirical_coverage << " over "
        << report.replications << " replications; E[N] = "
        << report.mean_stop_time << ", n* = " << report.optimal_n
        << ", E[N]/n* = " << report.efficiency_ratio << "\n";
  }
}

// ---- reproduce --------------------------------------------------------------

void cmd_reproduce(int table, const GlobalOptions& g, std::ostream& out) {
  Run run("reproduce", g);
  run.param("table", std::to_string(table));
  const auto primary = run.resolve("table" + std::to_string(table) + ".csv");
  switch (table) {
    case 1: {
      const auto series = table1_dataset();
      auto f = run.open(primary);
      write_series_csv(f, series);
      check_written(f, primary);
      if (!g.quiet) {
        for (const auto& p : series.points()) {
          out << p.time_s << "\t" << display_angle(p.angle_rad, g.degrees) << "\n";
        }
      }
      break;
    }
    case 2: {
      const auto sample = generate_pseudo_data(published_time_to_angle_model()).angle_sample();
      const auto reports = compare_models(sample);
      auto f = run.open(primary);
      f << fit_report_csv_header() << "\n";
      for (const auto& r : reports) f << to_csv_row(r) << "\n";
      check_written(f, primary);
      if (!g.quiet) {
        for (const auto& r : reports) {
          out << std::left << std::setw(10) << r.model_id << std::setw(14)
              << r.log_likelihood << r.aic << "\n";
        }
      }
      break;
    }
    case 3: {
      Table3Options options;
      options.seed = g.seed.value_or(kDefaultTable3Seed);
      run.seed(options.seed);
      const auto sample = generate_pseudo_data(published_time_to_angle_model()).angle_sample();
      const auto results = run_table3_analysis(sample, options);
      write_table3(run, primary, results);
      if (!g.quiet) print_table3(results, g, out);
      break;
    }
    default:
      throw ArgumentError("unknown table " + std::to_string(table) + " (expected 1, 2 or 3)");
  }
  run.write_manifest(primary);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Half-circular wrapped-exponential fitting and sequential "
               "interval estimation for contact-angle data",
               "circseq"};
  app.set_version_flag("--version", CIRCSEQ_VERSION);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--out", global.out, "Primary output file");
  app.add_option("--out-dir", global.out_dir,
                 std::string("Output directory (overrides $") + kOutputDirEnv + ")");
  app.add_flag("--degrees", global.degrees, "Show angles in degrees on stdout");
  app.add_flag("--quiet", global.quiet, "Suppress stdout summaries");

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Regenerate the pseudo dataset");
  generate->fallthrough();
  generate->add_option("--t-start", gen.t_start, "First time (s)");
  generate->add_option("--t-end", gen.t_end, "Last time (s)");
  generate->add_option("--step", gen.step, "Time step (s)");
  generate->add_option("--coeffs", gen.coeffs, "Cubic coefficients")
      ->check(CLI::IsMember({"paper", "refit"}));

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit circular models and report AIC and KS");
  fit_cmd->fallthrough();
  fit_cmd->add_option("--model", fit.model, "Model to fit")
      ->check(CLI::IsMember({"hcwe", "we", "twe", "wl", "vonmises", "all"}));
  fit_cmd->add_option("--data", fit.data, "time_s,angle_rad CSV (default: pseudo data)");
  fit_cmd->add_option("--bins", fit.bins, "Histogram bins for density plot data");

  SequentialOptions seq;
  auto* seq_cmd = app.add_subcommand("sequential", "Run the sequential interval analysis");
  seq_cmd->fallthrough();
  seq_cmd->add_option("--d", seq.d, "Half-widths")->delimiter(',');
  seq_cmd->add_option("--m", seq.m, "Pilot sample size");
  seq_cmd->add_option("--alpha", seq.alpha, "Significance level");
  seq_cmd->add_option("--subsample", seq.subsample, "Subsample size");
  seq_cmd->add_option("--order", seq.order, "Order of the sorted subsample")
      ->check(CLI::IsMember({"ascending", "descending"}));
  seq_cmd->add_option("--data", seq.data, "time_s,angle_rad CSV (default: pseudo data)");

  CoverageOptions cov;
  auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo coverage and efficiency");
  cov_cmd->fallthrough();
  cov_cmd->add_option("--lambda", cov.lambda, "True decay rate");
  cov_cmd->add_option("--d", cov.d, "Half-width");
  cov_cmd->add_option("--m", cov.m, "Pilot sample size");
  cov_cmd->add_option("--alpha", cov.alpha, "Significance level");
  cov_cmd->add_option("--reps", cov.reps, "Replications");
  cov_cmd->add_option("--threads", cov.threads, "Worker threads (0 = all cores)");

  int table = 0;
  auto* rep_cmd = app.add_subcommand("reproduce", "Reproduce a published table");
  rep_cmd->fallthrough();
  rep_cmd->add_option("--table", table, "Table number (1, 2 or 3)")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*generate) cmd_generate(gen, global, out);
    if (*fit_cmd) return cmd_fit(fit, global, out, err);
    if (*seq_cmd) cmd_sequential(seq, global, out);
    if (*cov_cmd) cmd_coverage(cov, global, out);
    if (*rep_cmd) cmd_reproduce(table, global, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace circseq::cli
