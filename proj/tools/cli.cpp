#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robglasso/csv_io.hpp"
#include "robglasso/errors.hpp"
#include "robglasso/estimators.hpp"
#include "robglasso/format.hpp"
#include "robglasso/regression.hpp"
#include "robglasso/robust_scale.hpp"
#include "robglasso/simulation.hpp"

namespace robglasso::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240101;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<EstimatorId> parse_estimators(const std::vector<std::string>& names) {
  if (names.empty()) return {all_estimators().begin(), all_estimators().end()};
  std::vector<EstimatorId> ids;
  for (const auto& name : names) {
    try {
      ids.push_back(parse_estimator(name));
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  return ids;
}

template <typename Fn>
auto as_usage(Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  return os;
}

struct SelectionArgs {
  std::string mode = "cv";
  std::size_t folds = 5;
  std::optional<double> rho;
  std::string aggregation = "mean";
  std::uint64_t seed = kDefaultSeed;
};

void add_selection_flags(CLI::App* cmd, SelectionArgs& a) {
  cmd->add_option("--selection", a.mode, "rho selection: cv, bic or fixed")
      ->check(CLI::IsMember({"cv", "bic", "fixed"}))
      ->capture_default_str();
  cmd->add_option("--folds", a.folds, "cross-validation folds")->capture_default_str();
  cmd->add_option("--rho", a.rho, "penalty for --selection fixed");
  cmd->add_option("--aggregation", a.aggregation, "fold aggregation: mean or median")
      ->check(CLI::IsMember({"mean", "median"}))
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "seed for fold assignment")->capture_default_str();
}

SelectionSpec to_spec(const SelectionArgs& a) {
  SelectionSpec spec;
  spec.folds = a.folds;
  spec.seed = a.seed;
  spec.aggregation = a.aggregation == "median" ? FoldAggregation::Median : FoldAggregation::Mean;
  if (a.mode == "cv") {
    spec.mode = SelectionSpec::Mode::CrossValidation;
  } else if (a.mode == "bic") {
    spec.mode = SelectionSpec::Mode::Bic;
  } else {
    spec.mode = SelectionSpec::Mode::Fixed;
    if (!a.rho) throw UsageError("--selection fixed requires --rho");
    if (!(*a.rho > 0.0)) throw UsageError("--rho must be positive");
    spec.fixed_rho = *a.rho;
  }
  if (a.rho && spec.mode != SelectionSpec::Mode::Fixed)
    throw UsageError("--rho is only valid with --selection fixed");
  return spec;
}

ScaleEstimator scale_from(const std::string& name) {
  switch (as_usage([&] { return parse_scale_kind(name); })) {
    case ScaleKind::Qn: return ScaleEstimator::qn();
    case ScaleKind::Mad: return ScaleEstimator::mad();
    case ScaleKind::SampleSd: return ScaleEstimator::sample_sd();
  }
  return ScaleEstimator::qn();
}

void center_by_median(DataMatrix& x) {
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto col = x.column(j);
    const double m = median(col);
    for (double& v : col) v -= m;
  }
}

struct EstimateArgs {
  std::string data;
  bool header = false;
  std::string method = "GlassoGaussQn";
  std::string scale = "qn";
  bool center_median = false;
  double zero_tol = kDefaultZeroTol;
  std::string out;
  SelectionArgs sel;
};

int estimate_command(const EstimateArgs& a, std::ostream& out) {
  const EstimatorId id = as_usage([&] { return parse_estimator(a.method); });
  const ScaleEstimator scale = scale_from(a.scale);
  const SelectionSpec spec = to_spec(a.sel);

  const auto start = std::chrono::steady_clock::now();
  DataMatrix x = ingest_csv(a.data, a.header);
  if (x.rows() < 2) throw InvalidArgument("at least 2 observations are required");
  if (a.center_median) center_by_median(x);
  const EstimationResult res = estimate(id, x, spec, scale);
  const double elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  const fs::path dir(a.out);
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "theta.csv");
    write_matrix_csv(os, res.precision.theta);
  }
  std::size_t edges = 0;
  {
    auto os = open_out(dir / "edges.tsv");
    edges = write_edges_tsv(os, res.precision.theta, a.zero_tol);
  }
  std::size_t nonzeros = 0;
  for (double v : res.precision.theta.data()) nonzeros += std::fabs(v) > a.zero_tol;

  json summary;
  summary["method"] = std::string(to_string(id));
  summary["rho"] = res.precision.rho;
  summary["kkt_residual"] = res.precision.kkt_residual;
  summary["nonzeros"] = nonzeros;
  summary["edges"] = edges;
  summary["seed"] = a.sel.seed;
  summary["n"] = x.rows();
  summary["p"] = x.cols();
  summary["selection"] = a.sel.mode;
  summary["scale"] = std::string(to_string(scale.kind));
  summary["converged"] = res.precision.converged;
  summary["iterations"] = res.precision.iterations;
  if (res.selection) {
    summary["rho_grid"] = res.selection->grid.values;
    summary["rho_scores"] = res.selection->scores;
  }
  if (!x.column_names().empty()) summary["columns"] = x.column_names();
  summary["elapsed_ms"] = elapsed;
  {
    auto os = open_out(dir / "summary.json");
    os << summary.dump(2) << '\n';
  }
  out << "seed " << a.sel.seed << ", rho " << format_double(res.precision.rho) << ", "
      << edges << " edges, written to " << dir.string() << '\n';
  return 0;
}

struct SimulateArgs {
  std::string scheme = "banded";
  std::size_t p = 60;
  std::size_t n = 100;
  std::size_t m = 20;
  std::string contamination = "none";
  double epsilon = 0.0;
  double spike_mean = 10.0;
  double spike_var = 0.2;
  double df = 2.0;
  std::vector<std::string> estimators;
  std::uint64_t seed = 0;
  std::string out;
  std::string log;
  std::size_t threads = 1;
  std::size_t folds = 5;
  bool no_timing = false;
};

int simulate_command(const SimulateArgs& a, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.scheme.kind = as_usage([&] { return parse_scheme(a.scheme); });
  cfg.scheme.p = a.p;
  cfg.scheme.seed = a.seed;
  cfg.contamination.kind = as_usage([&] { return parse_contamination(a.contamination); });
  cfg.contamination.epsilon = a.epsilon;
  cfg.contamination.spike_mean = a.spike_mean;
  cfg.contamination.spike_var = a.spike_var;
  cfg.contamination.df = a.df;
  if (cfg.contamination.kind == ContaminationKind::None && a.epsilon > 0.0)
    cfg.contamination.kind = ContaminationKind::Cellwise;
  cfg.estimators = parse_estimators(a.estimators);
  cfg.n = a.n;
  cfg.replications = a.m;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.folds = a.folds;

  const EvaluationReport report = run_experiment(cfg);
  if (a.out.empty()) {
    write_report_csv(out, report, !a.no_timing);
  } else {
    auto os = open_out(a.out);
    write_report_csv(os, report, !a.no_timing);
  }
  if (!a.log.empty()) {
    auto os = open_out(a.log);
    write_report_jsonl(os, report, !a.no_timing);
  }
  return 0;
}

struct SweepArgs {
  std::string scheme = "banded";
  std::size_t p = 60;
  std::size_t n = 100;
  std::size_t m = 5;
  std::vector<double> epsilons = {0.0, 0.1, 0.2, 0.3, 0.4};
  double magnitude = 1e8;
  std::optional<double> spike_var;
  std::vector<std::string> estimators;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t threads = 1;
  std::size_t folds = 5;
};

int sweep_command(const SweepArgs& a, std::ostream& out) {
  SweepConfig cfg;
  cfg.scheme.kind = as_usage([&] { return parse_scheme(a.scheme); });
  cfg.scheme.p = a.p;
  cfg.scheme.seed = a.seed;
  cfg.epsilons = a.epsilons;
  cfg.estimators = parse_estimators(a.estimators);
  cfg.n = a.n;
  cfg.replications = a.m;
  cfg.magnitude = a.magnitude;
  if (a.spike_var) cfg.spike_var = *a.spike_var;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.folds = a.folds;
  const SweepResult result = as_usage([&] { return breakdown_sweep(cfg); });
  if (a.out.empty()) {
    write_sweep_csv(out, result);
  } else {
    auto os = open_out(a.out);
    write_sweep_csv(os, result);
  }
  return 0;
}

struct RegressArgs {
  std::string data;
  bool header = false;
  std::string response;
  std::string method = "GlassoGaussQn";
  std::string scale = "qn";
  std::string out;
  SelectionArgs sel;
};

std::size_t resolve_column(const DataMatrix& x, const std::string& name) {
  if (name.empty()) return x.cols() - 1;
  const auto& names = x.column_names();
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == name) return j;
  std::size_t idx = 0;
  const auto res = std::from_chars(name.data(), name.data() + name.size(), idx);
  if (res.ec != std::errc() || res.ptr != name.data() + name.size() || idx >= x.cols())
    throw UsageError("unknown response column '" + name + "'");
  return idx;
}

int regress_command(const RegressArgs& a, std::ostream& out) {
  const EstimatorId id = as_usage([&] { return parse_estimator(a.method); });
  const ScaleEstimator scale = scale_from(a.scale);
  const SelectionSpec spec = to_spec(a.sel);
  const DataMatrix data = ingest_csv(a.data, a.header);
  if (data.cols() < 2) throw InvalidArgument("regress needs at least two columns");
  const std::size_t target = resolve_column(data, a.response);

  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < data.cols(); ++j)
    if (j != target) keep.push_back(j);
  DataMatrix x(data.rows(), keep.size());
  std::vector<std::string> names;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    for (std::size_t i = 0; i < data.rows(); ++i) x(i, k) = data(i, keep[k]);
    names.push_back(data.column_names().empty() ? std::to_string(keep[k])
                                                : data.column_names()[keep[k]]);
  }
  const auto y = data.column(target);
  const RegressionResult res = regression_from_precision(x, y, id, spec, scale);

  std::ostringstream body;
  body << "variable,beta\n";
  for (std::size_t k = 0; k < names.size(); ++k)
    body << names[k] << ',' << format_double(res.beta[k]) << '\n';
  if (a.out.empty()) {
    out << body.str();
  } else {
    auto os = open_out(a.out);
    os << body.str();
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust sparse precision matrix estimation"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate a precision matrix from CSV data");
  estimate->add_option("--data", est.data, "input CSV")->required();
  estimate->add_flag("--header", est.header, "first line holds column names");
  estimate->add_option("--method", est.method, "estimator id (" + estimator_list() + ")")
      ->capture_default_str();
  estimate->add_option("--scale", est.scale, "marginal scale: qn, mad or sd")
      ->capture_default_str();
  estimate->add_flag("--center-median", est.center_median,
                     "subtract coordinatewise medians first");
  estimate->add_option("--zero-tol", est.zero_tol, "edge threshold")->capture_default_str();
  estimate->add_option("--out", est.out, "output directory")->required();
  add_selection_flags(estimate, est.sel);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo comparison");
  simulate->add_option("--scheme", sim.scheme, "banded, sparse, dense or diagonal")
      ->capture_default_str();
  simulate->add_option("--p", sim.p)->capture_default_str();
  simulate->add_option("--n", sim.n)->capture_default_str();
  simulate->add_option("--M", sim.m, "replications")->capture_default_str();
  simulate->add_option("--contamination", sim.contamination, "none, cellwise or t")
      ->capture_default_str();
  simulate->add_option("--epsilon", sim.epsilon, "cellwise contamination fraction")
      ->capture_default_str();
  simulate->add_option("--spike-mean", sim.spike_mean)->capture_default_str();
  simulate->add_option("--spike-var", sim.spike_var)->capture_default_str();
  simulate->add_option("--df", sim.df, "degrees of freedom for --contamination t")
      ->capture_default_str();
  simulate->add_option("--estimators", sim.estimators, "comma separated ids (default all)")
      ->delimiter(',');
  simulate->add_option("--seed", sim.seed, "master seed")->required();
  simulate->add_option("--out", sim.out, "summary CSV (default stdout)");
  simulate->add_option("--log", sim.log, "per-replication JSON lines");
  simulate->add_option("--threads", sim.threads)->capture_default_str();
  simulate->add_option("--folds", sim.folds)->capture_default_str();
  simulate->add_flag("--no-timing", sim.no_timing, "omit the timing column");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "contamination sweep with the breakdown metric");
  sweep->add_option("--scheme", sw.scheme)->capture_default_str();
  sweep->add_option("--p", sw.p)->capture_default_str();
  sweep->add_option("--n", sw.n)->capture_default_str();
  sweep->add_option("--M", sw.m, "replications")->capture_default_str();
  sweep->add_option("--epsilons", sw.epsilons)->delimiter(',')->capture_default_str();
  sweep->add_option("--magnitude", sw.magnitude, "spike mean")->capture_default_str();
  sweep->add_option("--spike-var", sw.spike_var, "spike variance (default 0.2 * magnitude)");
  sweep->add_option("--estimators", sw.estimators)->delimiter(',');
  sweep->add_option("--seed", sw.seed, "master seed")->required();
  sweep->add_option("--out", sw.out, "CSV (default stdout)");
  sweep->add_option("--threads", sw.threads)->capture_default_str();
  sweep->add_option("--folds", sw.folds)->capture_default_str();

  RegressArgs reg;
  auto* regress = app.add_subcommand("regress", "regression coefficients from a joint precision");
  regress->add_option("--data", reg.data, "input CSV")->required();
  regress->add_flag("--header", reg.header);
  regress->add_option("--response", reg.response, "response column name or index (default last)");
  regress->add_option("--method", reg.method)->capture_default_str();
  regress->add_option("--scale", reg.scale)->capture_default_str();
  regress->add_option("--out", reg.out, "coefficient CSV (default stdout)");
  add_selection_flags(regress, reg.sel);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*estimate) return estimate_command(est, out);
    if (*simulate) return simulate_command(sim, out);
    if (*sweep) return sweep_command(sw, out);
    if (*regress) return regress_command(reg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace robglasso::cli
