#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dcggm/csv.hpp"
#include "dcggm/selection.hpp"
#include "dcggm/synthetic.hpp"

namespace dcggm {

struct RunConfig {
  std::vector<GraphKind> kinds{GraphKind::random, GraphKind::chain};
  std::vector<Index> p_list{50, 100, 200, 400};
  /// n = round(ratio * p) for each ratio, unless explicit n values are given.
  std::vector<double> n_ratios{0.5, 1.0, 2.0};
  std::vector<Index> n_values;
  Index n_edges = 30;
  int replicates = 30;
  std::vector<Method> methods{Method::dc, Method::glasso, Method::scad, Method::adapt};
  int grid_points = 100;
  int folds = 5;
  std::vector<Index> targets{20, 30, 40};
  std::uint64_t master_seed = 0;
  int parallelism = 1;
  std::string output_dir = "out";
  /// Runs per (method, p, n) in bench mode.
  int bench_runs = 10;
  /// When false, fit_seconds is written as 0 so result files are byte-reproducible.
  bool record_timing = true;
  MethodSettings settings{};
};

/// Parse the JSON run configuration; unknown keys are rejected.
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// DCGGM_THREADS overrides the configured degree.
int effective_parallelism(const RunConfig& config);

struct Scenario {
  GraphKind kind = GraphKind::random;
  Index p = 0;
  Index n = 0;
};

std::vector<Scenario> scenarios(const RunConfig& config);
std::uint64_t dataset_seed(std::uint64_t master_seed, const Scenario& sc, int replicate);

struct ResultRow {
  GraphKind kind = GraphKind::random;
  Index p = 0;
  Index n = 0;
  int replicate = 0;
  Method method = Method::dc;
  std::string mode;  // "cv" or "fixed"
  double param = 0.0;
  Index edges = 0;
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double fit_seconds = 0.0;
  // Bookkeeping outside the results.csv schema.
  Index target = -1;
  bool exact = true;
  double constraint_gap = std::numeric_limits<double>::quiet_NaN();
  std::string error;

  bool ok() const { return error.empty(); }
};

struct CvCurvePoint {
  Method method = Method::dc;
  double param = 0.0;
  double edges_mean = 0.0;
  double holdout_ll_mean = 0.0;
};

struct ScenarioCurves {
  Scenario scenario;
  std::vector<CvCurvePoint> points;
};

struct Experiment1Output {
  std::vector<ResultRow> rows;
  std::vector<ScenarioCurves> curves;
};

/// Cross-validated selection for every scenario x replicate x method.
Experiment1Output run_experiment1(const RunConfig& config);

/// Edge-count calibration for every scenario x replicate x method x target.
std::vector<ResultRow> run_experiment2(const RunConfig& config);

struct BenchRow {
  Method method = Method::dc;
  Index p = 0;
  Index n = 0;
  double seconds_mean = 0.0;
};

/// Timing study: K = p + 2 * floor(p(p-1)/4) for dc, lambda = median |off-diag S| otherwise.
std::vector<BenchRow> run_bench(const RunConfig& config);

/// Runs body(i) for i in [0, count) on `threads` workers; each index exactly once.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

csv::Table results_table(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results(const csv::Table& table);
csv::Table curves_table(const std::vector<CvCurvePoint>& points);
csv::Table bench_table(const std::vector<BenchRow>& rows);
/// Target, exactness and constraint gap of fixed-mode rows.
csv::Table calibration_table(const std::vector<ResultRow>& rows);
csv::Table failures_table(const std::vector<ResultRow>& rows);

double median_abs_offdiag(const SymMatrix& s);

}  // namespace dcggm
