#include "dcggm/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcggm/csv.hpp"
#include "dcggm/dc.hpp"
#include "dcggm/experiment.hpp"
#include "dcggm/glasso.hpp"
#include "dcggm/metrics.hpp"
#include "dcggm/penalties.hpp"
#include "dcggm/plot.hpp"
#include "dcggm/selection.hpp"
#include "dcggm/synthetic.hpp"

namespace dcggm {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Holds <dir>/.dcggm.lock for the lifetime of a command so two processes
/// cannot write into the same output directory at once.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / ".dcggm.lock") {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string());
    // "x" mode: fails if the file exists.
    FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw Error(ErrorKind::Io, "output directory in use: " + dir.string());
    std::fclose(f);
  }
  ~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

struct GenerateArgs {
  std::string kind;
  Index p = 0;
  Index n = 0;
  Index edges = 30;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& err) {
  const GraphKind kind = parse_graph_kind(a.kind);
  if (a.p < 2 || a.n < 1) throw Error(ErrorKind::InvalidArgument, "--p must be >= 2 and --n >= 1");
  const Index bound = kind == GraphKind::chain ? 2 * a.p - 3 : a.p * (a.p - 1) / 2;
  if (a.edges < 0 || a.edges > bound) {
    throw Error(ErrorKind::InvalidEdgeCount,
                "--edges must lie in [0, " + std::to_string(bound) + "]" +
                    (kind == GraphKind::chain ? " (2p-3 for chain)" : " (p(p-1)/2 for random)"));
  }
  DirLock lock(a.out);
  const auto [gt, ds] = make_dataset(kind, a.p, a.n, a.edges, a.seed);
  const fs::path dir(a.out);
  csv::write_numeric(dir / "samples.csv", ds.x);
  csv::write_matrix(dir / "s.csv", ds.s);
  csv::write_matrix(dir / "omega_true.csv", gt.omega_true);
  ordered_json meta;
  meta["kind"] = std::string(to_string(kind));
  meta["p"] = a.p;
  meta["n"] = a.n;
  meta["n_edges"] = a.edges;
  meta["seed"] = a.seed;
  meta["zeta"] = ds.zeta;
  ordered_json support = ordered_json::array();
  for (const auto& [j, k] : gt.support) support.push_back({j, k});
  meta["support"] = support;
  write_text(dir / "meta.json", meta.dump(2) + "\n");
  err << "generated " << to_string(kind) << " p=" << a.p << " n=" << a.n << " zeta=" << ds.zeta << "\n";
  return kExitOk;
}

struct FitArgs {
  std::string method;
  std::string input;
  std::optional<Index> k;
  std::optional<double> lambda;
  double a = 3.7;
  double gamma = 0.5;
  int lla_rounds = 3;
  double tol = 1e-5;
  int max_sweeps = 200;
  double eps = 1e-4;
  int max_outer = 50;
  std::string out;
};

int cmd_fit(const FitArgs& a, std::ostream& err) {
  const Method method = parse_method(a.method);
  MethodSettings settings;
  settings.glasso.tol = a.tol;
  settings.glasso.max_sweeps = a.max_sweeps;
  settings.dc.inner = settings.glasso;
  settings.dc.eps = a.eps;
  settings.dc.max_outer = a.max_outer;
  settings.scad_a = a.a;
  settings.adapt_gamma = a.gamma;
  settings.lla_rounds = a.lla_rounds;

  double param = 0.0;
  if (method == Method::dc) {
    if (!a.k) throw Error(ErrorKind::InvalidArgument, "--k is required for dc");
    param = double(*a.k);
  } else {
    if (!a.lambda) throw Error(ErrorKind::InvalidArgument, "--lambda is required for " + a.method);
    param = *a.lambda;
  }
  const SymMatrix s = csv::read_matrix(a.input);
  if (method == Method::dc && (*a.k < s.dim() || *a.k > s.dim() * s.dim())) {
    throw Error(ErrorKind::InvalidK, "--k must lie in [p, p^2] = [" + std::to_string(s.dim()) + ", " +
                                         std::to_string(s.dim() * s.dim()) + "]");
  }
  const double lmax = lambda_max(s);
  err << "lambda_max=" << csv::format_double(lmax) << "\n";

  DirLock lock(a.out);
  const auto start = std::chrono::steady_clock::now();
  const FitOutcome fit = fit_method(method, s, param, settings);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir(a.out);
  csv::write_matrix(dir / "omega.csv", fit.omega);
  ordered_json info;
  info["method"] = a.method;
  info["param"] = param;
  info["lambda_max"] = lmax;
  info["iterations"] = fit.iterations;
  info["converged"] = fit.converged;
  info["kkt_residual"] = fit.kkt_residual;
  if (method == Method::dc) info["constraint_gap"] = fit.constraint_gap;
  info["edges"] = fit.edges;
  info["wall_seconds"] = wall;
  write_text(dir / "fit.json", info.dump(2) + "\n");
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string mode;
  std::string out;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& err) {
  RunConfig config = load_run_config(a.config);
  if (!a.out.empty()) config.output_dir = a.out;
  if (a.mode != "cv" && a.mode != "fixed" && a.mode != "bench") {
    throw Error(ErrorKind::InvalidArgument, "--mode must be cv, fixed or bench");
  }
  const fs::path dir(config.output_dir);
  DirLock lock(dir);

  if (a.mode == "bench") {
    const auto rows = run_bench(config);
    if (rows.empty()) {
      err << "every bench run failed\n";
      return kExitNumeric;
    }
    csv::write_table(dir / "bench.csv", bench_table(rows));
    return kExitOk;
  }

  std::vector<ResultRow> rows;
  if (a.mode == "cv") {
    auto out = run_experiment1(config);
    rows = std::move(out.rows);
    if (out.curves.size() == 1) {
      csv::write_table(dir / "cv_curves.csv", curves_table(out.curves.front().points));
    } else {
      for (const auto& c : out.curves) {
        const std::string name = "cv_curves_" + std::string(to_string(c.scenario.kind)) + "_p" +
                                 std::to_string(c.scenario.p) + "_n" + std::to_string(c.scenario.n) + ".csv";
        csv::write_table(dir / name, curves_table(c.points));
      }
    }
  } else {
    rows = run_experiment2(config);
    csv::write_table(dir / "calibration.csv", calibration_table(rows));
  }
  csv::write_table(dir / "results.csv", results_table(rows));
  const auto failures = failures_table(rows);
  if (!failures.rows.empty()) {
    csv::write_table(dir / "failures.csv", failures);
    err << failures.rows.size() << " of " << rows.size() << " cells failed (see failures.csv)\n";
  }
  if (!rows.empty() && failures.rows.size() == rows.size()) return kExitNumeric;
  return kExitOk;
}

struct PlotArgs {
  std::string results;
  std::string kind;
  std::string out;
};

int cmd_plot(const PlotArgs& a, std::ostream&) {
  const PlotKind kind = parse_plot_kind(a.kind);
  const csv::Table table = csv::read_table(a.results);
  const std::string svg = render_svg(table, kind);
  write_text(a.out, svg);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Sparse precision-matrix estimation: DC (largest-K), graphical lasso, SCAD, adaptive lasso"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic dataset");
  g->add_option("--kind", gen.kind, "random | chain")->required();
  g->add_option("--p", gen.p, "Number of variables")->required();
  g->add_option("--n", gen.n, "Sample size")->required();
  g->add_option("--edges", gen.edges, "Number of true edges");
  g->add_option("--seed", gen.seed, "64-bit seed");
  g->add_option("--out", gen.out, "Output directory")->required();

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit one estimator to a covariance matrix");
  f->add_option("--method", fit.method, "dc | glasso | scad | adapt")->required();
  f->add_option("--input", fit.input, "Covariance CSV")->required();
  f->add_option("--k", fit.k, "Cardinality on vec(Omega) (dc)");
  f->add_option("--lambda", fit.lambda, "Penalty (glasso, scad, adapt)");
  f->add_option("--a", fit.a, "SCAD shape parameter");
  f->add_option("--gamma", fit.gamma, "Adaptive-lasso exponent");
  f->add_option("--lla-rounds", fit.lla_rounds, "SCAD reweighting rounds");
  f->add_option("--tol", fit.tol, "Graphical lasso tolerance");
  f->add_option("--max-sweeps", fit.max_sweeps, "Graphical lasso sweep limit");
  f->add_option("--eps", fit.eps, "DC stopping threshold on ||dOmega||_F^2");
  f->add_option("--max-outer", fit.max_outer, "DC outer-iteration limit");
  f->add_option("--out", fit.out, "Output directory")->required();

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Run a cross-validation, fixed-edge or timing study");
  e->add_option("--config", exp.config, "Run configuration JSON")->required();
  e->add_option("--mode", exp.mode, "cv | fixed | bench")->required();
  e->add_option("--out", exp.out, "Output directory (overrides output_dir)");

  PlotArgs plot;
  auto* pl = app.add_subcommand("plot", "Render an SVG chart from a results or curves CSV");
  pl->add_option("--results", plot.results, "results.csv / cv_curves.csv / bench-derived table")->required();
  pl->add_option("--kind", plot.kind, "f1 | edges | cvcurve | time")->required();
  pl->add_option("--out", plot.out, "Output SVG path")->required();

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*g) return cmd_generate(gen, err);
    if (*f) return cmd_fit(fit, err);
    if (*e) return cmd_experiment(exp, err);
    if (*pl) return cmd_plot(plot, err);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return ex.is_validation() ? kExitUsage : kExitNumeric;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace dcggm
