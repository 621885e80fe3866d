#include "dcggm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dcggm/penalties.hpp"
#include "dcggm/random.hpp"

namespace dcggm {

using nlohmann::json;

namespace {

template <class T>
std::vector<T> nonempty_list(const json& j, const char* key) {
  auto v = j.get<std::vector<T>>();
  if (v.empty()) throw Error(ErrorKind::Schema, std::string(key) + " must be a nonempty list");
  return v;
}

std::uint64_t parse_seed(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw Error(ErrorKind::Schema, "master_seed must be >= 0");
    return static_cast<std::uint64_t>(v);
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    char* end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, 0);
    if (s.empty() || *end != '\0') throw Error(ErrorKind::Schema, "master_seed: bad integer '" + s + "'");
    return v;
  }
  throw Error(ErrorKind::Schema, "master_seed must be an integer");
}

void apply_solver(const json& j, MethodSettings& m) {
  static const std::set<std::string> known{"glasso_tol", "glasso_max_sweeps", "inner_tol",   "dc_eps",
                                           "dc_max_outer", "dc_alpha",        "scad_a",      "adapt_gamma",
                                           "lla_rounds",  "zero_tol"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw Error(ErrorKind::Schema, "unknown solver key '" + key + "'");
  if (j.contains("glasso_tol")) m.glasso.tol = j["glasso_tol"].get<double>();
  if (j.contains("glasso_max_sweeps")) m.glasso.max_sweeps = j["glasso_max_sweeps"].get<int>();
  if (j.contains("inner_tol")) m.glasso.inner_tol = j["inner_tol"].get<double>();
  if (j.contains("dc_eps")) m.dc.eps = j["dc_eps"].get<double>();
  if (j.contains("dc_max_outer")) m.dc.max_outer = j["dc_max_outer"].get<int>();
  if (j.contains("dc_alpha")) m.dc.alpha = j["dc_alpha"].get<double>();
  if (j.contains("scad_a")) m.scad_a = j["scad_a"].get<double>();
  if (j.contains("adapt_gamma")) m.adapt_gamma = j["adapt_gamma"].get<double>();
  if (j.contains("lla_rounds")) m.lla_rounds = j["lla_rounds"].get<int>();
  if (j.contains("zero_tol")) m.zero_tol = j["zero_tol"].get<double>();
  m.dc.inner = m.glasso;
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Schema, "config must be a JSON object");
  static const std::set<std::string> known{"kinds",   "p_list",     "n_rule",      "n_edges",      "replicates",
                                           "methods", "grid_points", "folds",      "targets",      "master_seed",
                                           "parallelism", "output_dir", "bench_runs", "record_timing", "solver"};
  RunConfig c;
  try {
    for (const auto& [key, _] : j.items())
      if (!known.count(key)) throw Error(ErrorKind::Schema, "unknown config key '" + key + "'");
    if (j.contains("kinds")) {
      c.kinds.clear();
      for (const auto& k : nonempty_list<std::string>(j["kinds"], "kinds")) c.kinds.push_back(parse_graph_kind(k));
    }
    if (j.contains("p_list")) c.p_list = nonempty_list<Index>(j["p_list"], "p_list");
    if (j.contains("n_rule")) {
      const auto& r = j["n_rule"];
      if (r.contains("ratios") == r.contains("values")) {
        throw Error(ErrorKind::Schema, "n_rule needs exactly one of 'ratios' or 'values'");
      }
      if (r.contains("ratios")) {
        c.n_ratios = nonempty_list<double>(r["ratios"], "n_rule.ratios");
        c.n_values.clear();
      } else {
        c.n_values = nonempty_list<Index>(r["values"], "n_rule.values");
        c.n_ratios.clear();
      }
    }
    if (j.contains("n_edges")) c.n_edges = j["n_edges"].get<Index>();
    if (j.contains("replicates")) c.replicates = j["replicates"].get<int>();
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : nonempty_list<std::string>(j["methods"], "methods")) c.methods.push_back(parse_method(m));
    }
    if (j.contains("grid_points")) c.grid_points = j["grid_points"].get<int>();
    if (j.contains("folds")) c.folds = j["folds"].get<int>();
    if (j.contains("targets")) c.targets = nonempty_list<Index>(j["targets"], "targets");
    if (j.contains("master_seed")) c.master_seed = parse_seed(j["master_seed"]);
    if (j.contains("parallelism")) c.parallelism = j["parallelism"].get<int>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("bench_runs")) c.bench_runs = j["bench_runs"].get<int>();
    if (j.contains("record_timing")) c.record_timing = j["record_timing"].get<bool>();
    if (j.contains("solver")) apply_solver(j["solver"], c.settings);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("config: ") + e.what());
  }
  if (c.replicates < 1 || c.grid_points < 2 || c.folds < 2 || c.parallelism < 1 || c.bench_runs < 1 ||
      c.n_edges < 0) {
    throw Error(ErrorKind::Schema, "config: replicates, grid_points, folds, parallelism or bench_runs out of range");
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(ss.str());
}

int effective_parallelism(const RunConfig& config) {
  if (const char* env = std::getenv("DCGGM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*env != '\0' && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return config.parallelism;
}

std::vector<Scenario> scenarios(const RunConfig& config) {
  std::vector<Scenario> out;
  for (GraphKind kind : config.kinds) {
    for (Index p : config.p_list) {
      if (!config.n_values.empty()) {
        for (Index n : config.n_values) out.push_back({kind, p, n});
      } else {
        for (double r : config.n_ratios) out.push_back({kind, p, static_cast<Index>(std::llround(r * double(p)))});
      }
    }
  }
  return out;
}

std::uint64_t dataset_seed(std::uint64_t master_seed, const Scenario& sc, int replicate) {
  return derive_seed(derive_seed(master_seed, to_string(sc.kind)), static_cast<std::uint64_t>(sc.p),
                     static_cast<std::uint64_t>(sc.n), static_cast<std::uint64_t>(replicate));
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

void fill_metrics(ResultRow& row, const SymMatrix& omega_hat, const GroundTruth& gt, double zero_tol) {
  row.counts = confusion(omega_hat, gt.omega_true, zero_tol);
  row.precision = precision(row.counts);
  row.recall = recall(row.counts);
  row.f1 = f1_score(row.counts);
}

ResultRow base_row(const Scenario& sc, int replicate, Method m, const char* mode) {
  ResultRow row;
  row.kind = sc.kind;
  row.p = sc.p;
  row.n = sc.n;
  row.replicate = replicate;
  row.method = m;
  row.mode = mode;
  return row;
}

std::vector<double> grid_for(Method m, const SymMatrix& s, int points) {
  if (uses_lambda(m)) return lambda_grid(s, points);
  std::vector<double> out;
  for (Index k : k_grid(s.dim(), points)) out.push_back(double(k));
  return out;
}

}  // namespace

Experiment1Output run_experiment1(const RunConfig& config) {
  const auto scs = scenarios(config);
  const std::size_t n_methods = config.methods.size();
  const std::size_t reps = static_cast<std::size_t>(config.replicates);
  const std::size_t cells = scs.size() * reps * n_methods;

  std::vector<ResultRow> rows(cells);
  std::vector<CvResult> cv(cells);
  parallel_for(cells, effective_parallelism(config), [&](std::size_t cell) {
    const std::size_t mi = cell % n_methods;
    const std::size_t rep = (cell / n_methods) % reps;
    const Scenario& sc = scs[cell / (n_methods * reps)];
    const Method m = config.methods[mi];
    ResultRow row = base_row(sc, static_cast<int>(rep), m, "cv");
    try {
      const auto seed = dataset_seed(config.master_seed, sc, static_cast<int>(rep));
      const auto [gt, ds] = make_dataset(sc.kind, sc.p, sc.n, config.n_edges, seed);
      auto res = cross_validate(m, ds.x, ds.s, grid_for(m, ds.s, config.grid_points), config.folds,
                                derive_seed(seed, "folds"), config.settings);
      row.param = res.chosen;
      row.edges = res.chosen_edges;
      row.constraint_gap = res.refit.constraint_gap;
      row.fit_seconds = config.record_timing ? res.refit.seconds : 0.0;
      fill_metrics(row, res.refit.omega, gt, config.settings.zero_tol);
      cv[cell] = std::move(res);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows[cell] = std::move(row);
  });

  Experiment1Output out;
  out.rows = rows;
  // Curves: average over replicates per grid position (grids share length per method).
  for (std::size_t si = 0; si < scs.size(); ++si) {
    ScenarioCurves curves{scs[si], {}};
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      std::vector<double> param, edges, ll;
      std::vector<int> count;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const std::size_t cell = (si * reps + rep) * n_methods + mi;
        if (!rows[cell].ok()) continue;
        const auto& r = cv[cell];
        if (param.empty()) {
          param.assign(r.grid.size(), 0.0);
          edges.assign(r.grid.size(), 0.0);
          ll.assign(r.grid.size(), 0.0);
          count.assign(r.grid.size(), 0);
        }
        for (std::size_t i = 0; i < std::min(param.size(), r.grid.size()); ++i) {
          if (!std::isfinite(r.mean_holdout_ll[i])) continue;
          param[i] += r.grid[i];
          edges[i] += r.mean_edges[i];
          ll[i] += r.mean_holdout_ll[i];
          ++count[i];
        }
      }
      for (std::size_t i = 0; i < param.size(); ++i) {
        if (count[i] == 0) continue;
        curves.points.push_back({config.methods[mi], param[i] / count[i], edges[i] / count[i], ll[i] / count[i]});
      }
    }
    out.curves.push_back(std::move(curves));
  }
  return out;
}

std::vector<ResultRow> run_experiment2(const RunConfig& config) {
  const auto scs = scenarios(config);
  const std::size_t n_methods = config.methods.size();
  const std::size_t n_targets = config.targets.size();
  const std::size_t reps = static_cast<std::size_t>(config.replicates);
  const std::size_t cells = scs.size() * reps * n_methods * n_targets;

  std::vector<ResultRow> rows(cells);
  parallel_for(cells, effective_parallelism(config), [&](std::size_t cell) {
    const std::size_t ti = cell % n_targets;
    const std::size_t mi = (cell / n_targets) % n_methods;
    const std::size_t rep = (cell / (n_targets * n_methods)) % reps;
    const Scenario& sc = scs[cell / (n_targets * n_methods * reps)];
    const Method m = config.methods[mi];
    ResultRow row = base_row(sc, static_cast<int>(rep), m, "fixed");
    row.target = config.targets[ti];
    try {
      const auto seed = dataset_seed(config.master_seed, sc, static_cast<int>(rep));
      const auto [gt, ds] = make_dataset(sc.kind, sc.p, sc.n, config.n_edges, seed);
      auto cal = calibrate_edges(m, ds.s, row.target, config.settings);
      row.param = cal.param;
      row.edges = cal.achieved_edges;
      row.exact = cal.exact;
      row.constraint_gap = cal.fit.constraint_gap;
      row.fit_seconds = config.record_timing ? cal.fit.seconds : 0.0;
      fill_metrics(row, cal.fit.omega, gt, config.settings.zero_tol);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows[cell] = std::move(row);
  });
  return rows;
}

double median_abs_offdiag(const SymMatrix& s) {
  std::vector<double> v;
  for (Index k = 0; k < s.dim(); ++k)
    for (Index j = 0; j < k; ++j) v.push_back(std::abs(s(j, k)));
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<BenchRow> run_bench(const RunConfig& config) {
  const auto scs = scenarios(config);
  const std::size_t n_methods = config.methods.size();
  const std::size_t runs = static_cast<std::size_t>(config.bench_runs);
  const std::size_t cells = scs.size() * runs * n_methods;
  std::vector<double> seconds(cells, std::numeric_limits<double>::quiet_NaN());

  // Timing runs stay sequential so concurrent fits do not distort each other.
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const std::size_t mi = cell % n_methods;
    const std::size_t run = (cell / n_methods) % runs;
    const Scenario& sc = scs[cell / (n_methods * runs)];
    const Method m = config.methods[mi];
    try {
      const auto seed = dataset_seed(config.master_seed, sc, static_cast<int>(run));
      const auto [gt, ds] = make_dataset(sc.kind, sc.p, sc.n, config.n_edges, seed);
      const double param = m == Method::dc ? double(sc.p + 2 * ((sc.p * (sc.p - 1)) / 4)) : median_abs_offdiag(ds.s);
      seconds[cell] = fit_method(m, ds.s, param, config.settings).seconds;
    } catch (const Error&) {
    }
  }

  // Aggregate over kinds and runs for each (method, p, n), in first-seen order.
  std::vector<BenchRow> out;
  std::vector<int> counts;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!std::isfinite(seconds[cell])) continue;
    const Method m = config.methods[cell % n_methods];
    const Scenario& sc = scs[cell / (n_methods * runs)];
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const BenchRow& r) { return r.method == m && r.p == sc.p && r.n == sc.n; });
    if (it == out.end()) {
      out.push_back({m, sc.p, sc.n, 0.0});
      counts.push_back(0);
      it = out.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - out.begin());
    it->seconds_mean += seconds[cell];
    ++counts[idx];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].seconds_mean /= counts[i];
  return out;
}

namespace {

std::string fmt(double v) { return csv::format_double(v); }
std::string fmt(Index v) { return std::to_string(v); }

}  // namespace

csv::Table results_table(const std::vector<ResultRow>& rows) {
  csv::Table t;
  t.header = {"kind", "p", "n", "replicate", "method", "mode", "param", "edges", "tp", "fp", "fn",
              "precision", "recall", "f1", "fit_seconds"};
  for (const auto& r : rows) {
    if (!r.ok()) continue;
    t.rows.push_back({std::string(to_string(r.kind)), fmt(r.p), fmt(r.n), std::to_string(r.replicate),
                      std::string(to_string(r.method)), r.mode, fmt(r.param), fmt(r.edges), fmt(r.counts.tp),
                      fmt(r.counts.fp), fmt(r.counts.fn), fmt(r.precision), fmt(r.recall), fmt(r.f1),
                      fmt(r.fit_seconds)});
  }
  return t;
}

std::vector<ResultRow> parse_results(const csv::Table& t) {
  const auto c_kind = t.column("kind"), c_p = t.column("p"), c_n = t.column("n"), c_rep = t.column("replicate"),
             c_method = t.column("method"), c_mode = t.column("mode"), c_param = t.column("param"),
             c_edges = t.column("edges"), c_tp = t.column("tp"), c_fp = t.column("fp"), c_fn = t.column("fn"),
             c_prec = t.column("precision"), c_rec = t.column("recall"), c_f1 = t.column("f1"),
             c_sec = t.column("fit_seconds");
  auto num = [](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw Error(ErrorKind::Schema, "results: bad number '" + s + "'");
    return v;
  };
  std::vector<ResultRow> out;
  for (const auto& f : t.rows) {
    ResultRow r;
    r.kind = parse_graph_kind(f[c_kind]);
    r.p = static_cast<Index>(num(f[c_p]));
    r.n = static_cast<Index>(num(f[c_n]));
    r.replicate = static_cast<int>(num(f[c_rep]));
    r.method = parse_method(f[c_method]);
    r.mode = f[c_mode];
    r.param = num(f[c_param]);
    r.edges = static_cast<Index>(num(f[c_edges]));
    r.counts = {static_cast<Index>(num(f[c_tp])), static_cast<Index>(num(f[c_fp])), static_cast<Index>(num(f[c_fn]))};
    r.precision = num(f[c_prec]);
    r.recall = num(f[c_rec]);
    r.f1 = num(f[c_f1]);
    r.fit_seconds = num(f[c_sec]);
    out.push_back(std::move(r));
  }
  return out;
}

csv::Table curves_table(const std::vector<CvCurvePoint>& points) {
  csv::Table t;
  t.header = {"method", "param", "edges_mean", "holdout_ll_mean"};
  for (const auto& pt : points)
    t.rows.push_back({std::string(to_string(pt.method)), fmt(pt.param), fmt(pt.edges_mean), fmt(pt.holdout_ll_mean)});
  return t;
}

csv::Table bench_table(const std::vector<BenchRow>& rows) {
  csv::Table t;
  t.header = {"method", "p", "n", "seconds_mean"};
  for (const auto& r : rows)
    t.rows.push_back({std::string(to_string(r.method)), fmt(r.p), fmt(r.n), fmt(r.seconds_mean)});
  return t;
}

csv::Table calibration_table(const std::vector<ResultRow>& rows) {
  csv::Table t;
  t.header = {"kind", "p", "n", "replicate", "method", "target", "param", "edges", "exact", "constraint_gap"};
  for (const auto& r : rows) {
    if (!r.ok() || r.mode != "fixed") continue;
    t.rows.push_back({std::string(to_string(r.kind)), fmt(r.p), fmt(r.n), std::to_string(r.replicate),
                      std::string(to_string(r.method)), fmt(r.target), fmt(r.param), fmt(r.edges),
                      r.exact ? "true" : "false", fmt(r.constraint_gap)});
  }
  return t;
}

csv::Table failures_table(const std::vector<ResultRow>& rows) {
  csv::Table t;
  t.header = {"kind", "p", "n", "replicate", "method", "mode", "target", "error"};
  for (const auto& r : rows) {
    if (r.ok()) continue;
    std::string msg = r.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    t.rows.push_back({std::string(to_string(r.kind)), fmt(r.p), fmt(r.n), std::to_string(r.replicate),
                      std::string(to_string(r.method)), r.mode, fmt(r.target), msg});
  }
  return t;
}

}  // namespace dcggm
