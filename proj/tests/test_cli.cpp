#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dcggm/cli.hpp"
#include "dcggm/csv.hpp"
#include "dcggm/experiment.hpp"
#include "dcggm/penalties.hpp"
#include "dcggm/metrics.hpp"

using namespace dcggm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dcggm-cli-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "dcggm");
  std::ostringstream err;
  const int code = run_cli(args, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

const char* kDeskConfig = R"({
  "kinds": ["chain"], "p_list": [10], "n_rule": {"values": [40]}, "n_edges": 8,
  "replicates": 1, "methods": ["dc", "glasso", "scad", "adapt"], "grid_points": 6,
  "folds": 3, "targets": [8], "master_seed": 1, "record_timing": false, "bench_runs": 1
})";

}  // namespace

TEST_CASE("cli: help and usage errors") {
  CHECK(cli({"--help"}) == kExitOk);
  CHECK(cli({}) == kExitUsage);
  CHECK(cli({"frobnicate"}) == kExitUsage);
  CHECK(cli({"generate", "--kind", "chain"}) == kExitUsage);
  CHECK(cli({"generate", "--kind", "chain", "--p", "ten", "--n", "5", "--out", "x"}) == kExitUsage);
}

TEST_CASE("cli generate") {
  const fs::path dir = scratch("generate");
  CHECK(cli({"generate", "--kind", "chain", "--p", "4", "--n", "20", "--edges", "5", "--seed", "7", "--out",
             dir.string()}) == kExitOk);
  for (const char* f : {"samples.csv", "s.csv", "omega_true.csv", "meta.json"}) CHECK(fs::exists(dir / f));
  CHECK_FALSE(fs::exists(dir / ".dcggm.lock"));
  const auto meta = nlohmann::json::parse(slurp(dir / "meta.json"));
  CHECK(meta["support"].size() == 5);
  CHECK(meta["kind"] == "chain");
  CHECK(csv::read_numeric(dir / "samples.csv").rows() == 20);
  CHECK(is_positive_definite(csv::read_matrix(dir / "s.csv")));

  const fs::path again = scratch("generate-again");
  CHECK(cli({"generate", "--kind", "chain", "--p", "4", "--n", "20", "--edges", "5", "--seed", "7", "--out",
             again.string()}) == kExitOk);
  for (const char* f : {"samples.csv", "s.csv", "omega_true.csv", "meta.json"}) CHECK(slurp(dir / f) == slurp(again / f));

  std::string err;
  CHECK(cli({"generate", "--kind", "chain", "--p", "10", "--n", "20", "--edges", "18", "--out",
             scratch("too-many").string()},
            &err) == kExitUsage);
  CHECK(err.find("17") != std::string::npos);
  CHECK(cli({"generate", "--kind", "grid", "--p", "10", "--n", "20", "--out", scratch("bad-kind").string()}) ==
        kExitUsage);
}

TEST_CASE("cli fit") {
  const fs::path data = scratch("fit-data");
  REQUIRE(cli({"generate", "--kind", "random", "--p", "8", "--n", "40", "--edges", "6", "--seed", "3", "--out",
               data.string()}) == kExitOk);
  const SymMatrix s = csv::read_matrix(data / "s.csv");
  const double lmax = lambda_max(s);

  const fs::path gl = scratch("fit-glasso");
  std::string err;
  CHECK(cli({"fit", "--method", "glasso", "--input", (data / "s.csv").string(), "--lambda", csv::format_double(lmax),
             "--out", gl.string()},
            &err) == kExitOk);
  CHECK(err.find("lambda_max=") != std::string::npos);
  CHECK(edge_count(csv::read_matrix(gl / "omega.csv")) == 0);

  const fs::path dc = scratch("fit-dc");
  CHECK(cli({"fit", "--method", "dc", "--input", (data / "s.csv").string(), "--k", "20", "--out", dc.string()}) ==
        kExitOk);
  const auto info = nlohmann::json::parse(slurp(dc / "fit.json"));
  CHECK(info["method"] == "dc");
  CHECK(info["wall_seconds"].get<double>() > 0.0);
  CHECK(info.contains("constraint_gap"));
  CHECK(info["edges"].get<Index>() == edge_count(csv::read_matrix(dc / "omega.csv")));

  for (const char* m : {"scad", "adapt"}) {
    CHECK(cli({"fit", "--method", m, "--input", (data / "s.csv").string(), "--lambda", "0.1", "--out",
               scratch(std::string("fit-") + m).string()}) == kExitOk);
  }

  CHECK(cli({"fit", "--method", "dc", "--input", (data / "s.csv").string(), "--k", "7", "--out",
             scratch("fit-bad-k").string()}) == kExitUsage);
  CHECK(cli({"fit", "--method", "dc", "--input", (data / "s.csv").string(), "--out", scratch("fit-no-k").string()}) ==
        kExitUsage);
  CHECK(cli({"fit", "--method", "glasso", "--input", (data / "missing.csv").string(), "--lambda", "0.1", "--out",
             scratch("fit-missing").string()}) == kExitUsage);

  const fs::path bad = scratch("fit-indefinite");
  write(bad / "s.csv", "1,2\n2,1\n");
  CHECK(cli({"fit", "--method", "glasso", "--input", (bad / "s.csv").string(), "--lambda", "0", "--out",
             (bad / "out").string()}) == kExitNumeric);
}

TEST_CASE("cli experiment and plot") {
  const fs::path dir = scratch("experiment");
  write(dir / "desk.json", kDeskConfig);

  const fs::path fixed = dir / "fixed";
  REQUIRE(cli({"experiment", "--config", (dir / "desk.json").string(), "--mode", "fixed", "--out", fixed.string()}) ==
          kExitOk);
  const auto table = csv::read_table(fixed / "results.csv");
  CHECK(table.rows.size() == 4);
  CHECK(fs::exists(fixed / "calibration.csv"));

  const fs::path fixed2 = dir / "fixed2";
  REQUIRE(cli({"experiment", "--config", (dir / "desk.json").string(), "--mode", "fixed", "--out", fixed2.string()}) ==
          kExitOk);
  CHECK(slurp(fixed / "results.csv") == slurp(fixed2 / "results.csv"));

  const fs::path cv = dir / "cv";
  REQUIRE(cli({"experiment", "--config", (dir / "desk.json").string(), "--mode", "cv", "--out", cv.string()}) ==
          kExitOk);
  CHECK(csv::read_table(cv / "results.csv").rows.size() == 4);
  CHECK(fs::exists(cv / "cv_curves.csv"));

  const fs::path bench = dir / "bench";
  REQUIRE(cli({"experiment", "--config", (dir / "desk.json").string(), "--mode", "bench", "--out", bench.string()}) ==
          kExitOk);
  CHECK(csv::read_table(bench / "bench.csv").rows.size() == 4);

  CHECK(cli({"experiment", "--config", (dir / "desk.json").string(), "--mode", "sweep", "--out",
             (dir / "x").string()}) == kExitUsage);
  write(dir / "bad.json", R"({"replicats": 2})");
  CHECK(cli({"experiment", "--config", (dir / "bad.json").string(), "--mode", "cv", "--out", (dir / "y").string()}) ==
        kExitUsage);

  const fs::path svg = dir / "f1.svg";
  REQUIRE(cli({"plot", "--results", (fixed / "results.csv").string(), "--kind", "f1", "--out", svg.string()}) ==
          kExitOk);
  const std::string text = slurp(svg);
  CHECK(text.rfind("<?xml", 0) == 0);
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
  for (const char* m : {"dc", "glasso", "scad", "adapt"})
    CHECK(text.find(std::string("data-method=\"") + m + "\"") != std::string::npos);
  const fs::path svg2 = dir / "f1-again.svg";
  REQUIRE(cli({"plot", "--results", (fixed / "results.csv").string(), "--kind", "f1", "--out", svg2.string()}) ==
          kExitOk);
  CHECK(slurp(svg2) == text);

  CHECK(cli({"plot", "--results", (cv / "cv_curves.csv").string(), "--kind", "cvcurve", "--out",
             (dir / "curve.svg").string()}) == kExitOk);

  write(dir / "empty.csv", slurp(fixed / "results.csv").substr(0, slurp(fixed / "results.csv").find('\n') + 1));
  CHECK(cli({"plot", "--results", (dir / "empty.csv").string(), "--kind", "f1", "--out", (dir / "e.svg").string()}) ==
        kExitUsage);
  CHECK(cli({"plot", "--results", (fixed / "results.csv").string(), "--kind", "pie", "--out",
             (dir / "p.svg").string()}) == kExitUsage);
}

TEST_CASE("cli desk preset run") {
  const fs::path dir = scratch("desk");
  write(dir / "desk.json", R"({"kinds": ["chain"], "p_list": [20], "n_rule": {"values": [40]}, "n_edges": 30,
      "replicates": 2, "methods": ["dc", "glasso"], "master_seed": 1, "record_timing": false})");
  REQUIRE(cli({"experiment", "--config", (dir / "desk.json").string(), "--mode", "cv", "--out", (dir / "a").string()}) ==
          kExitOk);
  CHECK(csv::read_table(dir / "a" / "results.csv").rows.size() == 4);
  REQUIRE(cli({"experiment", "--config", (dir / "desk.json").string(), "--mode", "cv", "--out", (dir / "b").string()}) ==
          kExitOk);
  CHECK(slurp(dir / "a" / "results.csv") == slurp(dir / "b" / "results.csv"));
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"desk_cv.json", "desk_fixed.json", "bench.json", "full_scale.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_run_config(fs::path(DCGGM_SOURCE_DIR) / "configs" / name));
  }
}

TEST_CASE("cli refuses an output directory that is in use") {
  const fs::path dir = scratch("locked");
  write(dir / ".dcggm.lock", "");
  std::string err;
  CHECK(cli({"generate", "--kind", "chain", "--p", "5", "--n", "10", "--edges", "3", "--out", dir.string()}, &err) ==
        kExitUsage);
  CHECK(err.find("in use") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "samples.csv"));
}
