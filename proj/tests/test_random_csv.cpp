#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "dcggm/csv.hpp"
#include "dcggm/random.hpp"
#include "support.hpp"

using namespace dcggm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dcggm-tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("counter stream is position addressable") {
  CounterRng a(42);
  std::vector<double> seq;
  for (int i = 0; i < 10; ++i) seq.push_back(a.next_normal());
  const CounterRng b(42);
  for (int i = 9; i >= 0; --i) CHECK(b.normal_at(static_cast<std::uint64_t>(i)) == seq[static_cast<std::size_t>(i)]);
  CHECK(CounterRng(43).normal_at(0) != seq[0]);
}

TEST_CASE("uniform draws stay in the open unit interval with a sane mean") {
  CounterRng r(5);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.next_uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 20000 - 0.5) < 0.01);
}

TEST_CASE("normal draws have unit variance") {
  CounterRng r(9);
  double s1 = 0.0, s2 = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const double z = r.next_normal();
    s1 += z;
    s2 += z * z;
  }
  CHECK(std::abs(s1 / n) < 0.03);
  CHECK(std::abs(s2 / n - 1.0) < 0.04);
}

TEST_CASE("derived seeds differ by stage and are stable") {
  CHECK(derive_seed(1, "precision") == derive_seed(1, "precision"));
  CHECK(derive_seed(1, "precision") != derive_seed(1, "samples"));
  CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 4, 3));
}

TEST_CASE("permutation is a bijection") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto perm = permutation(37, seed);
    std::set<std::size_t> seen(perm.begin(), perm.end());
    CHECK(seen.size() == 37);
    CHECK(*seen.rbegin() == 36);
  }
  CHECK(permutation(20, 1) == permutation(20, 1));
  CHECK(permutation(20, 1) != permutation(20, 2));
}

TEST_CASE("next_below covers its range uniformly") {
  CounterRng r(3);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[r.next_below(7)];
  for (int h : hist) CHECK(std::abs(h - 1000) < 150);
}

TEST_CASE("matrix csv round trip is exact") {
  const SymMatrix m = testing::random_spd(6, 8);
  const auto path = scratch("m.csv");
  csv::write_matrix(path, m);
  CHECK(csv::read_matrix(path) == m);
}

TEST_CASE("numeric csv round trip is exact") {
  const Eigen::MatrixXd x = testing::gaussian(7, 3, 4);
  const auto path = scratch("x.csv");
  csv::write_numeric(path, x);
  CHECK(csv::read_numeric(path) == x);
}

TEST_CASE("read_matrix rejects malformed input") {
  const auto path = scratch("bad.csv");
  {
    std::ofstream(path) << "1,2\n3\n";
  }
  CHECK(testing::error_kind([&] { csv::read_matrix(path); }) == ErrorKind::Schema);
  {
    std::ofstream(path) << "1,2\n3,1\n";
  }
  CHECK(testing::error_kind([&] { csv::read_matrix(path); }) == ErrorKind::Schema);
  CHECK(testing::error_kind([&] { csv::read_matrix(scratch("missing.csv")); }) == ErrorKind::Io);
}

TEST_CASE("table round trip and column lookup") {
  csv::Table t{{"a", "b"}, {{"1", "x"}, {"2", "y"}}};
  const auto path = scratch("t.csv");
  csv::write_table(path, t);
  const auto back = csv::read_table(path);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("b") == 1);
  CHECK(testing::error_kind([&] { back.column("zzz"); }) == ErrorKind::Schema);
}
