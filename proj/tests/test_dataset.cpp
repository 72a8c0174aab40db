#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "clagg/dataset.hpp"

using namespace clagg;
namespace fs = std::filesystem;

namespace {

// Frozen from tests/oracles/reference_oracles.py: blobs with n=10,
// centers (-4,0) and (4,0), stddev 0.5, seed 42.
constexpr double kBlobGolden[10][2] = {
    {-4.384496526910503, 0.8330592293571},
    {3.565776946264877, -1.3695755778321523},
    {-4.755487491500335, -0.46688002154677577},
    {3.795645707272353, -0.15876540993395408},
    {-3.6882849565686326, -0.13875213111160858},
    {4.376448224461467, -0.5179323870172292},
    {-3.3160888762092755, 0.31936315813884786},
    {3.5131532271417094, -0.14477809674678654},
    {-3.6712561784255144, 0.10756612735728448},
    {3.3585891617430192, 0.1354796601319226},
};

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "clagg_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("generate_blobs matches the scripted Box-Muller reference") {
  const Dataset d = generate_blobs(10, {{-4.0, 0.0}, {4.0, 0.0}}, 0.5, 42);
  REQUIRE(d.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    REQUIRE(d[i].x == Catch::Approx(kBlobGolden[i][0]).margin(1e-12));
    REQUIRE(d[i].y == Catch::Approx(kBlobGolden[i][1]).margin(1e-12));
  }
}

TEST_CASE("generate_blobs is a pure function of its arguments") {
  const Dataset a = generate_blobs(100, {{0, 0}, {5, 5}}, 1.5, 99);
  const Dataset b = generate_blobs(100, {{0, 0}, {5, 5}}, 1.5, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].x == b[i].x);  // bit-identical
    REQUIRE(a[i].y == b[i].y);
  }
}

TEST_CASE("blob points are assigned round-robin and stay near their center") {
  const std::vector<Point2D> centers = {{0, 0}, {10, 0}, {5, 8.66}};
  const Dataset d = generate_blobs(300, centers, 1.0, 7);
  REQUIRE(d.size() == 300);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Point2D& c = centers[i % 3];
    REQUIRE(distance(d[i], c) < 6.0);  // 6 sigma
  }
}

TEST_CASE("degenerate stddev collapses points onto the center") {
  const Dataset d = generate_blobs(3, {{0.0, 0.0}}, 1e-12, 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    REQUIRE(std::abs(d[i].x) < 1e-9);
    REQUIRE(std::abs(d[i].y) < 1e-9);
  }
}

TEST_CASE("generate_blobs rejects bad arguments") {
  REQUIRE_THROWS_AS(generate_blobs(10, {}, 1.0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_blobs(10, {{0, 0}}, 0.0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_blobs(10, {{0, 0}}, -1.0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_blobs(1, {{0, 0}, {1, 1}}, 1.0, 0),
                    std::invalid_argument);
}

TEST_CASE("csv round-trip is the identity on points") {
  const Dataset d = generate_blobs(57, {{-2, 3}, {4, -1}, {0, 9}}, 2.25, 4242);
  const fs::path path = temp_file("roundtrip.csv");
  save_csv(d, path);
  const Dataset back = load_csv(path);
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    REQUIRE(back[i].x == d[i].x);
    REQUIRE(back[i].y == d[i].y);
  }
}

TEST_CASE("load_csv accepts files with and without the x,y header") {
  const fs::path with_header = temp_file("with_header.csv");
  std::ofstream(with_header) << "x,y\n0,0\n1,1\n";
  REQUIRE(load_csv(with_header).size() == 2);

  const fs::path without = temp_file("without_header.csv");
  std::ofstream(without) << "0,0\n1,1\n";
  const Dataset d = load_csv(without);
  REQUIRE(d.size() == 2);
  REQUIRE(d[1].x == 1.0);
}

TEST_CASE("load_csv reports the malformed row") {
  const fs::path bad = temp_file("bad.csv");
  std::ofstream(bad) << "a,b\n0,0\n";
  REQUIRE_THROWS_WITH(load_csv(bad), Catch::Matchers::ContainsSubstring("row 1"));

  const fs::path bad2 = temp_file("bad2.csv");
  std::ofstream(bad2) << "0,0\n1,oops\n2,2\n";
  REQUIRE_THROWS_WITH(load_csv(bad2), Catch::Matchers::ContainsSubstring("row 2"));
}

TEST_CASE("load_csv rejects datasets with fewer than 2 points") {
  const fs::path tiny = temp_file("tiny.csv");
  std::ofstream(tiny) << "x,y\n1,2\n";
  REQUIRE_THROWS_AS(load_csv(tiny), std::runtime_error);
}

TEST_CASE("benchmark-like generator is deterministic and sums to 788") {
  const Dataset a = make_benchmark_like();
  const Dataset b = make_benchmark_like();
  REQUIRE(a.size() == 788);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].x == b[i].x);
    REQUIRE(a[i].y == b[i].y);
  }
}
