#include <doctest.h>

#include <filesystem>
#include <random>

#include "margin_guard/errors.hpp"
#include "margin_guard/io.hpp"
#include "support.hpp"

using namespace margin_guard;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "margin_guard_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("CSV rows: header, comments and blank lines") {
  const auto rows = io::parse_csv_rows("x1,x2\n# note\n\n1.5, -2\n3e-1,4\n", "mem");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<double>{1.5, -2.0});
  CHECK(rows[1] == std::vector<double>{0.3, 4.0});
  CHECK(io::parse_csv_rows("1,2\n3,4\n", "mem").size() == 2);  // no header

  try {
    io::parse_csv_rows("x1,x2\n1,2\n3,oops\n", "pts.csv");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("pts.csv: line 3") != std::string::npos);
  }
}

TEST_CASE("ragged CSV names the offending record") {
  const auto path = scratch("ragged.csv");
  io::write_text_file(path, "x1,x2\n1,2\n3,4,5\n");
  try {
    io::read_points_file(path);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("JSON config documents") {
  const auto doc = io::parse_config_json(
      io::json::parse(R"({"points": [[0, 1], [2, 3]], "centers": [[-1, 0], [1, 0]]})"), "mem");
  REQUIRE(doc.points);
  REQUIRE(doc.centers);
  CHECK(doc.points->size() == 2);
  CHECK(doc.centers->size() == 2);

  const auto bare = io::parse_config_json(io::json::parse("[[0], [1], [2]]"), "mem");
  CHECK(bare.points->dim() == 1);

  CHECK_THROWS_AS(io::parse_config_json(io::json::parse(R"({"points": [[0, "a"], [1, 2]]})"), "m"),
                  InputError);
  CHECK_THROWS_AS(io::parse_config_json(io::json::parse(R"({"other": 1})"), "m"), InputError);
  CHECK_THROWS_AS(io::parse_config_json(io::json::parse(R"({"centers": [[0, 0], [0, 0]]})"), "m"),
                  InputError);

  const auto bad = scratch("bad.json");
  io::write_text_file(bad, "{ not json");
  CHECK_THROWS_AS(io::read_config_file(bad), InputError);
  CHECK_THROWS_AS(io::read_config_file(scratch("missing.json")), InputError);
}

TEST_CASE("emitted configurations re-ingest bit-identically") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> exponent(-30.0, 30.0);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> coords(12);
    for (double& c : coords) c = mantissa(gen) * std::pow(10.0, exponent(gen));
    const PointConfig x(3, coords);

    const auto csv = scratch("rt.csv");
    io::write_text_file(csv, io::config_to_csv(x.rows()));
    CHECK(io::read_points_file(csv) == x);

    const auto js = scratch("rt.json");
    const CenterSet c(3, {0, 0, 0, 1, 1, 1});
    io::write_text_file(js, io::config_document(x, c).dump());
    const auto doc = io::read_config_file(js);
    CHECK(*doc.points == x);
    CHECK(*doc.centers == c);
  }
}

TEST_CASE("trajectory files: JSON and CSV agree") {
  const auto js = scratch("traj.json");
  io::write_text_file(js, R"({"centers": [[-1, 0], [1, 0]],
    "snapshots": [[[-2, 0], [0.1, 0]], [[-2, 0], [0.05, 0]], [[-2, 0], [-0.1, 0]]]})");
  const auto csv = scratch("traj.csv");
  io::write_text_file(csv, "t,x1,x2\n0,-2,0\n0,0.1,0\n1,-2,0\n1,0.05,0\n2,-2,0\n2,-0.1,0\n");

  const auto a = io::read_trajectory_file(js, std::nullopt);
  const CenterSet centers(2, {-1, 0, 1, 0});
  const auto b = io::read_trajectory_file(csv, centers);
  CHECK(a.horizon() == 2);
  CHECK(a.snapshots() == b.snapshots());
  CHECK(a.centers() == b.centers());

  CHECK_THROWS_AS(io::read_trajectory_file(csv, std::nullopt), InputError);  // no centers

  const auto gap = scratch("gap.csv");
  io::write_text_file(gap, "t,x1\n0,1\n0,2\n2,1\n2,2\n");
  CHECK_THROWS_AS(io::read_trajectory_file(gap, centers), InputError);

  const auto shape = scratch("shape.csv");
  io::write_text_file(shape, "t,x1,x2\n0,1,0\n0,2,0\n1,1,0\n1,2,0\n1,3,0\n");
  CHECK_THROWS_AS(io::read_trajectory_file(shape, centers), InputError);
}

TEST_CASE("partition JSON is sorted and 1-based") {
  const Partition p(4, {{3, 1}, {2, 0}});
  CHECK(io::partition_to_json(p).dump() == "[[1,3],[2,4]]");
  CHECK(io::partition_from_json(io::json::parse("[[2,4],[3,1]]"), 4) == p);
  CHECK_THROWS_AS(io::partition_from_json(io::json::parse("[[0,1]]"), 2), InputError);
}

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
