#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "lossent/error.hpp"
#include "lossent/sweep.hpp"

using namespace lossent;

namespace {

SweepConfig small(const std::string& family, std::size_t t = 5, std::size_t p = 5) {
  SweepConfig c;
  c.family = family;
  c.theta_steps = t;
  c.phi_steps = p;
  c.chsh_grid = 16;
  c.resolution = 256;
  return c;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("serial and parallel sweeps are byte identical") {
  for (const char* f : {"w_nonlinear", "chsh_planes", "svetlichny_visibility", "ghz_family", "dicke_family"}) {
    SweepConfig a = small(f, 4, 4);
    SweepConfig b = a;
    b.parallel = false;
    CHECK(run_sweep(a) == run_sweep(b));
    CHECK(run_sweep(a) == run_sweep(a));
  }
}

TEST_CASE("sweep row counts and headers") {
  const auto w = csv_rows(run_sweep(small("w_nonlinear", 6, 3)));
  CHECK(w.front() == std::vector<std::string>{"theta", "phi", "value_A1", "value_A2", "value_A3", "flag"});
  CHECK(w.size() == 1 + 18);
  const auto c = csv_rows(run_sweep(small("chsh_planes", 3, 3)));
  CHECK(c.size() == 1 + 18);
  CHECK(c[1][0] == "xy");
  CHECK(c.back()[0] == "xz");
  const auto g = csv_rows(run_sweep(small("ghz_family", 3, 4)));
  CHECK(g.size() == 1 + 12);
}

TEST_CASE("svetlichny sweep matches the closed form for the A3 reduction") {
  const auto rows = csv_rows(run_sweep(small("svetlichny_visibility", 7, 7)));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i][0]), p = std::stod(rows[i][1]);
    const double a = std::sin(t) * std::cos(p), b = std::sin(t) * std::sin(p), g = std::cos(t);
    const double closed = 1.0 / (4 * b * g - 2 * a * a + 1);
    if (rows[i][5] == "nan") {
      CHECK((closed <= 0.0 || closed >= 1.0 - 1e-12));
    } else {
      CHECK(std::stod(rows[i][5]) == doctest::Approx(closed).epsilon(1e-6));
    }
  }
}

TEST_CASE("JSON output mirrors CSV") {
  SweepConfig c = small("w_nonlinear", 3, 3);
  const std::string csv = run_sweep(c);
  c.format = SweepFormat::Json;
  const auto j = nlohmann::json::parse(run_sweep(c));
  CHECK(j["columns"].size() == 6);
  CHECK(j["rows"].size() == 9);
  const auto rows = csv_rows(csv);
  CHECK(j["rows"][4]["value_A1"].get<double>() == std::stod(rows[5][2]));
}

TEST_CASE("Dicke family rows are all NPT on every cut") {
  const auto rows = csv_rows(run_sweep(small("dicke_family")));
  CHECK(rows.size() > 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][4] == "1");
    CHECK(std::stod(rows[i][5]) < 0.0);
  }
}

TEST_CASE("sweep config validation") {
  CHECK_THROWS_AS(run_sweep(small("bogus")), InvalidInput);
  CHECK_THROWS_AS(run_sweep(small("w_nonlinear", 1, 5)), InvalidInput);
  CHECK_THROWS_AS(run_sweep(small("ghz_family", 3, 5)), InvalidInput);
}
