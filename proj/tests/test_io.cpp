#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gle/io.hpp"

using namespace gle;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config parsing: comments, whitespace, typed access") {
  auto cfg = RunConfig::parse_text(
      "# experiment\n"
      "kernel.family = exponential\n"
      "kernel.lambda=2.5   # inline comment\n"
      "\n"
      "model.beta = 1e-2\n"
      "simulate.seed = 42\n");
  CHECK(cfg.get_string("kernel.family") == "exponential");
  CHECK(cfg.get_double("kernel.lambda") == 2.5);
  CHECK(cfg.get_double("model.beta") == 0.01);
  CHECK(cfg.get_u64("simulate.seed") == 42);
  CHECK(cfg.get_double("missing.key", 7.0) == 7.0);
  CHECK_THROWS_AS(cfg.get_string("missing.key"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse_text("no equals sign\n"), std::invalid_argument);
  CHECK_THROWS_AS(
      [&] {
        auto bad = RunConfig::parse_text("kernel.lambda = abc\n");
        return bad.get_double("kernel.lambda");
      }(),
      std::invalid_argument);
}

TEST_CASE("config hash is stable and order-insensitive") {
  auto a = RunConfig::parse_text("x.a = 1\nx.b = 2\n");
  auto b = RunConfig::parse_text("x.b = 2\nx.a = 1\n");
  CHECK(a.hash() == b.hash());
  b.set("x.b", "3");
  CHECK(a.hash() != b.hash());
}

TEST_CASE("kernel_from_config builds each family") {
  auto exp_cfg = RunConfig::parse_text("kernel.family = exponential\nkernel.lambda = 2\n");
  CHECK(kernel_from_config(exp_cfg).evaluate(0.0) == 1.0);

  auto pl = RunConfig::parse_text("kernel.family = power_law\nkernel.alpha = 0.5\n");
  CHECK(kernel_from_config(pl).evaluate(3.0) == doctest::Approx(0.5));

  auto pp = RunConfig::parse_text("kernel.family = pure_power\nkernel.alpha = 0.5\n");
  CHECK(kernel_from_config(pp).singular_at_origin());

  auto bad = RunConfig::parse_text("kernel.family = mystery\n");
  CHECK_THROWS_AS(kernel_from_config(bad), std::invalid_argument);
}

TEST_CASE("kernel table round trip through CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "gle_io_test";
  std::filesystem::create_directories(dir);
  const auto table_path = dir / "kernel.csv";
  {
    std::ofstream out(table_path, std::ios::binary);
    out << "t,K\n";
    out.precision(17);
    for (int i = 1; i <= 12; ++i)
      out << i << "," << 1.0 / i << "\n";
  }
  auto rows = read_kernel_table(table_path.string());
  REQUIRE(rows.size() == 12);
  CHECK(rows[3].first == 4.0);
  CHECK(rows[3].second == doctest::Approx(0.25));

  auto cfg = RunConfig::parse_text("kernel.family = tabulated\nkernel.tail = critical\n");
  cfg.set("kernel.table_path", table_path.string());
  auto k = kernel_from_config(cfg);
  CHECK(k.evaluate(6.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));

  // header is mandatory
  const auto headerless = dir / "bad.csv";
  {
    std::ofstream out(headerless, std::ios::binary);
    out << "1,1\n2,0.5\n";
  }
  CHECK_THROWS_AS(read_kernel_table(headerless.string()), std::invalid_argument);
}

TEST_CASE("csv writer format: metadata line, header, lf endings") {
  const auto dir = std::filesystem::temp_directory_path() / "gle_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  {
    const std::string cols[] = {"omega", "value"};
    CsvWriter w(path.string(), "glelab test config=deadbeef", cols);
    const double r1[] = {0.5, 1.0 / 3.0};
    w.row(r1);
  }
  const std::string text = slurp(path);
  CHECK(text.find("# glelab test config=deadbeef\n") == 0);
  CHECK(text.find("omega,value\n") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("\r") == std::string::npos);
}

TEST_CASE("log grid endpoints are exact") {
  auto g = log_grid(1e-3, 1e3, 7);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 1e3);
  CHECK(g.size() == 7);
  CHECK(g[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), std::invalid_argument);
}
