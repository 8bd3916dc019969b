#include <gtest/gtest.h>

#include <random>

#include "lacuna/config.hpp"

using namespace lacuna;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesAllKeys) {
  auto c = parse_config(
      "# reference well\n"
      "periodic.cos = [1.0, 0.25]\n"
      "periodic.sin = []\n"
      "periodic.mean = 0.5\n"
      "compact.kind = poschl_teller\n"
      "compact.params = [2, 1, 2]\n"
      "compact.x0 = 10   # support\n"
      "run.eps = [0.1, 0.05]\n"
      "run.bands = [1, 2]\n"
      "run.order = 6\n"
      "run.oracle = off\n"
      "run.tolerance = 1e-9\n"
      "output.format = json\n"
      "output.path = out.json\n");
  EXPECT_EQ(c.periodic_cos, (std::vector<double>{1.0, 0.25}));
  EXPECT_TRUE(c.periodic_sin.empty());
  EXPECT_EQ(c.energy_shift(), 0.5);
  EXPECT_EQ(c.compact_kind, "poschl_teller");
  EXPECT_EQ(c.compact_x0, 10.0);
  EXPECT_EQ(c.eps, (std::vector<double>{0.1, 0.05}));
  EXPECT_EQ(c.bands, (std::vector<int>{1, 2}));
  EXPECT_EQ(c.order, 6);
  EXPECT_FALSE(c.oracle);
  EXPECT_EQ(c.tolerance, 1e-9);
  EXPECT_EQ(c.format, "json");
  EXPECT_EQ(c.out, "out.json");
  EXPECT_NEAR(c.compact()(0.0), -2.0, 1e-15);
  EXPECT_NEAR(c.periodic()(0.0), 1.25, 1e-15);
}

TEST(Config, RoundTrip) {
  std::mt19937_64 g(41);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int t = 0; t < 50; ++t) {
    RunConfig c;
    for (int k = 0; k < 1 + t % 3; ++k) c.periodic_cos.push_back(U(g));
    for (int k = 0; k < t % 2; ++k) c.periodic_sin.push_back(U(g) / 7);
    c.periodic_mean = t % 4 ? U(g) : 0.0;
    if (t % 3) {
      c.compact_kind = "poly_bump";
      c.compact_params = {U(g), U(g) * 1e-7, 1.0 / 3.0};
      c.compact_x0 = 1.0 + std::abs(U(g));
    }
    for (int k = 0; k < t % 4; ++k) c.eps.push_back(0.01 + std::abs(U(g)) / 10);
    c.bands = t % 2 ? std::vector<int>{1, 3} : std::vector<int>{};
    c.order = t % 7;
    c.oracle = t % 2;
    c.tolerance = std::pow(10.0, -3 - t % 15);
    c.format = t % 2 ? "csv" : "json";
    c.out = t % 5 ? "" : "r" + std::to_string(t) + ".csv";
    auto back = parse_config(emit_config(c));
    EXPECT_EQ(back, c) << emit_config(c);
  }
}

TEST(Config, LineNumberedErrors) {
  EXPECT_EQ(error_of("periodic.cos = [1]\nrun.eps = [0.1, -2]\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(error_of("\n\nbogus = 1\n").rfind("line 3:", 0), 0u);
  EXPECT_EQ(error_of("run.order = 2.5\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(error_of("periodic.cos = 1, 2\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(error_of("run.eps = [0.1]\nrun.eps = [0.2]\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(error_of("compact.kind = square\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(error_of("compact.kind = bump\ncompact.params = [1]\ncompact.x0 = -1\n").rfind("line 3:", 0), 0u);
  EXPECT_EQ(error_of("run.tolerance = 0\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(error_of("output.format = xml\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(error_of("no equals sign\n").rfind("line 1:", 0), 0u);
}

TEST(Config, ValidateRejectsBadPotentials) {
  RunConfig c;
  c.periodic_mean = 1.0;  // constant only: zero-mean part vanishes
  EXPECT_THROW(validate(c), ConfigError);
  RunConfig d = parse_config("compact.kind = bump\ncompact.params = [1]\ncompact.x0 = 1\n");
  d.compact_params = {0.0};
  EXPECT_THROW(validate(d), ConfigError);
}
