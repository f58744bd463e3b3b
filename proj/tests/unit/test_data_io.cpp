#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "permstat/data_io.hpp"
#include "permstat/error.hpp"

using namespace permstat;

namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_csv(text, "sample.csv");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

std::string message_of(std::string_view text) {
  try {
    parse_csv(text, "sample.csv");
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("csv with and without header") {
  const auto plain = parse_csv("1,2\n3,4.5\n");
  CHECK_FALSE(plain.header.has_value());
  CHECK(plain.data == DataMatrix{{1, 2}, {3, 4.5}});

  const auto named = parse_csv("a, b\r\n-1e3,+2\r\n\r\n0.25,7\r\n");
  REQUIRE(named.header.has_value());
  CHECK(*named.header == std::vector<std::string>{"a", "b"});
  CHECK(named.data == DataMatrix{{-1000, 2}, {0.25, 7}});

  const auto bom = parse_csv("\xEF\xBB\xBFx\n5\n6");
  CHECK(bom.data == DataMatrix{{5}, {6}});
}

TEST_CASE("csv errors name the source, row and column") {
  CHECK(code_of("1,2\n3\n") == ErrorCode::Parse);
  CHECK(message_of("1,2\n3\n").find("sample.csv: row 2") != std::string::npos);
  CHECK(code_of("1,2\n3,abc\n") == ErrorCode::Parse);
  CHECK(message_of("1,2\n3,abc\n").find("row 2, column 2") != std::string::npos);
  CHECK(code_of("1,2\n3,nan\n") == ErrorCode::NonFinite);
  CHECK(code_of("1,inf\n") == ErrorCode::NonFinite);
  CHECK(code_of("a,b\n") == ErrorCode::EmptyInput);
  CHECK(code_of("") == ErrorCode::EmptyInput);
  CHECK(code_of("1,2,3\n1,,2\n") == ErrorCode::Parse);
}

TEST_CASE("missing file is an io error") {
  try {
    load_csv("/nonexistent/dir/x.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.csv") != std::string::npos);
  }
}

TEST_CASE("csv round trip is exact") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 20, p = 1 + rng() % 6;
    std::vector<double> v(n * p);
    for (double& e : v) e = std::ldexp(mant(rng), expo(rng) % (trial < 25 ? 8 : 300));
    v[0] = trial % 2 ? std::numeric_limits<double>::denorm_min() : -0.0;
    const DataMatrix m(n, p, v);
    std::ostringstream out;
    write_csv(out, m, std::vector<std::string>(p, "c"));
    const auto back = parse_csv(out.str());
    REQUIRE(back.data.rows() == n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < p; ++k) {
        const double a = m(i, k), b = back.data(i, k);
        REQUIRE(std::fabs(a - b) <= 1e-15 * std::fabs(a));
        REQUIRE(a == b);
      }
  }
}

TEST_CASE("save and load through a file") {
  const auto path = std::filesystem::temp_directory_path() / "permstat_data_io_test.csv";
  const DataMatrix m{{0.1, 0.2}, {1.0 / 3.0, -7.5e-12}};
  save_csv(m, path);
  CHECK(load_csv(path).data == m);
  std::filesystem::remove(path);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(2.0) == "2");
}

TEST_CASE("mean vector layout") {
  const MeanShiftSpec spec{50, 5, 0.25};
  const auto mu = spec.mean_vector();
  REQUIRE(mu.size() == 50);
  for (std::size_t k = 0; k < 50; ++k) CHECK(mu[k] == (k < 5 ? 0.25 : 0.0));
  CHECK_THROWS_AS((MeanShiftSpec{3, 4, 1.0}.mean_vector()), Error);
  CHECK_THROWS_AS(sample_gaussian(5, 4, MeanShiftSpec{3, 1, 1.0}, 0), Error);
}

TEST_CASE("gaussian sampler moments") {
  const std::size_t n = 10000, p = 5;
  const auto m = sample_gaussian(n, p, std::nullopt, 42);
  for (std::size_t k = 0; k < p; ++k) {
    double mean = 0, sq = 0;
    for (std::size_t i = 0; i < n; ++i) mean += m(i, k);
    mean /= n;
    for (std::size_t i = 0; i < n; ++i) sq += (m(i, k) - mean) * (m(i, k) - mean);
    CHECK(std::fabs(mean) < 0.04);
    CHECK(std::fabs(sq / (n - 1) - 1.0) < 0.05);
  }

  const auto shifted = sample_gaussian(n, 50, MeanShiftSpec{50, 5, 0.25}, 43);
  for (std::size_t k = 0; k < 50; ++k) {
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) mean += shifted(i, k);
    mean /= n;
    CHECK(std::fabs(mean - (k < 5 ? 0.25 : 0.0)) < 0.04);
  }
}

TEST_CASE("sampler is deterministic in its seed") {
  CHECK(sample_gaussian(20, 3, std::nullopt, 9) == sample_gaussian(20, 3, std::nullopt, 9));
  CHECK_FALSE(sample_gaussian(20, 3, std::nullopt, 9) == sample_gaussian(20, 3, std::nullopt, 10));
}
