#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "permstat/error.hpp"
#include "permstat/kernels.hpp"
#include "permstat/statistics.hpp"

using namespace permstat;

namespace {

double ed(const DataMatrix& x, const DataMatrix& y) {
  return energy_statistic(euclidean_distance_matrix(x, y), euclidean_distance_matrix(x, x),
                          euclidean_distance_matrix(y, y));
}

double mmd(const DataMatrix& x, const DataMatrix& y, double bw) {
  return mmd_biased_statistic(gaussian_kernel_matrix(x, x, bw), gaussian_kernel_matrix(y, y, bw),
                              gaussian_kernel_matrix(x, y, bw));
}

}  // namespace

TEST_CASE("energy statistic worked values") {
  CHECK(ed({{1.5, -2}}, {{1.5, -2}}) == 0.0);
  CHECK(ed({{0}}, {{5}}) == 10.0);
}

TEST_CASE("energy statistic matches four-loop brute force") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = oracle::random_matrix(4, 2, 2 * seed + 1);
    const auto y = oracle::random_matrix(3, 2, 2 * seed + 2);
    CHECK(oracle::close_rel(ed(x, y), oracle::energy(x, y), 1e-10));
  }
}

TEST_CASE("mmd statistic worked values") {
  CHECK(mmd({{3, 1}}, {{3, 1}}, 0.7) == 0.0);
  CHECK(mmd({{0}}, {{2}}, 1.0) == doctest::Approx(2.0 - 2.0 * std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("mmd statistic matches four-loop brute force") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = oracle::random_matrix(3, 2, 50 + seed);
    const auto y = oracle::random_matrix(4, 2, 80 + seed);
    CHECK(oracle::close_rel(mmd(x, y, 1.1), oracle::mmd_biased(x, y, 1.1), 1e-10));
  }
}

TEST_CASE("statistics are nonnegative on real data") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = oracle::random_matrix(2 + seed % 7, 3, 700 + seed);
    const auto y = oracle::random_matrix(2 + seed % 5, 3, 900 + seed);
    CHECK(ed(x, y) >= -1e-10);
    CHECK(mmd(x, y, 0.9) >= -1e-10);
  }
}

TEST_CASE("statistics are invariant to row order and to swapping the groups") {
  const auto x = oracle::random_matrix(6, 3, 1001);
  const auto y = oracle::random_matrix(5, 3, 1002);
  std::vector<std::size_t> order{4, 0, 5, 2, 1, 3};
  const auto xp = x.select_rows(order);
  CHECK(oracle::close_rel(ed(xp, y), ed(x, y), 1e-12));
  CHECK(oracle::close_rel(mmd(xp, y, 1.0), mmd(x, y, 1.0), 1e-12));
  CHECK(oracle::close_rel(ed(y, x), ed(x, y), 1e-12));
  CHECK(oracle::close_rel(mmd(y, x, 1.0), mmd(x, y, 1.0), 1e-12));
}

TEST_CASE("statistics reject inconsistent shapes and kinds") {
  const auto x = oracle::random_matrix(3, 2, 1);
  const auto y = oracle::random_matrix(4, 2, 2);
  const auto dxx = euclidean_distance_matrix(x, x);
  const auto dyy = euclidean_distance_matrix(y, y);
  const auto dxy = euclidean_distance_matrix(x, y);
  CHECK_THROWS_AS(energy_statistic(dxy, dyy, dxx), Error);
  CHECK_THROWS_AS(energy_statistic(dxy.transposed(), dxx, dyy), Error);
  CHECK_THROWS_AS(mmd_biased_statistic(dxx, dyy, dxy), Error);
  CHECK(parse_statistic_kind("ed") == StatisticKind::EnergyDistance);
  CHECK(parse_statistic_kind("mmd") == StatisticKind::MmdBiasedSquared);
  CHECK_FALSE(parse_statistic_kind("hsic").has_value());
}
