#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "permstat/matrix.hpp"

namespace permstat {

/// Squared Euclidean distance between two equal-length rows. The accumulation
/// order is fixed and depends only on the length, so d(a, b) == d(b, a) bit for
/// bit and the same pair of points always yields the same value no matter
/// which matrix it is evaluated in.
inline double squared_euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t p = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= p; k += 4) {
    const double d0 = a[k] - b[k];
    const double d1 = a[k + 1] - b[k + 1];
    const double d2 = a[k + 2] - b[k + 2];
    const double d3 = a[k + 3] - b[k + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; k < p; ++k) {
    const double d = a[k] - b[k];
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

/// Entry (i, j) is the Euclidean distance between row i of x and row j of y.
/// Passing the same object for x and y fills only the upper triangle and
/// mirrors it, which gives an exactly symmetric matrix with a zero diagonal.
/// `threads` splits the work over row blocks (0 = hardware concurrency); the
/// values do not depend on it.
PairwiseMatrix euclidean_distance_matrix(const DataMatrix& x, const DataMatrix& y,
                                         std::size_t threads = 1);

/// Entry (i, j) is exp(-|x_i - y_j|^2 / (2 bandwidth^2)).
PairwiseMatrix gaussian_kernel_matrix(const DataMatrix& x, const DataMatrix& y, double bandwidth,
                                      std::size_t threads = 1);

/// Median of the pairwise distances over the pooled sample (x, y), taken over
/// all unordered pairs of distinct rows. Falls back to 1 when that median is 0.
double median_heuristic_bandwidth(const DataMatrix& x, const DataMatrix& y);

/// Mean of all entries using compensated summation in row-major order.
double block_mean(const PairwiseMatrix& m);

/// Number of distance or kernel matrices evaluated by this process so far.
/// Used to check how often each permutation back-end touches raw data.
std::uint64_t matrix_evaluation_count() noexcept;

}  // namespace permstat
