#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "permstat/matrix.hpp"
#include "permstat/permutation.hpp"
#include "permstat/statistics.hpp"

namespace permstat {

enum class PermBackend { Standard, Precomputed, Efficient };

std::string_view to_string(PermBackend backend) noexcept;
std::optional<PermBackend> parse_perm_backend(std::string_view name) noexcept;

struct PermTestOptions {
  StatisticKind statistic = StatisticKind::EnergyDistance;
  /// Gaussian kernel bandwidth for MMD; the median heuristic is used when unset.
  std::optional<double> bandwidth;
  /// Workers for the permutation loop (0 = hardware concurrency). Results do
  /// not depend on this value.
  std::size_t threads = 1;
  /// Efficient back-end only: keep an explicit D_YX instead of reading
  /// transposed D_XY blocks.
  bool explicit_transpose = false;
};

struct TestResult {
  double observed = 0.0;
  std::vector<double> null_sample;
  double p_value = 1.0;
  std::size_t b = 0;
  PermBackend backend = PermBackend::Efficient;
  StatisticKind statistic = StatisticKind::EnergyDistance;
  /// Bandwidth actually used (0 for the energy statistic).
  double bandwidth = 0.0;
  double elapsed_seconds = 0.0;
};

/// Unbiased permutation p-value (1 + #{null >= observed}) / (1 + b).
double perm_pvalue(std::span<const double> null_sample, double observed);

/// The three within/between matrices of the permuted sample (x*, y*).
struct PermutedMatrices {
  PairwiseMatrix xx;
  PairwiseMatrix yy;
  PairwiseMatrix xy;
};

/// Matrices of the original sample, computed once by the efficient back-end.
struct BaseMatrices {
  PairwiseMatrix xx;
  PairwiseMatrix yy;
  PairwiseMatrix xy;
  std::optional<PairwiseMatrix> yx;
};

/// Bandwidth the tests will use for `options` on (x, y); 0 for ED.
double resolve_bandwidth(const DataMatrix& x, const DataMatrix& y, const PermTestOptions& options);

BaseMatrices compute_base_matrices(const DataMatrix& x, const DataMatrix& y, StatisticKind kind,
                                   double bandwidth, bool explicit_transpose = false);

/// Rebuilds the permuted matrices from the base matrices by block assignment.
/// Row order of x* is (x[i1], y[i2]) and of y* is (x[j1], y[j2]). `out` is
/// reshaped in place so callers can reuse its storage across iterations.
void reconstruct_permuted_matrices(const BaseMatrices& base, const PermutationIndexSet& idx,
                                   PermutedMatrices& out);

/// Recomputes the permuted matrices from raw rows: x* = w[draw], y* = w[rest].
PermutedMatrices standard_permuted_matrices(const DataMatrix& x, const DataMatrix& y,
                                            std::span<const std::size_t> draw, StatisticKind kind,
                                            double bandwidth);

/// Extracts the permuted matrices from the pooled matrix D_WW (or K_WW).
void extract_permuted_matrices(const PairwiseMatrix& pooled, std::span<const std::size_t> draw,
                               std::span<const std::size_t> rest, PermutedMatrices& out);

/// Reshuffles raw rows and recomputes all three matrices on every iteration.
TestResult standard_perm_test(const DataMatrix& x, const DataMatrix& y, std::size_t b,
                              const PermutationStream& stream, const PermTestOptions& options = {});

/// Computes one matrix on the pooled sample and extracts submatrices per iteration.
TestResult precomputed_perm_test(const DataMatrix& x, const DataMatrix& y, std::size_t b,
                                 const PermutationStream& stream,
                                 const PermTestOptions& options = {});

/// Computes the three original matrices once and rebuilds every permuted
/// matrix by swapping their entries.
TestResult efficient_perm_test(const DataMatrix& x, const DataMatrix& y, std::size_t b,
                               const PermutationStream& stream,
                               const PermTestOptions& options = {});

TestResult run_perm_test(PermBackend backend, const DataMatrix& x, const DataMatrix& y,
                         std::size_t b, const PermutationStream& stream,
                         const PermTestOptions& options = {});

}  // namespace permstat
