#include "permstat/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "permstat/error.hpp"
#include "permstat/parallel.hpp"
#include "permstat/summation.hpp"

namespace permstat {

namespace {

std::atomic<std::uint64_t> g_matrix_evaluations{0};

constexpr std::size_t kColumnTile = 64;

void require_same_width(const DataMatrix& x, const DataMatrix& y) {
  if (x.cols() != y.cols()) {
    fail(ErrorCode::DimensionMismatch, "samples have " + std::to_string(x.cols()) + " and " +
                                           std::to_string(y.cols()) + " variables");
  }
}

// Fills out(i, j) = transform(squared distance) for every pair. Rows of x are
// split across workers; each entry is computed by exactly one worker.
template <typename Transform>
void fill_pairwise(const DataMatrix& x, const DataMatrix& y, bool same, PairwiseMatrix& out,
                   std::size_t threads, Transform transform) {
  const std::size_t nx = x.rows();
  const std::size_t ny = y.rows();
  parallel_for(nx, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t jt = 0; jt < ny; jt += kColumnTile) {
      const std::size_t jend = std::min(ny, jt + kColumnTile);
      for (std::size_t i = begin; i < end; ++i) {
        const auto xi = x.row(i);
        const std::size_t jstart = same ? std::max(jt, i) : jt;
        for (std::size_t j = jstart; j < jend; ++j) {
          out(i, j) = transform(squared_euclidean(xi, y.row(j)));
        }
      }
    }
  });
  if (same) {
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
    }
  }
}

}  // namespace

PairwiseMatrix euclidean_distance_matrix(const DataMatrix& x, const DataMatrix& y,
                                         std::size_t threads) {
  require_same_width(x, y);
  g_matrix_evaluations.fetch_add(1, std::memory_order_relaxed);
  PairwiseMatrix out(x.rows(), y.rows(), PairwiseKind::EuclideanDistance);
  fill_pairwise(x, y, &x == &y, out, threads, [](double sq) { return std::sqrt(sq); });
  return out;
}

PairwiseMatrix gaussian_kernel_matrix(const DataMatrix& x, const DataMatrix& y, double bandwidth,
                                      std::size_t threads) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    fail(ErrorCode::InvalidArgument, "kernel bandwidth must be a positive finite number");
  }
  require_same_width(x, y);
  g_matrix_evaluations.fetch_add(1, std::memory_order_relaxed);
  PairwiseMatrix out(x.rows(), y.rows(), PairwiseKind::GaussianKernel);
  const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
  fill_pairwise(x, y, &x == &y, out, threads, [scale](double sq) { return std::exp(-sq * scale); });
  return out;
}

double median_heuristic_bandwidth(const DataMatrix& x, const DataMatrix& y) {
  require_same_width(x, y);
  const DataMatrix w = vstack(x, y);
  const std::size_t n = w.rows();
  if (n < 2) fail(ErrorCode::InvalidArgument, "median heuristic needs at least two samples");

  std::vector<double> distances;
  distances.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      distances.push_back(std::sqrt(squared_euclidean(w.row(i), w.row(j))));
    }
  }

  const std::size_t mid = distances.size() / 2;
  std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid),
                   distances.end());
  double median = distances[mid];
  if (distances.size() % 2 == 0) {
    const double lower =
        *std::max_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  return median > 0.0 ? median : 1.0;
}

double block_mean(const PairwiseMatrix& m) {
  if (m.empty()) fail(ErrorCode::EmptyInput, "cannot average an empty matrix");
  return compensated_sum(m.values()) / static_cast<double>(m.size());
}

std::uint64_t matrix_evaluation_count() noexcept {
  return g_matrix_evaluations.load(std::memory_order_relaxed);
}

}  // namespace permstat
