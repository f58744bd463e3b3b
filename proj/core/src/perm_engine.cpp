#include "permstat/perm_engine.hpp"

#include <chrono>
#include <string>

#include "permstat/error.hpp"
#include "permstat/kernels.hpp"
#include "permstat/parallel.hpp"

namespace permstat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_inputs(const DataMatrix& x, const DataMatrix& y, std::size_t b) {
  if (x.cols() != y.cols()) {
    fail(ErrorCode::DimensionMismatch, "samples have " + std::to_string(x.cols()) + " and " +
                                           std::to_string(y.cols()) + " variables");
  }
  if (b == 0) fail(ErrorCode::InvalidArgument, "number of permutations must be at least 1");
}

PairwiseMatrix pairwise(const DataMatrix& a, const DataMatrix& b, StatisticKind kind,
                        double bandwidth) {
  return kind == StatisticKind::EnergyDistance ? euclidean_distance_matrix(a, b)
                                               : gaussian_kernel_matrix(a, b, bandwidth);
}

std::vector<std::size_t> identity_draw(std::size_t n_x) {
  std::vector<std::size_t> d(n_x);
  for (std::size_t i = 0; i < n_x; ++i) d[i] = i + 1;
  return d;
}

// Destination rows come in two runs: rows of x (read from XX and XY) then
// rows of y (read from YX and YY). Within a row, the columns taken from x
// come first, then those from y. Indexes are 1-based.
void assemble(PairwiseMatrix& out, const BaseMatrices& base, std::span<const std::size_t> x_rows,
              std::span<const std::size_t> y_rows, std::span<const std::size_t> x_cols,
              std::span<const std::size_t> y_cols) {
  const std::size_t split = x_cols.size();
  std::size_t r = 0;
  for (const std::size_t src : x_rows) {
    const auto xx = base.xx.row(src - 1);
    const auto xy = base.xy.row(src - 1);
    const auto dst = out.row(r++);
    for (std::size_t c = 0; c < split; ++c) dst[c] = xx[x_cols[c] - 1];
    for (std::size_t c = 0; c < y_cols.size(); ++c) dst[split + c] = xy[y_cols[c] - 1];
  }
  for (const std::size_t src : y_rows) {
    const auto yy = base.yy.row(src - 1);
    const auto dst = out.row(r++);
    if (base.yx) {
      const auto yx = base.yx->row(src - 1);
      for (std::size_t c = 0; c < split; ++c) dst[c] = yx[x_cols[c] - 1];
    } else {
      for (std::size_t c = 0; c < split; ++c) dst[c] = base.xy(x_cols[c] - 1, src - 1);
    }
    for (std::size_t c = 0; c < y_cols.size(); ++c) dst[split + c] = yy[y_cols[c] - 1];
  }
}

void gather(PairwiseMatrix& out, const PairwiseMatrix& src, std::span<const std::size_t> rows,
            std::span<const std::size_t> cols) {
  out.reset(rows.size(), cols.size(), src.kind());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const auto src_row = src.row(rows[a] - 1);
    for (std::size_t c = 0; c < cols.size(); ++c) out(a, c) = src_row[cols[c] - 1];
  }
}

double evaluate(StatisticKind kind, const PermutedMatrices& m) {
  return two_sample_statistic(kind, m.xy, m.xx, m.yy);
}

TestResult finish(TestResult result, std::size_t b, PermBackend backend,
                  const PermTestOptions& options, double bandwidth, Clock::time_point start) {
  result.b = b;
  result.backend = backend;
  result.statistic = options.statistic;
  result.bandwidth = bandwidth;
  result.p_value = perm_pvalue(result.null_sample, result.observed);
  result.elapsed_seconds = seconds_since(start);
  return result;
}

}  // namespace

std::string_view to_string(PermBackend backend) noexcept {
  switch (backend) {
    case PermBackend::Standard: return "standard";
    case PermBackend::Precomputed: return "precomputed";
    case PermBackend::Efficient: return "efficient";
  }
  return "unknown";
}

std::optional<PermBackend> parse_perm_backend(std::string_view name) noexcept {
  if (name == "standard") return PermBackend::Standard;
  if (name == "precomputed") return PermBackend::Precomputed;
  if (name == "efficient") return PermBackend::Efficient;
  return std::nullopt;
}

double perm_pvalue(std::span<const double> null_sample, double observed) {
  if (null_sample.empty()) fail(ErrorCode::EmptyInput, "permutation null sample is empty");
  std::size_t exceed = 0;
  for (double v : null_sample) {
    if (v >= observed) ++exceed;
  }
  return static_cast<double>(1 + exceed) / static_cast<double>(1 + null_sample.size());
}

double resolve_bandwidth(const DataMatrix& x, const DataMatrix& y, const PermTestOptions& options) {
  if (options.statistic == StatisticKind::EnergyDistance) return 0.0;
  if (options.bandwidth) {
    if (!(*options.bandwidth > 0.0)) {
      fail(ErrorCode::InvalidArgument, "kernel bandwidth must be positive");
    }
    return *options.bandwidth;
  }
  return median_heuristic_bandwidth(x, y);
}

BaseMatrices compute_base_matrices(const DataMatrix& x, const DataMatrix& y, StatisticKind kind,
                                   double bandwidth, bool explicit_transpose) {
  BaseMatrices base{pairwise(x, x, kind, bandwidth), pairwise(y, y, kind, bandwidth),
                    pairwise(x, y, kind, bandwidth), std::nullopt};
  if (explicit_transpose) base.yx = base.xy.transposed();
  return base;
}

void reconstruct_permuted_matrices(const BaseMatrices& base, const PermutationIndexSet& idx,
                                   PermutedMatrices& out) {
  const std::size_t n_x = base.xx.n1();
  const std::size_t n_y = base.yy.n1();
  const PairwiseKind kind = base.xx.kind();

  // The destination sequences are the runs 1..|i1|, |i1|+1..n_x and likewise
  // for j, so each permuted row is two contiguous gathers.
  out.xx.reset(n_x, n_x, kind);
  assemble(out.xx, base, idx.i1, idx.i2, idx.i1, idx.i2);
  out.yy.reset(n_y, n_y, kind);
  assemble(out.yy, base, idx.j1, idx.j2, idx.j1, idx.j2);
  out.xy.reset(n_x, n_y, kind);
  assemble(out.xy, base, idx.i1, idx.i2, idx.j1, idx.j2);
}

PermutedMatrices standard_permuted_matrices(const DataMatrix& x, const DataMatrix& y,
                                            std::span<const std::size_t> draw, StatisticKind kind,
                                            double bandwidth) {
  validate_draw(x.rows(), y.rows(), draw);
  const DataMatrix w = vstack(x, y);
  const auto rest = draw_complement(x.rows(), y.rows(), draw);
  std::vector<std::size_t> rows_x(draw.begin(), draw.end());
  std::vector<std::size_t> rows_y(rest);
  for (auto& v : rows_x) --v;
  for (auto& v : rows_y) --v;
  const DataMatrix xs = w.select_rows(rows_x);
  const DataMatrix ys = w.select_rows(rows_y);
  return {pairwise(xs, xs, kind, bandwidth), pairwise(ys, ys, kind, bandwidth),
          pairwise(xs, ys, kind, bandwidth)};
}

void extract_permuted_matrices(const PairwiseMatrix& pooled, std::span<const std::size_t> draw,
                               std::span<const std::size_t> rest, PermutedMatrices& out) {
  gather(out.xy, pooled, draw, rest);
  gather(out.xx, pooled, draw, draw);
  gather(out.yy, pooled, rest, rest);
}

TestResult standard_perm_test(const DataMatrix& x, const DataMatrix& y, std::size_t b,
                              const PermutationStream& stream, const PermTestOptions& options) {
  const auto start = Clock::now();
  check_inputs(x, y, b);
  const double bandwidth = resolve_bandwidth(x, y, options);
  const StatisticKind kind = options.statistic;

  TestResult result;
  {
    const PermutedMatrices original{pairwise(x, x, kind, bandwidth), pairwise(y, y, kind, bandwidth),
                                    pairwise(x, y, kind, bandwidth)};
    result.observed = evaluate(kind, original);
  }

  result.null_sample.assign(b, 0.0);
  parallel_for(b, options.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t it = begin; it < end; ++it) {
      const auto draw = stream.draw(x.rows(), y.rows(), it);
      result.null_sample[it] = evaluate(kind, standard_permuted_matrices(x, y, draw, kind, bandwidth));
    }
  });
  return finish(std::move(result), b, PermBackend::Standard, options, bandwidth, start);
}

TestResult precomputed_perm_test(const DataMatrix& x, const DataMatrix& y, std::size_t b,
                                 const PermutationStream& stream, const PermTestOptions& options) {
  const auto start = Clock::now();
  check_inputs(x, y, b);
  const double bandwidth = resolve_bandwidth(x, y, options);
  const StatisticKind kind = options.statistic;
  const std::size_t n_x = x.rows();
  const std::size_t n_y = y.rows();

  const DataMatrix w = vstack(x, y);
  const PairwiseMatrix pooled = pairwise(w, w, kind, bandwidth);

  TestResult result;
  {
    PermutedMatrices original;
    const auto draw = identity_draw(n_x);
    extract_permuted_matrices(pooled, draw, draw_complement(n_x, n_y, draw), original);
    result.observed = evaluate(kind, original);
  }

  result.null_sample.assign(b, 0.0);
  parallel_for(b, options.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    PermutedMatrices scratch;
    for (std::size_t it = begin; it < end; ++it) {
      const auto draw = stream.draw(n_x, n_y, it);
      extract_permuted_matrices(pooled, draw, draw_complement(n_x, n_y, draw), scratch);
      result.null_sample[it] = evaluate(kind, scratch);
    }
  });
  return finish(std::move(result), b, PermBackend::Precomputed, options, bandwidth, start);
}

TestResult efficient_perm_test(const DataMatrix& x, const DataMatrix& y, std::size_t b,
                               const PermutationStream& stream, const PermTestOptions& options) {
  const auto start = Clock::now();
  check_inputs(x, y, b);
  const double bandwidth = resolve_bandwidth(x, y, options);
  const StatisticKind kind = options.statistic;
  const std::size_t n_x = x.rows();
  const std::size_t n_y = y.rows();

  const BaseMatrices base = compute_base_matrices(x, y, kind, bandwidth, options.explicit_transpose);

  TestResult result;
  result.observed = two_sample_statistic(kind, base.xy, base.xx, base.yy);

  result.null_sample.assign(b, 0.0);
  parallel_for(b, options.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    PermutedMatrices scratch;
    for (std::size_t it = begin; it < end; ++it) {
      const auto idx = permutation_indexes(n_x, n_y, stream, it);
      reconstruct_permuted_matrices(base, idx, scratch);
      result.null_sample[it] = evaluate(kind, scratch);
    }
  });
  return finish(std::move(result), b, PermBackend::Efficient, options, bandwidth, start);
}

TestResult run_perm_test(PermBackend backend, const DataMatrix& x, const DataMatrix& y,
                         std::size_t b, const PermutationStream& stream,
                         const PermTestOptions& options) {
  switch (backend) {
    case PermBackend::Standard: return standard_perm_test(x, y, b, stream, options);
    case PermBackend::Precomputed: return precomputed_perm_test(x, y, b, stream, options);
    case PermBackend::Efficient: return efficient_perm_test(x, y, b, stream, options);
  }
  fail(ErrorCode::InvalidArgument, "unknown permutation back-end");
}

}  // namespace permstat
