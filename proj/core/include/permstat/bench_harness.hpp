#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permstat/statistics.hpp"

namespace permstat {

enum class ExperimentKind { TimingVsN, TimingVsP, NullCalibration, PowerCurve };
enum class BenchBackend { Standard, Precomputed, Efficient, CrossED, CrossMMD };

std::string_view to_string(ExperimentKind kind) noexcept;
std::string_view to_string(BenchBackend backend) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept;
std::optional<BenchBackend> parse_bench_backend(std::string_view name) noexcept;

/// One design point. y is drawn from N(mu, I) with the first j of p mean
/// coordinates set to epsilon; x is always N(0, I).
struct GridPoint {
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::size_t p = 0;
  std::size_t j = 0;
  double epsilon = 0.0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::NullCalibration;
  std::vector<GridPoint> grid;
  std::size_t b = 200;
  std::size_t replications = 1;
  std::vector<BenchBackend> backends;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  /// Statistic for the permutation back-ends. Cross back-ends carry their own.
  StatisticKind statistic = StatisticKind::EnergyDistance;
};

/// Throws ErrorCode::InvalidArgument with the offending field named.
void validate(const ExperimentConfig& config);

/// Accepts either a JSON object or "key = value" lines (# comments allowed).
/// In the key-value form, grid points are "n_x,n_y,p,j,epsilon" separated by
/// ';' and backends are comma-separated. Unknown keys are errors.
ExperimentConfig parse_experiment_config(std::string_view text);

struct ExperimentRecord {
  ExperimentKind kind = ExperimentKind::NullCalibration;
  GridPoint point;
  std::size_t b = 0;
  BenchBackend backend = BenchBackend::Efficient;
  std::size_t replication = 0;
  double elapsed_seconds = 0.0;
  double p_value = 1.0;
};

struct RunOptions {
  /// Replications in flight at once (0 = hardware concurrency).
  std::size_t threads = 1;
  /// Run one test at a time so timings never overlap; the permutation loop
  /// itself may then use `threads` workers.
  bool timing_isolated = false;
};

/// One record per (grid point, backend, replication), ordered by grid point,
/// then replication, then backend as listed in the config. Data for
/// replication r of point g is drawn from seeds derived from (seed, g, r) and
/// shared by all back-ends; p-values depend only on the config.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const RunOptions& options = {});

struct SummaryRow {
  GridPoint point;
  BenchBackend backend = BenchBackend::Efficient;
  std::size_t count = 0;
  double mean_elapsed = 0.0;
  double median_elapsed = 0.0;
  double min_elapsed = 0.0;
  double max_elapsed = 0.0;
  double power = 0.0;
  double power_bootstrap_sd = 0.0;
};

/// Groups by (grid point, backend) in first-seen order. Power is the fraction
/// of p-values <= alpha; its spread is the standard deviation of the power
/// over `bootstrap_resamples` resamples of the group's p-values.
std::vector<SummaryRow> summarize(std::span<const ExperimentRecord> records, double alpha,
                                  std::uint64_t bootstrap_seed = 0,
                                  std::size_t bootstrap_resamples = 200);

/// Column order: kind,n_x,n_y,p,j,epsilon,b,backend,rep,elapsed_s,p_value
void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records);
void write_records_jsonl(std::ostream& out, std::span<const ExperimentRecord> records);
void write_summary_table(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace permstat
