#include "permstat/statistics.hpp"

#include <string>

#include "permstat/error.hpp"
#include "permstat/kernels.hpp"

namespace permstat {

namespace {

void check_shapes(const PairwiseMatrix& xy, const PairwiseMatrix& xx, const PairwiseMatrix& yy,
                  PairwiseKind expected) {
  const std::size_t nx = xx.n1();
  const std::size_t ny = yy.n1();
  if (xx.n2() != nx || yy.n2() != ny || xy.n1() != nx || xy.n2() != ny) {
    fail(ErrorCode::DimensionMismatch,
         "inconsistent block shapes: xx " + std::to_string(xx.n1()) + "x" +
             std::to_string(xx.n2()) + ", yy " + std::to_string(yy.n1()) + "x" +
             std::to_string(yy.n2()) + ", xy " + std::to_string(xy.n1()) + "x" +
             std::to_string(xy.n2()));
  }
  if (xy.kind() != expected || xx.kind() != expected || yy.kind() != expected) {
    fail(ErrorCode::InvalidArgument, "statistic received matrices of the wrong kind");
  }
}

}  // namespace

std::string_view to_string(StatisticKind kind) noexcept {
  return kind == StatisticKind::EnergyDistance ? "ed" : "mmd";
}

std::optional<StatisticKind> parse_statistic_kind(std::string_view name) noexcept {
  if (name == "ed" || name == "energy") return StatisticKind::EnergyDistance;
  if (name == "mmd") return StatisticKind::MmdBiasedSquared;
  return std::nullopt;
}

PairwiseKind matrix_kind_for(StatisticKind kind) noexcept {
  return kind == StatisticKind::EnergyDistance ? PairwiseKind::EuclideanDistance
                                               : PairwiseKind::GaussianKernel;
}

double energy_statistic(const PairwiseMatrix& d_xy, const PairwiseMatrix& d_xx,
                        const PairwiseMatrix& d_yy) {
  check_shapes(d_xy, d_xx, d_yy, PairwiseKind::EuclideanDistance);
  return 2.0 * block_mean(d_xy) - block_mean(d_xx) - block_mean(d_yy);
}

double mmd_biased_statistic(const PairwiseMatrix& k_xx, const PairwiseMatrix& k_yy,
                            const PairwiseMatrix& k_xy) {
  check_shapes(k_xy, k_xx, k_yy, PairwiseKind::GaussianKernel);
  return block_mean(k_xx) + block_mean(k_yy) - 2.0 * block_mean(k_xy);
}

double two_sample_statistic(StatisticKind kind, const PairwiseMatrix& xy, const PairwiseMatrix& xx,
                            const PairwiseMatrix& yy) {
  return kind == StatisticKind::EnergyDistance ? energy_statistic(xy, xx, yy)
                                               : mmd_biased_statistic(xx, yy, xy);
}

}  // namespace permstat
