#pragma once

#include <optional>
#include <string_view>

#include "permstat/matrix.hpp"

namespace permstat {

enum class StatisticKind { EnergyDistance, MmdBiasedSquared };

std::string_view to_string(StatisticKind kind) noexcept;
std::optional<StatisticKind> parse_statistic_kind(std::string_view name) noexcept;

/// Matrix kind a statistic consumes: distances for ED, kernel values for MMD.
PairwiseKind matrix_kind_for(StatisticKind kind) noexcept;

/// Energy distance: 2 mean(D_xy) - mean(D_xx) - mean(D_yy).
double energy_statistic(const PairwiseMatrix& d_xy, const PairwiseMatrix& d_xx,
                        const PairwiseMatrix& d_yy);

/// Biased squared MMD: mean(K_xx) + mean(K_yy) - 2 mean(K_xy).
double mmd_biased_statistic(const PairwiseMatrix& k_xx, const PairwiseMatrix& k_yy,
                            const PairwiseMatrix& k_xy);

/// Dispatches on `kind`; the argument order is always (xy, xx, yy).
double two_sample_statistic(StatisticKind kind, const PairwiseMatrix& xy, const PairwiseMatrix& xx,
                            const PairwiseMatrix& yy);

}  // namespace permstat
