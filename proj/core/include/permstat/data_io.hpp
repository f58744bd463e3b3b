#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permstat/matrix.hpp"

namespace permstat {

/// Mean vector with the first j of p coordinates set to epsilon, the rest 0.
struct MeanShiftSpec {
  std::size_t p = 1;
  std::size_t j = 0;
  double epsilon = 0.0;

  std::vector<double> mean_vector() const;
};

/// Throws unless j <= p and epsilon is finite.
void validate(const MeanShiftSpec& spec);

/// n x p matrix of independent unit-variance normal draws with the given mean
/// (zero mean when `mean` is empty). Deviates come from a std::mt19937_64
/// seeded with `seed`, turned into normals by the Marsaglia polar method and
/// filled row-major, so the output is a fixed function of (n, p, mean, seed).
DataMatrix sample_gaussian(std::size_t n, std::size_t p, const std::optional<MeanShiftSpec>& mean,
                           std::uint64_t seed);

struct CsvDocument {
  DataMatrix data;
  std::optional<std::vector<std::string>> header;
};

/// Parses comma-separated numeric text. A first row containing any
/// non-numeric cell is taken as the header. `source` names the input in errors.
CsvDocument parse_csv(std::string_view text, std::string_view source = "<input>");

CsvDocument load_csv(const std::filesystem::path& path);

/// Writes one row per sample with 17 significant digits per value.
void write_csv(std::ostream& out, const DataMatrix& m,
               const std::optional<std::vector<std::string>>& header = std::nullopt);

void save_csv(const DataMatrix& m, const std::filesystem::path& path,
              const std::optional<std::vector<std::string>>& header = std::nullopt);

/// `v` with 17 significant digits, like printf("%.17g"). Parses back exactly.
std::string format_double(double v);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_shortest(double v);

}  // namespace permstat
