#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace permstat {

/// Output of the index-mapping step for one permutation. All entries are
/// 1-based. i1/i2 are the rows of x and y that land in the permuted x*, j1/j2
/// the rows of x and y that land in y*; the starred sequences give their
/// positions inside the permuted matrices.
struct PermutationIndexSet {
  std::vector<std::size_t> i1, i2, i1s, i2s;
  std::vector<std::size_t> j1, j2, j1s, j2s;

  friend bool operator==(const PermutationIndexSet&, const PermutationIndexSet&) = default;
};

/// Checks that `draw` holds n_x distinct values from 1..n_x+n_y.
void validate_draw(std::size_t n_x, std::size_t n_y, std::span<const std::size_t> draw);

/// Indexes of the pooled sample not in `draw`, in ascending order.
std::vector<std::size_t> draw_complement(std::size_t n_x, std::size_t n_y,
                                         std::span<const std::size_t> draw);

/// Maps a draw of pooled indexes assigned to x* onto rows of x and y.
/// Draw order is preserved within i1, i2, j1 and j2.
PermutationIndexSet permutation_indexes_from_draw(std::size_t n_x, std::size_t n_y,
                                                  std::span<const std::size_t> draw);

/// Deterministic source of group reassignments. Iteration k draws from its own
/// generator seeded by derive_seed(seed, k), so the draw for a given iteration
/// is the same whichever back-end or thread asks for it.
class PermutationStream {
 public:
  explicit PermutationStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// n_x pooled indexes (1-based, in draw order) assigned to x* on iteration
  /// `iteration`: a partial Fisher-Yates shuffle of (1, ..., n_x + n_y).
  std::vector<std::size_t> draw(std::size_t n_x, std::size_t n_y, std::size_t iteration) const;

  /// Pins the draw for one iteration. Mostly useful for tests and worked examples.
  void force_draw(std::size_t iteration, std::vector<std::size_t> draw);

 private:
  std::uint64_t seed_;
  std::map<std::size_t, std::vector<std::size_t>> forced_;
};

PermutationIndexSet permutation_indexes(std::size_t n_x, std::size_t n_y,
                                        const PermutationStream& stream, std::size_t iteration);

}  // namespace permstat
