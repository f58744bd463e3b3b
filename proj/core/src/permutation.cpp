#include "permstat/permutation.hpp"

#include <numeric>
#include <random>
#include <string>

#include "permstat/error.hpp"
#include "permstat/random.hpp"

namespace permstat {

void validate_draw(std::size_t n_x, std::size_t n_y, std::span<const std::size_t> draw) {
  if (n_x == 0 || n_y == 0) fail(ErrorCode::InvalidArgument, "both groups need at least one sample");
  if (draw.size() != n_x) {
    fail(ErrorCode::InvalidArgument, "draw has " + std::to_string(draw.size()) +
                                         " indexes, expected " + std::to_string(n_x));
  }
  const std::size_t n = n_x + n_y;
  std::vector<bool> seen(n + 1, false);
  for (std::size_t v : draw) {
    if (v < 1 || v > n) fail(ErrorCode::InvalidArgument, "draw index " + std::to_string(v) + " out of range");
    if (seen[v]) fail(ErrorCode::InvalidArgument, "draw index " + std::to_string(v) + " repeated");
    seen[v] = true;
  }
}

std::vector<std::size_t> draw_complement(std::size_t n_x, std::size_t n_y,
                                         std::span<const std::size_t> draw) {
  const std::size_t n = n_x + n_y;
  std::vector<bool> taken(n + 1, false);
  for (std::size_t v : draw) taken[v] = true;
  std::vector<std::size_t> rest;
  rest.reserve(n_y);
  for (std::size_t v = 1; v <= n; ++v) {
    if (!taken[v]) rest.push_back(v);
  }
  return rest;
}

PermutationIndexSet permutation_indexes_from_draw(std::size_t n_x, std::size_t n_y,
                                                  std::span<const std::size_t> draw) {
  validate_draw(n_x, n_y, draw);
  const std::vector<std::size_t> rest = draw_complement(n_x, n_y, draw);

  // idx_g maps a pooled index back to its row in x (<= n_x) or y (> n_x).
  auto group_row = [n_x](std::size_t pooled) { return pooled <= n_x ? pooled : pooled - n_x; };

  PermutationIndexSet s;
  for (std::size_t v : draw) (v <= n_x ? s.i1 : s.i2).push_back(group_row(v));
  for (std::size_t v : rest) (v <= n_x ? s.j1 : s.j2).push_back(group_row(v));

  s.i1s.resize(s.i1.size());
  std::iota(s.i1s.begin(), s.i1s.end(), std::size_t{1});
  s.i2s.resize(n_x - s.i1.size());
  std::iota(s.i2s.begin(), s.i2s.end(), s.i1.size() + 1);
  s.j1s.resize(s.j1.size());
  std::iota(s.j1s.begin(), s.j1s.end(), std::size_t{1});
  s.j2s.resize(n_y - s.j1.size());
  std::iota(s.j2s.begin(), s.j2s.end(), s.j1.size() + 1);
  return s;
}

std::vector<std::size_t> PermutationStream::draw(std::size_t n_x, std::size_t n_y,
                                                 std::size_t iteration) const {
  if (auto it = forced_.find(iteration); it != forced_.end()) {
    validate_draw(n_x, n_y, it->second);
    return it->second;
  }
  if (n_x == 0 || n_y == 0) fail(ErrorCode::InvalidArgument, "both groups need at least one sample");
  const std::size_t n = n_x + n_y;
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{1});
  std::mt19937_64 engine(derive_seed(seed_, iteration));
  for (std::size_t k = 0; k < n_x; ++k) {
    const std::size_t r = k + uniform_index(engine, n - k);
    std::swap(pool[k], pool[r]);
  }
  pool.resize(n_x);
  return pool;
}

void PermutationStream::force_draw(std::size_t iteration, std::vector<std::size_t> draw) {
  forced_[iteration] = std::move(draw);
}

PermutationIndexSet permutation_indexes(std::size_t n_x, std::size_t n_y,
                                        const PermutationStream& stream, std::size_t iteration) {
  const auto d = stream.draw(n_x, n_y, iteration);
  return permutation_indexes_from_draw(n_x, n_y, d);
}

}  // namespace permstat
