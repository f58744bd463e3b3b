#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace permstat {

/// Dense samples-by-variables matrix stored row-major. Construction enforces
/// a non-empty shape and finite entries, so every DataMatrix in the program is
/// valid input for the distance kernels.
class DataMatrix {
 public:
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  DataMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t k) const noexcept {
    return values_[i * cols_ + k];
  }

  /// Rows [begin, end) as a new matrix.
  DataMatrix slice_rows(std::size_t begin, std::size_t end) const;

  /// Gather rows by zero-based index, in the order given.
  DataMatrix select_rows(std::span<const std::size_t> indexes) const;

  /// Scales every entry by `factor`.
  DataMatrix scaled(double factor) const;

  friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Stacks `top` above `bottom`; the concatenated sample w = (x, y).
DataMatrix vstack(const DataMatrix& top, const DataMatrix& bottom);

enum class PairwiseKind { EuclideanDistance, GaussianKernel };

/// n1 x n2 matrix of distances or kernel values between two sample sets.
class PairwiseMatrix {
 public:
  PairwiseMatrix() = default;
  PairwiseMatrix(std::size_t n1, std::size_t n2, PairwiseKind kind);
  PairwiseMatrix(std::size_t n1, std::size_t n2, PairwiseKind kind, std::vector<double> values);

  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  PairwiseKind kind() const noexcept { return kind_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n2_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * n2_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * n2_, n2_};
  }
  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * n2_, n2_}; }

  /// Reshape without releasing capacity; contents are unspecified afterwards.
  void reset(std::size_t n1, std::size_t n2, PairwiseKind kind);

  PairwiseMatrix transposed() const;

  friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;

 private:
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  PairwiseKind kind_ = PairwiseKind::EuclideanDistance;
  std::vector<double> values_;
};

}  // namespace permstat
