#include "permstat/matrix.hpp"

#include <cmath>
#include <string>

#include "permstat/error.hpp"

namespace permstat {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) {
    fail(ErrorCode::EmptyInput, "data matrix must have at least one row and one column");
  }
  if (values_.size() != rows_ * cols_) {
    fail(ErrorCode::DimensionMismatch,
         "data matrix expects " + std::to_string(rows_ * cols_) + " values, got " +
             std::to_string(values_.size()));
  }
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (!std::isfinite(values_[idx])) {
      fail(ErrorCode::NonFinite, "non-finite value at row " + std::to_string(idx / cols_ + 1) +
                                     ", column " + std::to_string(idx % cols_ + 1));
    }
  }
}

namespace {

std::vector<double> flatten(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  std::vector<double> out;
  out.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) {
      fail(ErrorCode::DimensionMismatch, "ragged initializer for data matrix");
    }
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace

DataMatrix::DataMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : DataMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size(), flatten(rows)) {}

DataMatrix DataMatrix::slice_rows(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > rows_) {
    fail(ErrorCode::InvalidArgument, "row slice out of range");
  }
  std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
                          values_.begin() + static_cast<std::ptrdiff_t>(end * cols_));
  return DataMatrix(end - begin, cols_, std::move(out));
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> indexes) const {
  std::vector<double> out;
  out.reserve(indexes.size() * cols_);
  for (std::size_t i : indexes) {
    if (i >= rows_) fail(ErrorCode::InvalidArgument, "row index out of range");
    auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return DataMatrix(indexes.size(), cols_, std::move(out));
}

DataMatrix DataMatrix::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return DataMatrix(rows_, cols_, std::move(out));
}

DataMatrix vstack(const DataMatrix& top, const DataMatrix& bottom) {
  if (top.cols() != bottom.cols()) {
    fail(ErrorCode::DimensionMismatch, "cannot stack matrices with " + std::to_string(top.cols()) +
                                           " and " + std::to_string(bottom.cols()) + " columns");
  }
  std::vector<double> out;
  out.reserve(top.values().size() + bottom.values().size());
  out.insert(out.end(), top.values().begin(), top.values().end());
  out.insert(out.end(), bottom.values().begin(), bottom.values().end());
  return DataMatrix(top.rows() + bottom.rows(), top.cols(), std::move(out));
}

PairwiseMatrix::PairwiseMatrix(std::size_t n1, std::size_t n2, PairwiseKind kind)
    : n1_(n1), n2_(n2), kind_(kind), values_(n1 * n2, 0.0) {}

PairwiseMatrix::PairwiseMatrix(std::size_t n1, std::size_t n2, PairwiseKind kind,
                               std::vector<double> values)
    : n1_(n1), n2_(n2), kind_(kind), values_(std::move(values)) {
  if (values_.size() != n1_ * n2_) {
    fail(ErrorCode::DimensionMismatch, "pairwise matrix value count does not match its shape");
  }
}

void PairwiseMatrix::reset(std::size_t n1, std::size_t n2, PairwiseKind kind) {
  n1_ = n1;
  n2_ = n2;
  kind_ = kind;
  values_.resize(n1 * n2);
}

PairwiseMatrix PairwiseMatrix::transposed() const {
  PairwiseMatrix out(n2_, n1_, kind_);
  for (std::size_t i = 0; i < n1_; ++i) {
    for (std::size_t j = 0; j < n2_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

}  // namespace permstat
