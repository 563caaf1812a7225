#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace spgemm {

using Index = std::int64_t;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Coordinate-form matrix. Duplicates are allowed and are summed when the
/// list is converted to compressed storage.
struct TripletList {
  Index nrows = 0;
  Index ncols = 0;
  std::vector<Triplet> entries;
};

/// Row-major dense matrix, used as a verification container.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index nrows, Index ncols);

  Index nrows() const { return nrows_; }
  Index ncols() const { return ncols_; }

  double& operator()(Index i, Index j) { return values_[static_cast<std::size_t>(i * ncols_ + j)]; }
  double operator()(Index i, Index j) const { return values_[static_cast<std::size_t>(i * ncols_ + j)]; }

  std::span<const double> values() const { return values_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<double> values_;
};

/// Compressed sparse column matrix. Immutable once constructed; the
/// constructor validates the structural invariants.
///
/// Row indices inside a column are distinct but need not be sorted. The
/// canonical flag records whether they are strictly ascending, which is the
/// form produced by from_triplets() and canonicalize().
class CscMatrix {
 public:
  CscMatrix() : column_pointers_{0} {}
  CscMatrix(Index nrows, Index ncols, std::vector<Index> column_pointers,
            std::vector<Index> row_indices, std::vector<double> values);

  Index nrows() const { return nrows_; }
  Index ncols() const { return ncols_; }
  Index nnz() const { return static_cast<Index>(row_indices_.size()); }
  bool is_canonical() const { return canonical_; }

  std::span<const Index> column_pointers() const { return column_pointers_; }
  std::span<const Index> row_indices() const { return row_indices_; }
  std::span<const double> values() const { return values_; }

  Index col_begin(Index j) const { return column_pointers_[static_cast<std::size_t>(j)]; }
  Index col_end(Index j) const { return column_pointers_[static_cast<std::size_t>(j) + 1]; }
  Index col_nnz(Index j) const { return col_end(j) - col_begin(j); }

  std::span<const Index> col_rows(Index j) const;
  std::span<const double> col_values(Index j) const;

  /// Bitwise equality of shape and storage (order of rows matters).
  friend bool operator==(const CscMatrix& a, const CscMatrix& b);

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> column_pointers_;
  std::vector<Index> row_indices_;
  std::vector<double> values_;
  bool canonical_ = true;
};

/// Builds canonical storage. Duplicates are summed, exact zeros dropped.
CscMatrix from_triplets(const TripletList& t);

/// Entries in column-major storage order.
TripletList to_triplets(const CscMatrix& m);

/// Sorts rows ascending within each column. Stored zeros are kept.
CscMatrix canonicalize(const CscMatrix& m);

/// Column i of the result is column perm[i] of m.
CscMatrix permute_columns(const CscMatrix& m, std::span<const Index> perm);

/// Column perm[i] of the result is column i of m (undoes permute_columns).
CscMatrix unpermute_columns(const CscMatrix& m, std::span<const Index> perm);

CscMatrix identity(Index n);

DenseMatrix to_dense(const CscMatrix& m);

/// Accumulates columns in arbitrary order and assembles a CscMatrix.
/// Each column may be set once.
class ColumnSink {
 public:
  ColumnSink(Index nrows, Index ncols);

  void set_column(Index j, std::vector<Index> rows, std::vector<double> values);
  CscMatrix finish() &&;

 private:
  Index nrows_;
  std::vector<std::vector<Index>> rows_;
  std::vector<std::vector<double>> values_;
};

}  // namespace spgemm
