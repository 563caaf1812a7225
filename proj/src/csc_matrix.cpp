#include "spgemm/csc_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spgemm/errors.hpp"

namespace spgemm {

DenseMatrix::DenseMatrix(Index nrows, Index ncols)
    : nrows_(nrows), ncols_(ncols), values_(static_cast<std::size_t>(nrows * ncols), 0.0) {
  if (nrows < 0 || ncols < 0) throw InputError("negative dense matrix dimension");
}

CscMatrix::CscMatrix(Index nrows, Index ncols, std::vector<Index> column_pointers,
                     std::vector<Index> row_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      column_pointers_(std::move(column_pointers)),
      row_indices_(std::move(row_indices)),
      values_(std::move(values)) {
  if (nrows_ < 0 || ncols_ < 0) throw InputError("negative matrix dimension");
  if (column_pointers_.size() != static_cast<std::size_t>(ncols_) + 1)
    throw InputError("column_pointers must have ncols + 1 entries");
  if (row_indices_.size() != values_.size())
    throw InputError("row_indices and values differ in length");
  if (column_pointers_.front() != 0) throw InputError("column_pointers[0] must be 0");
  if (column_pointers_.back() != nnz()) throw InputError("column_pointers[ncols] must equal nnz");

  std::vector<Index> last_seen(static_cast<std::size_t>(nrows_), -1);
  for (Index j = 0; j < ncols_; ++j) {
    if (col_begin(j) > col_end(j)) throw InputError("column_pointers must be non-decreasing");
    Index prev = -1;
    for (Index p = col_begin(j); p < col_end(j); ++p) {
      const Index i = row_indices_[static_cast<std::size_t>(p)];
      if (i < 0 || i >= nrows_)
        throw InputError("row index " + std::to_string(i) + " out of range in column " +
                         std::to_string(j));
      auto& seen = last_seen[static_cast<std::size_t>(i)];
      if (seen == j)
        throw InputError("duplicate row " + std::to_string(i) + " in column " + std::to_string(j));
      seen = j;
      if (i <= prev) canonical_ = false;
      prev = i;
    }
  }
}

std::span<const Index> CscMatrix::col_rows(Index j) const {
  return std::span<const Index>(row_indices_).subspan(static_cast<std::size_t>(col_begin(j)),
                                                      static_cast<std::size_t>(col_nnz(j)));
}

std::span<const double> CscMatrix::col_values(Index j) const {
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(col_begin(j)),
                                                  static_cast<std::size_t>(col_nnz(j)));
}

bool operator==(const CscMatrix& a, const CscMatrix& b) {
  return a.nrows_ == b.nrows_ && a.ncols_ == b.ncols_ &&
         a.column_pointers_ == b.column_pointers_ && a.row_indices_ == b.row_indices_ &&
         a.values_ == b.values_;
}

CscMatrix from_triplets(const TripletList& t) {
  if (t.nrows < 0 || t.ncols < 0) throw InputError("negative matrix dimension");
  for (const auto& e : t.entries) {
    if (e.row < 0 || e.row >= t.nrows || e.col < 0 || e.col >= t.ncols)
      throw InputError("triplet (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                       ") out of bounds");
  }
  std::vector<Triplet> sorted = t.entries;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& x, const Triplet& y) {
    return x.col != y.col ? x.col < y.col : x.row < y.row;
  });

  std::vector<Index> colptr(static_cast<std::size_t>(t.ncols) + 1, 0);
  std::vector<Index> rows;
  std::vector<double> vals;
  rows.reserve(sorted.size());
  vals.reserve(sorted.size());
  for (std::size_t p = 0; p < sorted.size();) {
    const Index i = sorted[p].row;
    const Index j = sorted[p].col;
    double sum = 0.0;
    for (; p < sorted.size() && sorted[p].row == i && sorted[p].col == j; ++p)
      sum += sorted[p].value;
    if (sum == 0.0) continue;
    rows.push_back(i);
    vals.push_back(sum);
    ++colptr[static_cast<std::size_t>(j) + 1];
  }
  std::partial_sum(colptr.begin(), colptr.end(), colptr.begin());
  return CscMatrix(t.nrows, t.ncols, std::move(colptr), std::move(rows), std::move(vals));
}

TripletList to_triplets(const CscMatrix& m) {
  TripletList t{m.nrows(), m.ncols(), {}};
  t.entries.reserve(static_cast<std::size_t>(m.nnz()));
  for (Index j = 0; j < m.ncols(); ++j) {
    auto rows = m.col_rows(j);
    auto vals = m.col_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) t.entries.push_back({rows[p], j, vals[p]});
  }
  return t;
}

CscMatrix canonicalize(const CscMatrix& m) {
  if (m.is_canonical()) return m;
  std::vector<Index> colptr(m.column_pointers().begin(), m.column_pointers().end());
  std::vector<Index> rows(m.row_indices().begin(), m.row_indices().end());
  std::vector<double> vals(m.values().begin(), m.values().end());
  std::vector<std::size_t> order;
  for (Index j = 0; j < m.ncols(); ++j) {
    const auto b = static_cast<std::size_t>(m.col_begin(j));
    const auto n = static_cast<std::size_t>(m.col_nnz(j));
    order.resize(n);
    std::iota(order.begin(), order.end(), b);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return m.row_indices()[x] < m.row_indices()[y];
    });
    for (std::size_t q = 0; q < n; ++q) {
      rows[b + q] = m.row_indices()[order[q]];
      vals[b + q] = m.values()[order[q]];
    }
  }
  return CscMatrix(m.nrows(), m.ncols(), std::move(colptr), std::move(rows), std::move(vals));
}

namespace {

void check_permutation(std::span<const Index> perm, Index n) {
  if (perm.size() != static_cast<std::size_t>(n))
    throw InputError("permutation length does not match column count");
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (Index p : perm) {
    if (p < 0 || p >= n || hit[static_cast<std::size_t>(p)])
      throw InputError("not a permutation");
    hit[static_cast<std::size_t>(p)] = true;
  }
}

CscMatrix gather_columns(const CscMatrix& m, std::span<const Index> source_of) {
  std::vector<Index> colptr(static_cast<std::size_t>(m.ncols()) + 1, 0);
  std::vector<Index> rows;
  std::vector<double> vals;
  rows.reserve(static_cast<std::size_t>(m.nnz()));
  vals.reserve(static_cast<std::size_t>(m.nnz()));
  for (Index j = 0; j < m.ncols(); ++j) {
    const Index src = source_of[static_cast<std::size_t>(j)];
    auto r = m.col_rows(src);
    auto v = m.col_values(src);
    rows.insert(rows.end(), r.begin(), r.end());
    vals.insert(vals.end(), v.begin(), v.end());
    colptr[static_cast<std::size_t>(j) + 1] = static_cast<Index>(rows.size());
  }
  return CscMatrix(m.nrows(), m.ncols(), std::move(colptr), std::move(rows), std::move(vals));
}

}  // namespace

CscMatrix permute_columns(const CscMatrix& m, std::span<const Index> perm) {
  check_permutation(perm, m.ncols());
  return gather_columns(m, perm);
}

CscMatrix unpermute_columns(const CscMatrix& m, std::span<const Index> perm) {
  check_permutation(perm, m.ncols());
  std::vector<Index> inverse(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    inverse[static_cast<std::size_t>(perm[i])] = static_cast<Index>(i);
  return gather_columns(m, inverse);
}

CscMatrix identity(Index n) {
  std::vector<Index> colptr(static_cast<std::size_t>(n) + 1);
  std::iota(colptr.begin(), colptr.end(), Index{0});
  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  return CscMatrix(n, n, std::move(colptr), std::move(rows),
                   std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

DenseMatrix to_dense(const CscMatrix& m) {
  DenseMatrix d(m.nrows(), m.ncols());
  for (Index j = 0; j < m.ncols(); ++j) {
    auto rows = m.col_rows(j);
    auto vals = m.col_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) d(rows[p], j) = vals[p];
  }
  return d;
}

ColumnSink::ColumnSink(Index nrows, Index ncols)
    : nrows_(nrows),
      rows_(static_cast<std::size_t>(ncols)),
      values_(static_cast<std::size_t>(ncols)) {}

void ColumnSink::set_column(Index j, std::vector<Index> rows, std::vector<double> values) {
  rows_.at(static_cast<std::size_t>(j)) = std::move(rows);
  values_.at(static_cast<std::size_t>(j)) = std::move(values);
}

CscMatrix ColumnSink::finish() && {
  const auto ncols = static_cast<Index>(rows_.size());
  std::vector<Index> colptr(rows_.size() + 1, 0);
  std::vector<Index> rows;
  std::vector<double> vals;
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    rows.insert(rows.end(), rows_[j].begin(), rows_[j].end());
    vals.insert(vals.end(), values_[j].begin(), values_[j].end());
    colptr[j + 1] = static_cast<Index>(rows.size());
  }
  return CscMatrix(nrows_, ncols, std::move(colptr), std::move(rows), std::move(vals));
}

}  // namespace spgemm
