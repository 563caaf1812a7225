#include "spgemm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spgemm/errors.hpp"

namespace spgemm {

namespace {

void check_shapes(const CscMatrix& a, const CscMatrix& b) {
  if (a.ncols() != b.nrows())
    throw InputError("dimension mismatch: A is " + std::to_string(a.nrows()) + "x" +
                     std::to_string(a.ncols()) + ", B is " + std::to_string(b.nrows()) + "x" +
                     std::to_string(b.ncols()));
}

bool close(double got, double want, double rel_tol) {
  return std::abs(got - want) <= rel_tol * std::max(1.0, std::abs(want));
}

}  // namespace

GustavsonResult gustavson_product(const CscMatrix& a, const CscMatrix& b) {
  check_shapes(a, b);
  const auto m = static_cast<std::size_t>(a.nrows());
  std::vector<double> spa_values(m, 0.0);
  std::vector<char> spa_flags(m, 0);
  std::vector<Index> spa_indices(m, 0);

  std::vector<Index> colptr(static_cast<std::size_t>(b.ncols()) + 1, 0);
  std::vector<Index> rows;
  std::vector<double> vals;
  std::uint64_t mults = 0;

  for (Index j = 0; j < b.ncols(); ++j) {
    std::size_t counter = 0;
    auto b_rows = b.col_rows(j);
    auto b_vals = b.col_values(j);
    for (std::size_t q = 0; q < b_rows.size(); ++q) {
      const Index k = b_rows[q];
      auto a_rows = a.col_rows(k);
      auto a_vals = a.col_values(k);
      for (std::size_t p = 0; p < a_rows.size(); ++p) {
        const auto i = static_cast<std::size_t>(a_rows[p]);
        spa_values[i] += a_vals[p] * b_vals[q];
        ++mults;
        if (spa_flags[i] == 0) {
          spa_flags[i] = 1;
          spa_indices[counter++] = a_rows[p];
        }
      }
    }
    for (std::size_t c = 0; c < counter; ++c) {
      const auto i = static_cast<std::size_t>(spa_indices[c]);
      rows.push_back(spa_indices[c]);
      vals.push_back(spa_values[i]);
      spa_values[i] = 0.0;
      spa_flags[i] = 0;
    }
    colptr[static_cast<std::size_t>(j) + 1] = colptr[static_cast<std::size_t>(j)] +
                                              static_cast<Index>(counter);
  }
  return {CscMatrix(a.nrows(), b.ncols(), std::move(colptr), std::move(rows), std::move(vals)),
          mults};
}

CscMatrix gustavson_reference(const CscMatrix& a, const CscMatrix& b) {
  return canonicalize(gustavson_product(a, b).product);
}

DenseMatrix dense_oracle(const CscMatrix& a, const CscMatrix& b) {
  check_shapes(a, b);
  const DenseMatrix da = to_dense(a);
  const DenseMatrix db = to_dense(b);
  DenseMatrix c(a.nrows(), b.ncols());
  for (Index j = 0; j < b.ncols(); ++j) {
    for (Index k = 0; k < a.ncols(); ++k) {
      const double bkj = db(k, j);
      if (bkj == 0.0) continue;
      for (Index i = 0; i < a.nrows(); ++i) c(i, j) += da(i, k) * bkj;
    }
  }
  return c;
}

bool matrices_match(const CscMatrix& c, const DenseMatrix& ref, double rel_tol) {
  if (c.nrows() != ref.nrows() || c.ncols() != ref.ncols()) return false;
  const CscMatrix canon = canonicalize(c);
  for (Index j = 0; j < canon.ncols(); ++j) {
    auto rows = canon.col_rows(j);
    auto vals = canon.col_values(j);
    std::size_t p = 0;
    for (Index i = 0; i < canon.nrows(); ++i) {
      double got = 0.0;
      if (p < rows.size() && rows[p] == i) got = vals[p++];
      if (!close(got, ref(i, j), rel_tol)) return false;
    }
  }
  return true;
}

bool matrices_match(const CscMatrix& c, const CscMatrix& ref, double rel_tol) {
  if (c.nrows() != ref.nrows() || c.ncols() != ref.ncols()) return false;
  const CscMatrix x = canonicalize(c);
  const CscMatrix y = canonicalize(ref);
  for (Index j = 0; j < x.ncols(); ++j) {
    auto xr = x.col_rows(j);
    auto xv = x.col_values(j);
    auto yr = y.col_rows(j);
    auto yv = y.col_values(j);
    std::size_t p = 0, q = 0;
    while (p < xr.size() || q < yr.size()) {
      if (q == yr.size() || (p < xr.size() && xr[p] < yr[q])) {
        if (!close(xv[p++], 0.0, rel_tol)) return false;
      } else if (p == xr.size() || yr[q] < xr[p]) {
        if (!close(0.0, yv[q++], rel_tol)) return false;
      } else {
        if (!close(xv[p++], yv[q++], rel_tol)) return false;
      }
    }
  }
  return true;
}

}  // namespace spgemm
