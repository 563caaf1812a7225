#pragma once

#include <string>
#include <vector>

#include "spgemm/csc_matrix.hpp"
#include "spgemm/errors.hpp"
#include "spgemm/vec_engine.hpp"

namespace spgemm::detail {

inline void check_product_shapes(const CscMatrix& a, const CscMatrix& b) {
  if (a.ncols() != b.nrows())
    throw InputError("dimension mismatch: A has " + std::to_string(a.ncols()) +
                     " columns, B has " + std::to_string(b.nrows()) + " rows");
}

/// Dense accumulator for one output column.
struct SpaWorkspace {
  explicit SpaWorkspace(Index nrows)
      : values(static_cast<std::size_t>(nrows), 0.0),
        flags(static_cast<std::size_t>(nrows), 0),
        indices(static_cast<std::size_t>(nrows), 0) {}

  std::vector<double> values;
  std::vector<Index> flags;
  std::vector<Index> indices;
};

struct SparseColumn {
  std::vector<Index> rows;
  std::vector<double> values;
};

/// Computes A * b(:, j) with the vectorized accumulator. The workspace is
/// left zeroed on return.
SparseColumn spa_column(const CscMatrix& a, const CscMatrix& b, Index j, SpaWorkspace& ws,
                        vm::VecEngine& engine);

}  // namespace spgemm::detail
