#pragma once

#include <cstdint>

#include "spgemm/csc_matrix.hpp"

namespace spgemm {

struct GustavsonResult {
  CscMatrix product;  // first-touch row order, not canonical
  std::uint64_t multiplications = 0;
};

/// Scalar sparse-accumulator product, one column at a time.
GustavsonResult gustavson_product(const CscMatrix& a, const CscMatrix& b);

/// Canonicalized gustavson_product().
CscMatrix gustavson_reference(const CscMatrix& a, const CscMatrix& b);

/// Triple-loop product on dense storage.
DenseMatrix dense_oracle(const CscMatrix& a, const CscMatrix& b);

/// True iff every entry of c lies within rel_tol * max(1, |ref|) of ref,
/// treating entries missing from c as zero. Shapes must agree.
bool matrices_match(const CscMatrix& c, const DenseMatrix& ref, double rel_tol);

/// Same comparison against a sparse reference.
bool matrices_match(const CscMatrix& c, const CscMatrix& ref, double rel_tol);

}  // namespace spgemm
