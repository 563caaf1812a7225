#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "spgemm/csc_matrix.hpp"

namespace spgemm {

/// Half-open range of positions in the permuted column order.
struct BlockRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

/// Columns with load >= threshold go to the SPA path in hybrid kernels.
using Threshold = std::uint64_t;
inline constexpr Threshold kInfiniteThreshold = std::numeric_limits<Threshold>::max();

struct BlockParams {
  std::size_t b_min = 40;
  std::size_t b_max = 40;
};

/// Preprocessing result shared by the blocked and hybrid kernels.
struct ColumnPlan {
  std::vector<std::uint64_t> ops;         // multiplications per column of B
  std::vector<Index> perm;                // permuted position -> original column
  std::vector<BlockRange> blocks;         // cover [hybrid_split, ncols)
  std::optional<std::vector<std::uint64_t>> hash_sizes;  // one per block
  std::size_t hybrid_split = 0;           // positions before this use SPA

  std::uint64_t sorted_op(std::size_t pos) const {
    return ops[static_cast<std::size_t>(perm[pos])];
  }
  std::vector<std::uint64_t> sorted_ops() const;
};

struct PlanOptions {
  BlockParams block;
  std::size_t max_vl = 256;
  Threshold threshold = kInfiniteThreshold;
  bool hash_sizes = false;
};

/// ops[j] = sum over non-zeros B(k, j) of nnz(A(:, k)).
std::vector<std::uint64_t> compute_ops(const CscMatrix& a, const CscMatrix& b);

/// Stable sort of column indices by descending load.
std::vector<Index> sort_columns(std::span<const std::uint64_t> ops);

/// Block boundaries over descending loads. Each block starts with b_min
/// columns (fewer only at the end) and grows while the next column has the
/// same load as the block's first column, up to b_max.
std::vector<BlockRange> plan_blocks(std::span<const std::uint64_t> sorted_ops, std::size_t b_min,
                                    std::size_t b_max, std::size_t max_vl);

/// Smallest power of two strictly above each block's maximum load, never
/// growing from one block to the next. Throws InputError if the loads are
/// not sorted so that growth would be required.
std::vector<std::uint64_t> hash_size_schedule(std::span<const std::uint64_t> sorted_ops,
                                              std::span<const BlockRange> blocks);

/// First position whose load is below t.
std::size_t hybrid_split(std::span<const std::uint64_t> sorted_ops, Threshold t);

ColumnPlan make_plan(const CscMatrix& a, const CscMatrix& b, const PlanOptions& options);

}  // namespace spgemm
