#include "spgemm/preprocess.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "spgemm/errors.hpp"

namespace spgemm {

std::vector<std::uint64_t> ColumnPlan::sorted_ops() const {
  std::vector<std::uint64_t> out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = sorted_op(i);
  return out;
}

std::vector<std::uint64_t> compute_ops(const CscMatrix& a, const CscMatrix& b) {
  if (a.ncols() != b.nrows())
    throw InputError("dimension mismatch: A has " + std::to_string(a.ncols()) +
                     " columns, B has " + std::to_string(b.nrows()) + " rows");
  std::vector<std::uint64_t> ops(static_cast<std::size_t>(b.ncols()), 0);
  for (Index j = 0; j < b.ncols(); ++j)
    for (Index k : b.col_rows(j)) ops[static_cast<std::size_t>(j)] += static_cast<std::uint64_t>(a.col_nnz(k));
  return ops;
}

std::vector<Index> sort_columns(std::span<const std::uint64_t> ops) {
  std::vector<Index> perm(ops.size());
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(), [&](Index x, Index y) {
    return ops[static_cast<std::size_t>(x)] > ops[static_cast<std::size_t>(y)];
  });
  return perm;
}

std::vector<BlockRange> plan_blocks(std::span<const std::uint64_t> sorted_ops, std::size_t b_min,
                                    std::size_t b_max, std::size_t max_vl) {
  if (b_min < 1 || b_min > b_max || b_max > max_vl)
    throw InputError("block sizes must satisfy 1 <= b_min <= b_max <= max_vl (got " +
                     std::to_string(b_min) + ", " + std::to_string(b_max) + ", " +
                     std::to_string(max_vl) + ")");
  const std::size_t n = sorted_ops.size();
  std::vector<BlockRange> blocks;
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = std::min(begin + b_min, n);
    const std::size_t limit = std::min(begin + b_max, n);
    while (end < limit && sorted_ops[end] == sorted_ops[begin]) ++end;
    blocks.push_back({begin, end});
    begin = end;
  }
  return blocks;
}

std::vector<std::uint64_t> hash_size_schedule(std::span<const std::uint64_t> sorted_ops,
                                              std::span<const BlockRange> blocks) {
  std::vector<std::uint64_t> sizes;
  sizes.reserve(blocks.size());
  for (const auto& blk : blocks) {
    if (blk.begin >= blk.end || blk.end > sorted_ops.size())
      throw InputError("block range outside the column loads");
    const std::uint64_t max_op =
        *std::max_element(sorted_ops.begin() + static_cast<std::ptrdiff_t>(blk.begin),
                          sorted_ops.begin() + static_cast<std::ptrdiff_t>(blk.end));
    const std::uint64_t needed = std::bit_ceil(max_op + 1);
    if (!sizes.empty() && needed > sizes.back())
      throw InputError("hash table would have to grow; column loads are not sorted descending");
    sizes.push_back(needed);
  }
  return sizes;
}

std::size_t hybrid_split(std::span<const std::uint64_t> sorted_ops, Threshold t) {
  const auto it = std::find_if(sorted_ops.begin(), sorted_ops.end(),
                               [t](std::uint64_t op) { return op < t; });
  return static_cast<std::size_t>(it - sorted_ops.begin());
}

ColumnPlan make_plan(const CscMatrix& a, const CscMatrix& b, const PlanOptions& options) {
  ColumnPlan plan;
  plan.ops = compute_ops(a, b);
  plan.perm = sort_columns(plan.ops);
  const std::vector<std::uint64_t> sorted = plan.sorted_ops();
  plan.hybrid_split = hybrid_split(sorted, options.threshold);

  const std::span<const std::uint64_t> tail =
      std::span<const std::uint64_t>(sorted).subspan(plan.hybrid_split);
  plan.blocks = plan_blocks(tail, options.block.b_min, options.block.b_max, options.max_vl);
  if (options.hash_sizes) plan.hash_sizes = hash_size_schedule(tail, plan.blocks);
  for (auto& blk : plan.blocks) {
    blk.begin += plan.hybrid_split;
    blk.end += plan.hybrid_split;
  }
  return plan;
}

}  // namespace spgemm
