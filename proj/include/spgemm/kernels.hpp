#pragma once

#include <cstdint>

#include "spgemm/csc_matrix.hpp"
#include "spgemm/preprocess.hpp"
#include "spgemm/vec_engine.hpp"

namespace spgemm {

struct KernelResult {
  CscMatrix product;
  vm::CostReport cost;  // engine counters when the kernel returned
};

inline constexpr std::uint64_t kDefaultHashConstant = 2654435761ULL;

enum class BlockedVariant { spars, hash };

/// Scalar linear-probing table: the reference semantics of the per-lane
/// tables used by the HASH kernel.
class HashTable {
 public:
  HashTable(std::uint64_t size, std::uint64_t c, Index empty_marker);

  static std::uint64_t slot(Index row, std::uint64_t c, std::uint64_t size) {
    return (static_cast<std::uint64_t>(row) * c) & (size - 1);
  }

  /// Adds value into row's cell, inserting it if absent. Returns the cell.
  std::uint64_t accumulate(Index row, double value);

  std::uint64_t size() const { return hindices_.size(); }
  std::uint64_t fill() const { return fill_; }
  Index index_at(std::uint64_t cell) const { return hindices_[cell]; }
  double value_at(std::uint64_t cell) const { return hvalues_[cell]; }

 private:
  std::uint64_t c_;
  Index empty_;
  std::uint64_t fill_ = 0;
  std::vector<double> hvalues_;
  std::vector<Index> hindices_;
};

/// Vectorized sparse accumulator, one output column at a time.
KernelResult spa_kernel(const CscMatrix& a, const CscMatrix& b, vm::VecEngine& engine);

/// One output column per lane over blocks of load-sorted columns, with dense
/// per-lane accumulators.
KernelResult spars_kernel(const CscMatrix& a, const CscMatrix& b, BlockParams block,
                          vm::VecEngine& engine);
KernelResult spars_kernel(const CscMatrix& a, const CscMatrix& b, const ColumnPlan& plan,
                          vm::VecEngine& engine);

/// As spars_kernel but accumulating into per-lane hash tables sized by the
/// plan's schedule.
KernelResult hash_kernel(const CscMatrix& a, const CscMatrix& b, BlockParams block,
                         std::uint64_t c, vm::VecEngine& engine);
KernelResult hash_kernel(const CscMatrix& a, const CscMatrix& b, const ColumnPlan& plan,
                         std::uint64_t c, vm::VecEngine& engine);

/// Load-sorted columns with load >= t go through SPA, the rest through the
/// blocked variant.
KernelResult hybrid_kernel(const CscMatrix& a, const CscMatrix& b, Threshold t,
                           BlockParams block, BlockedVariant variant, std::uint64_t c,
                           vm::VecEngine& engine);
KernelResult hybrid_kernel(const CscMatrix& a, const CscMatrix& b, const ColumnPlan& plan,
                           BlockedVariant variant, std::uint64_t c, vm::VecEngine& engine);

}  // namespace spgemm
