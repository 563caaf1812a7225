#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spgemm/csc_matrix.hpp"
#include "spgemm/kernels.hpp"
#include "spgemm/vec_engine.hpp"

namespace spgemm {

/// Intermediate products of an expand-sort-compress pass.
struct EscTriplets {
  std::vector<Index> id_row;
  std::vector<Index> id_col;
  std::vector<double> esc_val;

  std::size_t size() const { return esc_val.size(); }
};

inline constexpr std::uint64_t kDefaultEscThreshold = 10000;

/// Radix width policy: automatic picks 5 bits unless 6 bits needs fewer rounds.
enum class RadixPolicy { automatic, fixed5, fixed6 };

struct RadixChoice {
  unsigned bits = 5;
  unsigned rounds = 0;
};

/// Number of bits needed for keys in [0, key_bound).
unsigned key_bits(std::uint64_t key_bound);
RadixChoice choose_radix(std::uint64_t key_bound, RadixPolicy policy = RadixPolicy::automatic);

struct ColumnGroup {
  Index begin = 0;
  Index end = 0;
};

/// Consecutive columns grouped until their summed load reaches threshold.
std::vector<ColumnGroup> esc_groups(std::span<const std::uint64_t> ops, std::uint64_t threshold);

EscTriplets esc_expand(const CscMatrix& a, const CscMatrix& b, ColumnGroup group,
                       vm::VecEngine& engine);

/// Stable LSD radix sort by row, then by column, so the result is ordered by
/// (column, row).
EscTriplets esc_radix_sort(EscTriplets t, std::uint64_t nrows, std::uint64_t ncols,
                           RadixPolicy policy, vm::VecEngine& engine);

/// Appends entries in ascending (column, row) order.
class CscBuilder {
 public:
  CscBuilder(Index nrows, Index ncols);

  void append(Index row, Index col, double value);
  Index nnz() const { return static_cast<Index>(rows_.size()); }
  CscMatrix finish() &&;

 private:
  Index nrows_;
  Index ncols_;
  std::vector<Index> counts_;
  std::vector<Index> rows_;
  std::vector<double> values_;
  Index last_row_ = -1;
  Index last_col_ = -1;
};

/// Sums runs of equal (row, column) keys and appends them to out. Returns the
/// number of entries appended.
std::size_t esc_compress(const EscTriplets& t, vm::VecEngine& engine, CscBuilder& out);

KernelResult esc_kernel(const CscMatrix& a, const CscMatrix& b, std::uint64_t group_threshold,
                        RadixPolicy policy, vm::VecEngine& engine);

}  // namespace spgemm
