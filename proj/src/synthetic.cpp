#include "spgemm/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>

#include "spgemm/errors.hpp"

namespace spgemm {

CscMatrix generate_synthetic(Index n, Index z, std::uint64_t seed) {
  if (n <= 0) throw InputError("synthetic matrix size must be positive");
  if (z <= 0 || z > n)
    throw InputError("non-zeros per column must be in [1, n], got " + std::to_string(z));

  std::vector<Index> colptr(static_cast<std::size_t>(n) + 1);
  std::vector<Index> rows;
  std::vector<double> vals;
  rows.reserve(static_cast<std::size_t>(n * z));
  vals.reserve(static_cast<std::size_t>(n * z));

  std::vector<Index> picked;
  std::unordered_set<Index> taken;
  for (Index j = 0; j < n; ++j) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32)};
    std::mt19937_64 rng(seq);

    // Floyd's sampling: z distinct rows, each subset equally likely.
    picked.clear();
    taken.clear();
    for (Index r = n - z; r < n; ++r) {
      std::uniform_int_distribution<Index> pick(0, r);
      Index row = pick(rng);
      if (!taken.insert(row).second) {
        row = r;
        taken.insert(row);
      }
      picked.push_back(row);
    }
    std::sort(picked.begin(), picked.end());
    for (Index row : picked) {
      rows.push_back(row);
      // 53 random mantissa bits: exactly uniform on [1, 2).
      vals.push_back(1.0 + static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }
    colptr[static_cast<std::size_t>(j) + 1] = static_cast<Index>(rows.size());
  }
  return CscMatrix(n, n, std::move(colptr), std::move(rows), std::move(vals));
}

}  // namespace spgemm
