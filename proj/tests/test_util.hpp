#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spgemm/csc_matrix.hpp"

namespace spgemm::testing {

using Grid4 = std::array<std::array<double, 4>, 4>;

// The worked example: A, B and their product, row-major.
inline constexpr Grid4 kFig1A{{{1, 0, 5, 0}, {0, 3, 0, 0}, {4, 0, 0, 1}, {0, 0, 2, 0}}};
inline constexpr Grid4 kFig1B{{{0, 1, 2, 3}, {2, 0, 4, 5}, {1, 3, 0, 1}, {0, 0, 1, 2}}};
inline constexpr Grid4 kFig1C{{{5, 16, 2, 8}, {6, 0, 12, 15}, {0, 4, 9, 14}, {2, 6, 0, 2}}};

inline CscMatrix from_grid(const Grid4& g) {
  TripletList t{4, 4, {}};
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if (g[i][j] != 0) t.entries.push_back({i, j, g[i][j]});
  return from_triplets(t);
}

inline CscMatrix fig1_a() { return from_grid(kFig1A); }
inline CscMatrix fig1_b() { return from_grid(kFig1B); }

inline std::string data_path(const std::string& name) {
  return std::string(SPGEMM_TEST_DATA) + "/" + name;
}

/// Random triplet matrix with each entry present with probability density;
/// values are small integers, occasionally negative.
inline CscMatrix random_matrix(Index nrows, Index ncols, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> val(-4, 9);
  TripletList t{nrows, ncols, {}};
  for (Index j = 0; j < ncols; ++j)
    for (Index i = 0; i < nrows; ++i)
      if (coin(rng) < density) {
        int v = val(rng);
        if (v == 0) v = 1;
        t.entries.push_back({i, j, static_cast<double>(v)});
      }
  return from_triplets(t);
}

/// Product counts per output column, computed from dense column counts.
inline std::vector<std::uint64_t> naive_ops(const CscMatrix& a, const CscMatrix& b) {
  const DenseMatrix da = to_dense(a);
  const DenseMatrix db = to_dense(b);
  std::vector<std::uint64_t> a_count(static_cast<std::size_t>(a.ncols()), 0);
  for (Index k = 0; k < a.ncols(); ++k)
    for (Index i = 0; i < a.nrows(); ++i)
      if (da(i, k) != 0) ++a_count[static_cast<std::size_t>(k)];
  std::vector<std::uint64_t> ops(static_cast<std::size_t>(b.ncols()), 0);
  for (Index j = 0; j < b.ncols(); ++j)
    for (Index k = 0; k < b.nrows(); ++k)
      if (db(k, j) != 0) ops[static_cast<std::size_t>(j)] += a_count[static_cast<std::size_t>(k)];
  return ops;
}

}  // namespace spgemm::testing
