#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <tuple>

#include "spgemm/errors.hpp"
#include "spgemm/esc.hpp"
#include "spgemm/reference.hpp"
#include "spgemm/synthetic.hpp"
#include "test_util.hpp"

using namespace spgemm;
using namespace spgemm::testing;
using vm::VecEngine;

namespace {

unsigned ceil_log2(std::uint64_t n) {
  unsigned b = 0;
  while ((std::uint64_t{1} << b) < n) ++b;
  return b;
}

unsigned ceil_div(unsigned a, unsigned b) { return (a + b - 1) / b; }

EscTriplets random_triplets(std::size_t k, Index nrows, Index ncols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EscTriplets t;
  for (std::size_t i = 0; i < k; ++i) {
    t.id_row.push_back(static_cast<Index>(rng() % static_cast<std::uint64_t>(nrows)));
    t.id_col.push_back(static_cast<Index>(rng() % static_cast<std::uint64_t>(ncols)));
    t.esc_val.push_back(static_cast<double>(i));  // records original position
  }
  return t;
}

}  // namespace

TEST(Radix, Examples) {
  EXPECT_EQ(key_bits(4), 2u);
  const RadixChoice four = choose_radix(4);
  EXPECT_EQ(four.bits, 5u);
  EXPECT_EQ(four.rounds, 1u);
  const RadixChoice big = choose_radix(4096);
  EXPECT_EQ(big.bits, 6u);
  EXPECT_EQ(big.rounds, 2u);
  EXPECT_EQ(choose_radix(4096, RadixPolicy::fixed5).rounds, 3u);
  EXPECT_EQ(choose_radix(1).rounds, 0u);
}

TEST(Radix, SixBitsExactlyWhenFewerRounds) {
  for (std::uint64_t n = 2; n < 300000; n = n * 3 / 2 + 1) {
    const unsigned bits = ceil_log2(n);
    const bool six = ceil_div(bits, 6) < ceil_div(bits, 5);
    const RadixChoice c = choose_radix(n);
    ASSERT_EQ(c.bits, six ? 6u : 5u) << n;
    ASSERT_EQ(c.rounds, ceil_div(bits, c.bits)) << n;
  }
}

TEST(Groups, WholeMatrixUnderThreshold) {
  const auto ops = std::vector<std::uint64_t>{3, 4, 4, 6};
  const auto g = esc_groups(ops, kDefaultEscThreshold);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].begin, 0);
  EXPECT_EQ(g[0].end, 4);
}

TEST(Groups, ThresholdOneSplitsLoadedColumns) {
  const std::vector<std::uint64_t> ops{3, 0, 4, 4, 0, 6};
  const auto g = esc_groups(ops, 1);
  ASSERT_EQ(g.size(), 4u);  // empty columns ride along with the next one
  for (const auto& grp : g) {
    std::uint64_t load = 0;
    for (Index j = grp.begin; j < grp.end; ++j) load += ops[static_cast<std::size_t>(j)];
    EXPECT_GE(load, 1u);
  }
  EXPECT_THROW(esc_groups(ops, 0), InputError);
}

TEST(Groups, GreedyClosesAtThreshold) {
  const std::vector<std::uint64_t> ops{5, 5, 5, 5, 5};
  const auto g = esc_groups(ops, 10);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].end, 2);
  EXPECT_EQ(g[1].end, 4);
  EXPECT_EQ(g[2].end, 5);
}

TEST(Expand, WorkedExampleCounts) {
  VecEngine e;
  const EscTriplets all = esc_expand(fig1_a(), fig1_b(), {0, 4}, e);
  EXPECT_EQ(all.size(), 17u);
  EXPECT_EQ(all.id_row.size(), 17u);
  EXPECT_EQ(e.report().loop_iterations, 11u);
  EXPECT_EQ(esc_expand(fig1_a(), fig1_b(), {2, 2}, e).size(), 0u);
  EXPECT_EQ(esc_expand(fig1_a(), fig1_b(), {3, 4}, e).size(), 6u);
  EXPECT_THROW(esc_expand(fig1_a(), fig1_b(), {2, 5}, e), InputError);
}

TEST(Expand, ProductsMatchDefinition) {
  VecEngine e;
  const EscTriplets t = esc_expand(fig1_a(), fig1_b(), {1, 2}, e);
  // Column 1 of B: B(0,1)=1 hits A col 0 {rows 0,2}; B(2,1)=3 hits A col 2 {rows 0,3}.
  EXPECT_EQ(t.id_row, (std::vector<Index>{0, 2, 0, 3}));
  EXPECT_EQ(t.id_col, (std::vector<Index>{1, 1, 1, 1}));
  EXPECT_EQ(t.esc_val, (std::vector<double>{1, 4, 15, 6}));
}

TEST(Sort, OrdersByColumnThenRowStably) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index nrows = 1 + static_cast<Index>(seed * 37 % 3000);
    const Index ncols = 1 + static_cast<Index>(seed * 11 % 90);
    const std::size_t k = 1 + seed * 97 % 2000;
    const EscTriplets in = random_triplets(k, nrows, ncols, seed);
    VecEngine e;
    const EscTriplets out = esc_radix_sort(in, static_cast<std::uint64_t>(nrows),
                                           static_cast<std::uint64_t>(ncols),
                                           RadixPolicy::automatic, e);
    ASSERT_EQ(out.size(), k);
    // Oracle: std::stable_sort on (col, row) keys.
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return std::tie(in.id_col[x], in.id_row[x]) < std::tie(in.id_col[y], in.id_row[y]);
    });
    for (std::size_t i = 0; i < k; ++i) {
      ASSERT_EQ(out.id_row[i], in.id_row[idx[i]]);
      ASSERT_EQ(out.id_col[i], in.id_col[idx[i]]);
      ASSERT_EQ(out.esc_val[i], in.esc_val[idx[i]]);
    }
  }
}

TEST(Sort, FixedRadixPoliciesAgree) {
  const EscTriplets in = random_triplets(500, 5000, 70, 3);
  VecEngine e5, e6, ea;
  const auto a = esc_radix_sort(in, 5000, 70, RadixPolicy::fixed5, e5);
  const auto b = esc_radix_sort(in, 5000, 70, RadixPolicy::fixed6, e6);
  EXPECT_EQ(a.id_row, b.id_row);
  EXPECT_EQ(a.esc_val, b.esc_val);
  // 13-bit rows: 3 rounds either way, so 6 bits buys nothing; cols: 7 bits.
  EXPECT_EQ(choose_radix(5000).bits, 5u);
  esc_radix_sort(in, 5000, 70, RadixPolicy::automatic, ea);
  EXPECT_EQ(ea.report(), e5.report());
}

TEST(Sort, AlreadySortedIsUnchanged) {
  EscTriplets t;
  for (Index c = 0; c < 5; ++c)
    for (Index r = 0; r < 7; ++r) {
      t.id_row.push_back(r);
      t.id_col.push_back(c);
      t.esc_val.push_back(static_cast<double>(c * 10 + r));
    }
  VecEngine e;
  const EscTriplets out = esc_radix_sort(t, 7, 5, RadixPolicy::automatic, e);
  EXPECT_EQ(out.id_row, t.id_row);
  EXPECT_EQ(out.id_col, t.id_col);
  EXPECT_EQ(out.esc_val, t.esc_val);
}

TEST(Sort, UsesIndexedAccessesWithinBounds) {
  const EscTriplets in = random_triplets(1000, 100, 100, 9);
  VecEngine e;
  esc_radix_sort(in, 100, 100, RadixPolicy::automatic, e);
  EXPECT_GT(e.report().gather_scatter_ops, 0u);
  EXPECT_GT(e.report().loop_iterations, 0u);
}

TEST(Compress, AllSameKeyCollapses) {
  EscTriplets t;
  for (int i = 0; i < 600; ++i) {
    t.id_row.push_back(2);
    t.id_col.push_back(1);
    t.esc_val.push_back(0.5);
  }
  VecEngine e;
  CscBuilder out(3, 3);
  EXPECT_EQ(esc_compress(t, e, out), 1u);
  const CscMatrix m = std::move(out).finish();
  ASSERT_EQ(m.nnz(), 1);
  EXPECT_EQ(m.values()[0], 300.0);
  EXPECT_EQ(m.col_nnz(1), 1);
}

TEST(Compress, DistinctKeysAllKept) {
  EscTriplets t;
  for (Index c = 0; c < 20; ++c)
    for (Index r = 0; r < 30; r += 3) {
      t.id_row.push_back(r);
      t.id_col.push_back(c);
      t.esc_val.push_back(1.0 + static_cast<double>(r));
    }
  VecEngine e;
  CscBuilder out(30, 20);
  EXPECT_EQ(esc_compress(t, e, out), t.size());
  const CscMatrix m = std::move(out).finish();
  EXPECT_TRUE(m.is_canonical());
  EXPECT_EQ(static_cast<std::size_t>(m.nnz()), t.size());
}

TEST(Compress, RunsSpanningProcessorsAreMerged) {
  // Runs of random length straddle chunk boundaries; the total must match a
  // scalar run-length sum.
  std::mt19937_64 rng(77);
  EscTriplets t;
  std::vector<std::pair<Index, double>> expect;  // (key, sum)
  Index key = 0;
  while (t.size() < 3000) {
    const int len = 1 + static_cast<int>(rng() % 40);
    double sum = 0;
    for (int i = 0; i < len; ++i) {
      t.id_row.push_back(key % 50);
      t.id_col.push_back(key / 50);
      t.esc_val.push_back(1.0);
      sum += 1.0;
    }
    expect.push_back({key, sum});
    key += 1 + static_cast<Index>(rng() % 3);
  }
  VecEngine e;
  CscBuilder out(50, key / 50 + 1);
  EXPECT_EQ(esc_compress(t, e, out), expect.size());
  const CscMatrix m = std::move(out).finish();
  for (std::size_t i = 0; i < expect.size(); ++i) ASSERT_EQ(m.values()[i], expect[i].second);
}

TEST(Builder, RejectsOutOfOrderAndOutOfRange) {
  CscBuilder b(3, 3);
  b.append(1, 0, 1.0);
  b.append(1, 0, 2.0);  // same key accumulates
  EXPECT_THROW(b.append(0, 0, 1.0), InternalError);
  EXPECT_THROW(b.append(3, 2, 1.0), InternalError);
  b.append(0, 2, 1.0);
  EXPECT_THROW(b.append(2, 1, 1.0), InternalError);
  const CscMatrix m = std::move(b).finish();
  EXPECT_EQ(m.nnz(), 2);
  EXPECT_EQ(m.values()[0], 3.0);
}

TEST(EscKernel, WorkedExample) {
  VecEngine e;
  const KernelResult r = esc_kernel(fig1_a(), fig1_b(), kDefaultEscThreshold,
                                    RadixPolicy::automatic, e);
  EXPECT_EQ(r.product.nnz(), 13);
  EXPECT_TRUE(matrices_match(r.product, dense_oracle(fig1_a(), fig1_b()), 0.0));
}

TEST(EscKernel, GroupingDoesNotChangeProduct) {
  const CscMatrix s = generate_synthetic(300, 5, 4);
  VecEngine e1, e2;
  const KernelResult one = esc_kernel(s, s, 1, RadixPolicy::automatic, e1);
  const KernelResult big = esc_kernel(s, s, kDefaultEscThreshold, RadixPolicy::automatic, e2);
  EXPECT_EQ(one.product, big.product);
  EXPECT_TRUE(one.product.is_canonical());
  EXPECT_TRUE(matrices_match(one.product, dense_oracle(s, s), 1e-12));
}
