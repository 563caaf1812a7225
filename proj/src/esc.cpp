#include "spgemm/esc.hpp"

#include <bit>
#include <numeric>
#include <string>

#include "kernel_detail.hpp"
#include "spgemm/preprocess.hpp"

namespace spgemm {

using vm::Cmp;
using vm::VecMask;
using vm::VIndex;
using vm::VReal;

unsigned key_bits(std::uint64_t key_bound) {
  return key_bound <= 1 ? 0u : static_cast<unsigned>(std::bit_width(key_bound - 1));
}

RadixChoice choose_radix(std::uint64_t key_bound, RadixPolicy policy) {
  const unsigned bits = key_bits(key_bound);
  const unsigned rounds5 = (bits + 4) / 5;
  const unsigned rounds6 = (bits + 5) / 6;
  switch (policy) {
    case RadixPolicy::fixed5: return {5, rounds5};
    case RadixPolicy::fixed6: return {6, rounds6};
    case RadixPolicy::automatic: break;
  }
  return rounds6 < rounds5 ? RadixChoice{6, rounds6} : RadixChoice{5, rounds5};
}

std::vector<ColumnGroup> esc_groups(std::span<const std::uint64_t> ops, std::uint64_t threshold) {
  if (threshold < 1) throw InputError("ESC group threshold must be at least 1");
  std::vector<ColumnGroup> groups;
  const auto n = static_cast<Index>(ops.size());
  Index begin = 0;
  std::uint64_t load = 0;
  for (Index j = 0; j < n; ++j) {
    load += ops[static_cast<std::size_t>(j)];
    if (load >= threshold) {
      groups.push_back({begin, j + 1});
      begin = j + 1;
      load = 0;
    }
  }
  if (begin < n) groups.push_back({begin, n});
  return groups;
}

EscTriplets esc_expand(const CscMatrix& a, const CscMatrix& b, ColumnGroup group,
                       vm::VecEngine& engine) {
  detail::check_product_shapes(a, b);
  if (group.begin < 0 || group.end > b.ncols() || group.begin > group.end)
    throw InputError("column group outside B");
  std::size_t k = 0;
  for (Index j = group.begin; j < group.end; ++j)
    for (Index r : b.col_rows(j)) k += static_cast<std::size_t>(a.col_nnz(r));

  EscTriplets t;
  t.id_row.resize(k);
  t.id_col.resize(k);
  t.esc_val.resize(k);
  std::size_t at = 0;
  for (Index j = group.begin; j < group.end; ++j) {
    auto b_rows = b.col_rows(j);
    auto b_vals = b.col_values(j);
    for (std::size_t q = 0; q < b_rows.size(); ++q) {
      engine.count_loop_iteration();
      const Index src = b_rows[q];
      const auto begin = static_cast<std::size_t>(a.col_begin(src));
      const auto len = static_cast<std::size_t>(a.col_nnz(src));
      for (std::size_t off = 0; off < len;) {
        const std::size_t vl = engine.set_vl(len - off);
        const VecMask all = engine.all_true();
        const VReal prod = engine.mul(engine.load(a.values(), begin + off), b_vals[q], all);
        engine.store<Index>(t.id_row, at, engine.load(a.row_indices(), begin + off));
        engine.store<Index>(t.id_col, at, engine.broadcast(j));
        engine.store<double>(t.esc_val, at, prod);
        at += vl;
        off += vl;
      }
    }
  }
  return t;
}

namespace {

/// One stable bucket-sort round on `digit = (key >> shift) & (2^bits - 1)`.
/// Virtual processor p owns the contiguous run [p * chunk, (p + 1) * chunk)
/// and its own 2^bits counters, stored bucket-major at bucket * P + p.
void radix_round(const EscTriplets& src, EscTriplets& dst, bool by_row, unsigned shift,
                 unsigned bits, vm::VecEngine& engine) {
  const std::size_t k = src.size();
  const std::span<const Index> keys = by_row ? src.id_row : src.id_col;
  const std::uint64_t buckets = std::uint64_t{1} << bits;

  const std::size_t procs = engine.set_vl(k);
  const std::size_t chunk = (k + procs - 1) / procs;
  const auto p_count = static_cast<Index>(procs);
  std::vector<Index> hist(buckets * procs);
  std::span<Index> counters(hist);

  for (std::size_t off = 0; off < hist.size();) {
    const std::size_t vl = engine.set_vl(hist.size() - off);
    engine.store(counters, off, engine.broadcast(Index{0}));
    off += vl;
  }

  engine.set_vl(procs);
  const VecMask all = engine.all_true();
  const VIndex lane = engine.iota();
  const VIndex start = engine.mul_add(lane, static_cast<Index>(chunk), engine.broadcast(Index{0}), all);

  VIndex addr = start;
  for (std::size_t s = 0; s < chunk; ++s) {
    engine.count_loop_iteration();
    const VecMask valid = engine.compare(addr, Cmp::lt, static_cast<Index>(k), all);
    const VIndex key = engine.gather(keys, addr, valid);
    const VIndex digit =
        engine.bit_and(engine.shift_right(key, shift, valid), buckets - 1, valid);
    const VIndex slot = engine.mul_add(digit, p_count, lane, valid);
    const VIndex count = engine.gather<Index>(counters, slot, valid);
    engine.scatter(counters, slot, engine.add(count, Index{1}, valid), valid);
    addr = engine.add(addr, Index{1}, all);
  }

  // Exclusive scan in (bucket, processor) order keeps the sort stable. This
  // is scalar work and is not charged to the vector counters.
  Index running = 0;
  for (auto& c : hist) {
    const Index n = c;
    c = running;
    running += n;
  }

  dst.id_row.resize(k);
  dst.id_col.resize(k);
  dst.esc_val.resize(k);
  addr = start;
  for (std::size_t s = 0; s < chunk; ++s) {
    engine.count_loop_iteration();
    const VecMask valid = engine.compare(addr, Cmp::lt, static_cast<Index>(k), all);
    const VIndex row = engine.gather(std::span<const Index>(src.id_row), addr, valid);
    const VIndex col = engine.gather(std::span<const Index>(src.id_col), addr, valid);
    const VReal val = engine.gather(std::span<const double>(src.esc_val), addr, valid);
    const VIndex& key = by_row ? row : col;
    const VIndex digit =
        engine.bit_and(engine.shift_right(key, shift, valid), buckets - 1, valid);
    const VIndex slot = engine.mul_add(digit, p_count, lane, valid);
    const VIndex target = engine.gather<Index>(counters, slot, valid);
    engine.scatter<Index>(dst.id_row, target, row, valid);
    engine.scatter<Index>(dst.id_col, target, col, valid);
    engine.scatter<double>(dst.esc_val, target, val, valid);
    engine.scatter(counters, slot, engine.add(target, Index{1}, valid), valid);
    addr = engine.add(addr, Index{1}, all);
  }
}

}  // namespace

EscTriplets esc_radix_sort(EscTriplets t, std::uint64_t nrows, std::uint64_t ncols,
                           RadixPolicy policy, vm::VecEngine& engine) {
  if (t.id_row.size() != t.size() || t.id_col.size() != t.size())
    throw InputError("triplet arrays differ in length");
  if (t.size() == 0) return t;
  EscTriplets scratch;
  for (const bool by_row : {true, false}) {
    const RadixChoice choice = choose_radix(by_row ? nrows : ncols, policy);
    for (unsigned round = 0; round < choice.rounds; ++round) {
      radix_round(t, scratch, by_row, round * choice.bits, choice.bits, engine);
      std::swap(t, scratch);
    }
  }
  return t;
}

CscBuilder::CscBuilder(Index nrows, Index ncols)
    : nrows_(nrows), ncols_(ncols), counts_(static_cast<std::size_t>(ncols), 0) {}

void CscBuilder::append(Index row, Index col, double value) {
  if (row < 0 || row >= nrows_ || col < 0 || col >= ncols_)
    throw InternalError("entry outside the output matrix");
  if (col == last_col_ && row == last_row_) {
    values_.back() += value;
    return;
  }
  if (col < last_col_ || (col == last_col_ && row < last_row_))
    throw InternalError("entries appended out of (column, row) order");
  rows_.push_back(row);
  values_.push_back(value);
  ++counts_[static_cast<std::size_t>(col)];
  last_row_ = row;
  last_col_ = col;
}

CscMatrix CscBuilder::finish() && {
  std::vector<Index> colptr(counts_.size() + 1, 0);
  std::partial_sum(counts_.begin(), counts_.end(), colptr.begin() + 1);
  return CscMatrix(nrows_, ncols_, std::move(colptr), std::move(rows_), std::move(values_));
}

std::size_t esc_compress(const EscTriplets& t, vm::VecEngine& engine, CscBuilder& out) {
  const std::size_t k = t.size();
  if (k == 0) return 0;
  const std::size_t procs = engine.set_vl(k);
  const std::size_t chunk = (k + procs - 1) / procs;

  // Each virtual processor writes its runs to its own part of these arrays.
  std::vector<Index> run_row(k);
  std::vector<Index> run_col(k);
  std::vector<double> run_val(k);

  const VecMask all = engine.all_true();
  const VIndex lane = engine.iota();
  const VIndex base = engine.mul_add(lane, static_cast<Index>(chunk), engine.broadcast(Index{0}), all);
  VIndex addr = base;
  VIndex cur_row = engine.broadcast(Index{-1});
  VIndex cur_col = engine.broadcast(Index{-1});
  VReal cur_val = engine.broadcast(0.0);
  VIndex runs = engine.broadcast(Index{0});

  auto flush = [&](const VecMask& lanes) {
    const VIndex slot = engine.add(base, runs, lanes);
    engine.scatter<Index>(run_row, slot, cur_row, lanes);
    engine.scatter<Index>(run_col, slot, cur_col, lanes);
    engine.scatter<double>(run_val, slot, cur_val, lanes);
    runs = engine.add(runs, Index{1}, lanes);
  };

  for (std::size_t s = 0; s < chunk; ++s) {
    engine.count_loop_iteration();
    const VecMask valid = engine.compare(addr, Cmp::lt, static_cast<Index>(k), all);
    const VIndex row = engine.gather(std::span<const Index>(t.id_row), addr, valid);
    const VIndex col = engine.gather(std::span<const Index>(t.id_col), addr, valid);
    const VReal val = engine.gather(std::span<const double>(t.esc_val), addr, valid);
    const VecMask same = engine.mask_and(engine.compare(row, Cmp::eq, cur_row, valid),
                                         engine.compare(col, Cmp::eq, cur_col, valid));
    const VecMask fresh = engine.mask_andnot(valid, same);
    flush(engine.compare(cur_row, Cmp::ge, Index{0}, fresh));
    cur_val = engine.merge(fresh, val, engine.add(cur_val, val, same));
    cur_row = engine.merge(fresh, row, cur_row);
    cur_col = engine.merge(fresh, col, cur_col);
    addr = engine.add(addr, Index{1}, all);
  }
  flush(engine.compare(cur_row, Cmp::ge, Index{0}, all));

  // Runs split across processor boundaries are joined by a short
  // sequential pass over the processors.
  const Index before = out.nnz();
  for (std::size_t p = 0; p < procs; ++p) {
    engine.count_loop_iteration();
    const std::size_t first = p * chunk;
    for (Index q = 0; q < runs[p]; ++q) {
      const std::size_t at = first + static_cast<std::size_t>(q);
      out.append(run_row[at], run_col[at], run_val[at]);
    }
  }
  return static_cast<std::size_t>(out.nnz() - before);
}

KernelResult esc_kernel(const CscMatrix& a, const CscMatrix& b, std::uint64_t group_threshold,
                        RadixPolicy policy, vm::VecEngine& engine) {
  detail::check_product_shapes(a, b);
  const std::vector<std::uint64_t> ops = compute_ops(a, b);
  CscBuilder out(a.nrows(), b.ncols());
  for (const ColumnGroup& g : esc_groups(ops, group_threshold)) {
    EscTriplets t = esc_expand(a, b, g, engine);
    if (t.size() == 0) continue;
    t = esc_radix_sort(std::move(t), static_cast<std::uint64_t>(a.nrows()),
                       static_cast<std::uint64_t>(b.ncols()), policy, engine);
    esc_compress(t, engine, out);
  }
  return {std::move(out).finish(), engine.report()};
}

}  // namespace spgemm
