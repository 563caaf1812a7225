#include <algorithm>
#include <string>

#include "kernel_detail.hpp"
#include "spgemm/kernels.hpp"

namespace spgemm {

using vm::Cmp;
using vm::VecMask;
using vm::VIndex;
using vm::VReal;

HashTable::HashTable(std::uint64_t size, std::uint64_t c, Index empty_marker)
    : c_(c), empty_(empty_marker), hvalues_(size, 0.0), hindices_(size, empty_marker) {
  if (size == 0 || (size & (size - 1)) != 0)
    throw InputError("hash table size must be a power of two");
}

std::uint64_t HashTable::accumulate(Index row, double value) {
  const std::uint64_t mask = size() - 1;
  std::uint64_t cell = slot(row, c_, size());
  for (std::uint64_t probes = 0; probes < size(); ++probes, cell = (cell + 1) & mask) {
    if (hindices_[cell] == row) {
      hvalues_[cell] += value;
      return cell;
    }
    if (hindices_[cell] == empty_) {
      if (fill_ + 1 >= size()) throw InternalError("hash table full");
      hindices_[cell] = row;
      hvalues_[cell] = value;
      ++fill_;
      return cell;
    }
  }
  throw InternalError("hash table full");
}

namespace {

/// Per-lane state registers of the blocked loop.
struct LaneCursor {
  VIndex b_pos;    // current position in B's storage
  VIndex b_end;    // end of each lane's B column
  VIndex a_count;  // offset inside the current A column
  VecMask active;
  // Located each pass for the active lanes.
  VIndex k;
  VIndex a_begin;
  VIndex a_end;
};

/// Loads the A column bounds for every active lane, stepping past B entries
/// whose A column is empty. Returns false once no lane has work left. The
/// skip passes are not main-loop trips.
bool locate_work(const CscMatrix& a, const CscMatrix& bp, LaneCursor& cur,
                 vm::VecEngine& engine) {
  const auto a_ptr = a.column_pointers();
  while (engine.any(cur.active)) {
    cur.k = engine.gather(bp.row_indices(), cur.b_pos, cur.active);
    cur.a_begin = engine.gather(a_ptr.first(a_ptr.size() - 1), cur.k, cur.active);
    cur.a_end = engine.gather(a_ptr.subspan(1), cur.k, cur.active);
    const VecMask empty = engine.compare(cur.a_begin, Cmp::eq, cur.a_end, cur.active);
    if (!engine.any(empty)) return true;
    cur.b_pos = engine.add(cur.b_pos, Index{1}, empty);
    cur.active = engine.compare(cur.b_pos, Cmp::lt, cur.b_end, cur.active);
  }
  return false;
}

/// One A element times one B element per active lane.
struct LaneProducts {
  VReal a_val;
  VReal b_val;
  VIndex row;
  VIndex a_pos;
};

LaneProducts load_products(const CscMatrix& a, const CscMatrix& bp, const LaneCursor& cur,
                           vm::VecEngine& engine) {
  LaneProducts p;
  p.b_val = engine.gather(bp.values(), cur.b_pos, cur.active);
  p.a_pos = engine.add(cur.a_begin, cur.a_count, cur.active);
  p.a_val = engine.gather(a.values(), p.a_pos, cur.active);
  p.row = engine.gather(a.row_indices(), p.a_pos, cur.active);
  return p;
}

/// Moves each lane to its next A element, or to the next B element when
/// the A column is exhausted. Realized with selects so that every lane of
/// the execution mask participates.
void advance(LaneCursor& cur, const LaneProducts& p, const VIndex& zeros, const VIndex& ones,
             vm::VecEngine& engine) {
  const VIndex next = engine.add(p.a_pos, Index{1}, cur.active);
  const VecMask last = engine.compare(next, Cmp::eq, cur.a_end, cur.active);
  cur.a_count = engine.merge(last, zeros, engine.add(cur.a_count, Index{1}, cur.active));
  cur.b_pos = engine.add(cur.b_pos, engine.merge(last, ones, zeros), cur.active);
  cur.active = engine.compare(cur.b_pos, Cmp::lt, cur.b_end, cur.active);
}

LaneCursor start_block(const CscMatrix& bp, BlockRange blk, vm::VecEngine& engine) {
  LaneCursor cur;
  const VecMask all = engine.all_true();
  cur.b_pos = engine.load(bp.column_pointers(), blk.begin);
  cur.b_end = engine.load(bp.column_pointers(), blk.begin + 1);
  cur.a_count = engine.broadcast(Index{0});
  cur.active = engine.compare(cur.b_pos, Cmp::lt, cur.b_end, all);
  return cur;
}

struct BlockContext {
  const CscMatrix& a;
  const CscMatrix& bp;
  std::span<const Index> perm;
  ColumnSink& sink;
  vm::VecEngine& engine;
};

/// Dense per-lane accumulators laid out lane-major: row i of lane l lives at
/// i * width + l, so the lanes of one scatter never collide.
struct SparsWorkspace {
  SparsWorkspace(Index nrows, std::size_t max_width)
      : values(static_cast<std::size_t>(nrows) * max_width, 0.0),
        flags(static_cast<std::size_t>(nrows) * max_width, 0),
        // One spare row: the touched-row store writes one slot ahead.
        indices((static_cast<std::size_t>(nrows) + 1) * max_width, 0) {}

  std::vector<double> values;
  std::vector<Index> flags;
  std::vector<Index> indices;
};

void spars_block(const BlockContext& ctx, BlockRange blk, SparsWorkspace& ws) {
  auto& engine = ctx.engine;
  const std::size_t width = engine.set_vl(blk.size());
  const auto w = static_cast<Index>(width);
  std::span<double> spa_values(ws.values);
  std::span<Index> spa_flags(ws.flags);
  std::span<Index> spa_indices(ws.indices);

  LaneCursor cur = start_block(ctx.bp, blk, engine);
  const VIndex lane = engine.iota();
  const VIndex zeros = engine.broadcast(Index{0});
  const VIndex ones = engine.broadcast(Index{1});
  VIndex count = zeros;

  while (locate_work(ctx.a, ctx.bp, cur, engine)) {
    engine.count_loop_iteration();
    const LaneProducts p = load_products(ctx.a, ctx.bp, cur, engine);
    const VIndex pos = engine.mul_add(p.row, w, lane, cur.active);
    VReal acc = engine.gather<double>(spa_values, pos, cur.active);
    const VIndex flag = engine.gather<Index>(spa_flags, pos, cur.active);
    acc = engine.fma(acc, p.a_val, p.b_val, cur.active);
    engine.scatter(spa_values, pos, acc, cur.active);
    const VecMask fresh = engine.compare(flag, Cmp::eq, Index{0}, cur.active);
    // The row goes to the lane's next free slot; the count only advances
    // for rows seen for the first time, so stale rows are overwritten.
    const VIndex slot = engine.mul_add(count, w, lane, cur.active);
    engine.scatter(spa_indices, slot, p.row, cur.active);
    engine.scatter(spa_flags, pos, ones, cur.active);
    count = engine.add(count, engine.merge(fresh, ones, zeros), cur.active);
    advance(cur, p, zeros, ones, engine);
  }

  // Store the lanes' columns left to right, clearing the touched cells.
  for (std::size_t l = 0; l < width; ++l) {
    const auto n = static_cast<std::size_t>(count[l]);
    std::vector<Index> rows(n);
    std::vector<double> vals(n);
    for (std::size_t off = 0; off < n;) {
      const std::size_t vl = engine.set_vl(n - off);
      const VecMask all = engine.all_true();
      const VIndex r = engine.load_strided<Index>(spa_indices, l + off * width, width);
      const VIndex at = engine.mul_add(r, w, engine.broadcast(static_cast<Index>(l)), all);
      const VReal v = engine.gather<double>(spa_values, at, all);
      engine.store<Index>(rows, off, r);
      engine.store<double>(vals, off, v);
      engine.scatter(spa_values, at, engine.broadcast(0.0), all);
      engine.scatter(spa_flags, at, engine.broadcast(Index{0}), all);
      off += vl;
    }
    ctx.sink.set_column(ctx.perm[blk.begin + l], std::move(rows), std::move(vals));
  }
}

/// Per-lane hash tables, lane-major like SparsWorkspace. `occupied` lists
/// each lane's used cells in insertion order.
struct HashWorkspace {
  HashWorkspace(std::uint64_t max_size, std::size_t max_width, Index empty)
      : values(max_size * max_width, 0.0),
        indices(max_size * max_width, empty),
        occupied(max_size * max_width, 0) {}

  std::vector<double> values;
  std::vector<Index> indices;
  std::vector<Index> occupied;
};

void hash_block(const BlockContext& ctx, BlockRange blk, std::uint64_t table_size,
                std::uint64_t c, HashWorkspace& ws) {
  auto& engine = ctx.engine;
  const std::size_t width = engine.set_vl(blk.size());
  const auto w = static_cast<Index>(width);
  const Index empty = ctx.a.nrows();
  const std::uint64_t cell_mask = table_size - 1;
  std::span<double> hvalues(ws.values);
  std::span<Index> hindices(ws.indices);
  std::span<Index> occupied(ws.occupied);

  LaneCursor cur = start_block(ctx.bp, blk, engine);
  const VIndex lane = engine.iota();
  const VIndex zeros = engine.broadcast(Index{0});
  const VIndex ones = engine.broadcast(Index{1});
  VIndex fill = zeros;

  while (locate_work(ctx.a, ctx.bp, cur, engine)) {
    engine.count_loop_iteration();
    const LaneProducts p = load_products(ctx.a, ctx.bp, cur, engine);
    VIndex cell = engine.bit_and(engine.mul_wrap(p.row, c, cur.active), cell_mask, cur.active);

    // Linear probing. Every lane waits for the slowest one; each extra
    // probe round is charged as another loop trip.
    VecMask pending = cur.active;
    for (std::uint64_t round = 0;; ++round) {
      if (round > table_size) throw InternalError("hash probe did not terminate");
      if (round > 0) engine.count_loop_iteration();
      const VIndex pos = engine.mul_add(cell, w, lane, pending);
      const VIndex key = engine.gather<Index>(hindices, pos, pending);
      const VecMask hit = engine.compare(key, Cmp::eq, p.row, pending);
      const VecMask vacant = engine.compare(key, Cmp::eq, empty, pending);
      engine.scatter(hindices, pos, p.row, vacant);
      const VIndex slot = engine.mul_add(fill, w, lane, vacant);
      engine.scatter(occupied, slot, cell, vacant);
      fill = engine.add(fill, Index{1}, vacant);
      for (std::size_t l = 0; l < width; ++l)
        if (vacant[l] && static_cast<std::uint64_t>(fill[l]) >= table_size)
          throw InternalError("hash table full (H = " + std::to_string(table_size) + ")");
      pending = engine.mask_andnot(pending, engine.mask_or(hit, vacant));
      if (!engine.any(pending)) break;
      cell = engine.bit_and(engine.add(cell, Index{1}, pending), cell_mask, pending);
    }

    const VIndex pos = engine.mul_add(cell, w, lane, cur.active);
    VReal acc = engine.gather<double>(hvalues, pos, cur.active);
    acc = engine.fma(acc, p.a_val, p.b_val, cur.active);
    engine.scatter(hvalues, pos, acc, cur.active);
    advance(cur, p, zeros, ones, engine);
  }

  for (std::size_t l = 0; l < width; ++l) {
    const auto n = static_cast<std::size_t>(fill[l]);
    std::vector<Index> rows(n);
    std::vector<double> vals(n);
    for (std::size_t off = 0; off < n;) {
      const std::size_t vl = engine.set_vl(n - off);
      const VecMask all = engine.all_true();
      const VIndex cells = engine.load_strided<Index>(occupied, l + off * width, width);
      const VIndex at = engine.mul_add(cells, w, engine.broadcast(static_cast<Index>(l)), all);
      const VIndex r = engine.gather<Index>(hindices, at, all);
      const VReal v = engine.gather<double>(hvalues, at, all);
      engine.store<Index>(rows, off, r);
      engine.store<double>(vals, off, v);
      engine.scatter(hindices, at, engine.broadcast(empty), all);
      engine.scatter(hvalues, at, engine.broadcast(0.0), all);
      off += vl;
    }
    ctx.sink.set_column(ctx.perm[blk.begin + l], std::move(rows), std::move(vals));
  }
}

void check_plan(const CscMatrix& b, const ColumnPlan& plan, BlockedVariant variant,
                std::size_t max_vl) {
  const auto n = static_cast<std::size_t>(b.ncols());
  if (plan.ops.size() != n || plan.perm.size() != n)
    throw InputError("plan was built for " + std::to_string(plan.ops.size()) +
                     " columns, B has " + std::to_string(n));
  if (plan.hybrid_split > n) throw InputError("plan split beyond the last column");
  std::size_t expect = plan.hybrid_split;
  for (const auto& blk : plan.blocks) {
    if (blk.begin != expect || blk.end <= blk.begin || blk.size() > max_vl)
      throw InputError("plan blocks do not tile the blocked range within max VL");
    expect = blk.end;
  }
  if (expect != n) throw InputError("plan blocks do not reach the last column");
  if (variant == BlockedVariant::hash &&
      (!plan.hash_sizes || plan.hash_sizes->size() != plan.blocks.size()))
    throw InputError("plan has no hash size schedule");
}

}  // namespace

KernelResult hybrid_kernel(const CscMatrix& a, const CscMatrix& b, const ColumnPlan& plan,
                           BlockedVariant variant, std::uint64_t c, vm::VecEngine& engine) {
  detail::check_product_shapes(a, b);
  check_plan(b, plan, variant, engine.max_vl());

  const CscMatrix bp = permute_columns(b, plan.perm);
  ColumnSink sink(a.nrows(), b.ncols());
  BlockContext ctx{a, bp, plan.perm, sink, engine};

  if (plan.hybrid_split > 0) {
    detail::SpaWorkspace ws(a.nrows());
    for (std::size_t pos = 0; pos < plan.hybrid_split; ++pos) {
      auto col = detail::spa_column(a, bp, static_cast<Index>(pos), ws, engine);
      sink.set_column(plan.perm[pos], std::move(col.rows), std::move(col.values));
    }
  }

  std::size_t max_width = 0;
  for (const auto& blk : plan.blocks) max_width = std::max(max_width, blk.size());

  // Blocks whose columns all have zero load produce empty columns and issue
  // no instructions.
  auto has_work = [&](const BlockRange& blk) { return plan.sorted_op(blk.begin) > 0; };

  if (variant == BlockedVariant::spars) {
    SparsWorkspace ws(a.nrows(), max_width);
    for (const auto& blk : plan.blocks)
      if (has_work(blk)) spars_block(ctx, blk, ws);
  } else {
    const auto& sizes = *plan.hash_sizes;
    HashWorkspace ws(sizes.empty() ? 1 : sizes.front(), max_width, a.nrows());
    for (std::size_t i = 0; i < plan.blocks.size(); ++i)
      if (has_work(plan.blocks[i])) hash_block(ctx, plan.blocks[i], sizes[i], c, ws);
  }
  return {std::move(sink).finish(), engine.report()};
}

KernelResult hybrid_kernel(const CscMatrix& a, const CscMatrix& b, Threshold t, BlockParams block,
                           BlockedVariant variant, std::uint64_t c, vm::VecEngine& engine) {
  detail::check_product_shapes(a, b);
  PlanOptions options{block, engine.max_vl(), t, variant == BlockedVariant::hash};
  return hybrid_kernel(a, b, make_plan(a, b, options), variant, c, engine);
}

KernelResult spars_kernel(const CscMatrix& a, const CscMatrix& b, BlockParams block,
                          vm::VecEngine& engine) {
  return hybrid_kernel(a, b, kInfiniteThreshold, block, BlockedVariant::spars,
                       kDefaultHashConstant, engine);
}

KernelResult spars_kernel(const CscMatrix& a, const CscMatrix& b, const ColumnPlan& plan,
                          vm::VecEngine& engine) {
  if (plan.hybrid_split != 0) throw InputError("SPARS plan must not reserve SPA columns");
  return hybrid_kernel(a, b, plan, BlockedVariant::spars, kDefaultHashConstant, engine);
}

KernelResult hash_kernel(const CscMatrix& a, const CscMatrix& b, BlockParams block,
                         std::uint64_t c, vm::VecEngine& engine) {
  return hybrid_kernel(a, b, kInfiniteThreshold, block, BlockedVariant::hash, c, engine);
}

KernelResult hash_kernel(const CscMatrix& a, const CscMatrix& b, const ColumnPlan& plan,
                         std::uint64_t c, vm::VecEngine& engine) {
  if (plan.hybrid_split != 0) throw InputError("HASH plan must not reserve SPA columns");
  return hybrid_kernel(a, b, plan, BlockedVariant::hash, c, engine);
}

}  // namespace spgemm
