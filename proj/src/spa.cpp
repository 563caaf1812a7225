#include "kernel_detail.hpp"
#include "spgemm/kernels.hpp"

namespace spgemm {

namespace detail {

SparseColumn spa_column(const CscMatrix& a, const CscMatrix& b, Index j, SpaWorkspace& ws,
                        vm::VecEngine& engine) {
  using vm::Cmp;
  std::span<double> spa_values(ws.values);
  std::span<Index> spa_flags(ws.flags);
  std::span<Index> spa_indices(ws.indices);

  std::size_t counter = 0;
  auto b_rows = b.col_rows(j);
  auto b_vals = b.col_values(j);
  for (std::size_t q = 0; q < b_rows.size(); ++q) {
    engine.count_loop_iteration();
    const Index k = b_rows[q];
    const auto begin = static_cast<std::size_t>(a.col_begin(k));
    const auto len = static_cast<std::size_t>(a.col_nnz(k));
    // Columns longer than max VL are walked in chunks.
    for (std::size_t off = 0; off < len;) {
      const std::size_t vl = engine.set_vl(len - off);
      const vm::VecMask all = engine.all_true();
      const vm::VReal va = engine.load(a.values(), begin + off);
      const vm::VIndex rows = engine.load(a.row_indices(), begin + off);
      vm::VReal acc = engine.gather<double>(spa_values, rows, all);
      const vm::VIndex flags = engine.gather<Index>(spa_flags, rows, all);
      acc = engine.fma(acc, va, b_vals[q], all);
      engine.scatter(spa_values, rows, acc, all);
      const vm::VecMask fresh = engine.compare(flags, Cmp::eq, Index{0}, all);
      counter += engine.compress_store(rows, fresh, spa_indices, counter);
      engine.scatter(spa_flags, rows, engine.broadcast(Index{1}), all);
      off += vl;
    }
  }

  SparseColumn out;
  out.rows.resize(counter);
  out.values.resize(counter);
  for (std::size_t off = 0; off < counter;) {
    const std::size_t vl = engine.set_vl(counter - off);
    const vm::VecMask all = engine.all_true();
    const vm::VIndex rows = engine.load<Index>(spa_indices, off);
    const vm::VReal vals = engine.gather<double>(spa_values, rows, all);
    engine.store<Index>(out.rows, off, rows);
    engine.store<double>(out.values, off, vals);
    engine.scatter(spa_values, rows, engine.broadcast(0.0), all);
    engine.scatter(spa_flags, rows, engine.broadcast(Index{0}), all);
    off += vl;
  }
  return out;
}

}  // namespace detail

KernelResult spa_kernel(const CscMatrix& a, const CscMatrix& b, vm::VecEngine& engine) {
  detail::check_product_shapes(a, b);
  detail::SpaWorkspace ws(a.nrows());
  ColumnSink sink(a.nrows(), b.ncols());
  for (Index j = 0; j < b.ncols(); ++j) {
    auto col = detail::spa_column(a, b, j, ws, engine);
    sink.set_column(j, std::move(col.rows), std::move(col.values));
  }
  return {std::move(sink).finish(), engine.report()};
}

}  // namespace spgemm
