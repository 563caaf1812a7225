#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spgemm/csc_matrix.hpp"
#include "spgemm/errors.hpp"

namespace spgemm::vm {

/// Counters accumulated by a VecEngine. These stand in for hardware timings.
struct CostReport {
  std::uint64_t loop_iterations = 0;     // main-loop trips
  std::uint64_t vector_instructions = 0;
  std::uint64_t lane_slots_total = 0;    // sum of VL over instructions
  std::uint64_t lane_slots_active = 0;   // sum of unmasked lanes
  std::uint64_t elements_processed = 0;  // lane slots of multiply work
  std::uint64_t gather_scatter_ops = 0;
  std::uint64_t max_index_range = 0;     // widest (max - min) index span of one indexed op

  double utilization() const {
    return lane_slots_total == 0 ? 0.0
                                 : static_cast<double>(lane_slots_active) /
                                       static_cast<double>(lane_slots_total);
  }

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

struct MachineConfig {
  std::size_t max_vl = 256;
  std::size_t lanes = 8;
};

template <typename T>
class VecReg {
 public:
  VecReg() = default;
  explicit VecReg(std::size_t n, T fill = T{}) : data_(n, fill) {}
  explicit VecReg(std::vector<T> data) : data_(std::move(data)) {}
  VecReg(std::initializer_list<T> init) : data_(init) {}

  std::size_t size() const { return data_.size(); }
  T& operator[](std::size_t i) { return data_[i]; }
  T operator[](std::size_t i) const { return data_[i]; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const VecReg&, const VecReg&) = default;

 private:
  std::vector<T> data_;
};

using VReal = VecReg<double>;
using VIndex = VecReg<Index>;

class VecMask {
 public:
  VecMask() = default;
  explicit VecMask(std::size_t n, bool fill = false) : bits_(n, fill ? 1 : 0) {}
  VecMask(std::initializer_list<bool> init);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  std::size_t popcount() const;

  friend bool operator==(const VecMask&, const VecMask&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class Cmp { eq, ne, lt, le, gt, ge };

/// Abstract long-vector machine. Every instruction operates on the current
/// vector length (VL) and is charged to the cost counters; instructions at
/// VL = 0 are no-ops. Illegal requests raise ModelFault.
///
/// Masked lanes never touch memory. Register-producing instructions leave
/// masked lanes at their first operand's value, except gather (masked lanes
/// read 0) and compare (masked lanes are false).
class VecEngine {
 public:
  explicit VecEngine(MachineConfig config = {});

  std::size_t max_vl() const { return config_.max_vl; }
  std::size_t lanes() const { return config_.lanes; }
  std::size_t vl() const { return vl_; }

  /// Sets VL to min(n, max_vl) and returns it.
  std::size_t set_vl(std::size_t n);

  const CostReport& report() const { return report_; }
  /// Sum over instructions of ceil(VL / lanes): a rough issue-time proxy.
  std::uint64_t issue_cycles() const { return issue_cycles_; }

  void count_loop_iteration(std::uint64_t n = 1) { report_.loop_iterations += n; }

  /// Register constants. Not charged: they model values already resident.
  VecMask all_true() const { return VecMask(vl_, true); }

  // ---- memory ----------------------------------------------------------

  template <typename T>
  VecReg<T> load(std::span<const T> base, std::size_t offset);

  template <typename T>
  void store(std::span<T> base, std::size_t offset, const VecReg<T>& v);

  /// base[offset + i * stride]; charged as an indexed access.
  template <typename T>
  VecReg<T> load_strided(std::span<const T> base, std::size_t offset, std::size_t stride);

  template <typename T>
  VecReg<T> gather(std::span<const T> base, const VIndex& indices, const VecMask& mask);

  template <typename T>
  void scatter(std::span<T> base, const VIndex& indices, const VecReg<T>& values,
               const VecMask& mask);

  /// Writes the unmasked (value, index) pairs contiguously from `at`.
  /// Charged as a compress followed by a unit-stride store.
  std::size_t compress_store(const VReal& values, const VIndex& indices, const VecMask& mask,
                             std::span<double> dest_values, std::span<Index> dest_indices,
                             std::size_t at);
  std::size_t compress_store(const VIndex& indices, const VecMask& mask,
                             std::span<Index> dest_indices, std::size_t at);

  // ---- arithmetic ------------------------------------------------------

  VReal fma(const VReal& acc, const VReal& a, const VReal& b, const VecMask& mask);
  VReal fma(const VReal& acc, const VReal& a, double s, const VecMask& mask);
  /// a * s; masked lanes are 0.
  VReal mul(const VReal& a, double s, const VecMask& mask);

  template <typename T>
  VecReg<T> broadcast(T value);

  /// 0, 1, ..., VL-1
  VIndex iota();

  template <typename T>
  VecReg<T> add(const VecReg<T>& a, const VecReg<T>& b, const VecMask& mask);
  template <typename T>
  VecReg<T> add(const VecReg<T>& a, T s, const VecMask& mask);

  /// a * s + b
  VIndex mul_add(const VIndex& a, Index s, const VIndex& b, const VecMask& mask);

  /// Wrapping unsigned 64-bit multiply by s.
  VIndex mul_wrap(const VIndex& a, std::uint64_t s, const VecMask& mask);
  VIndex bit_and(const VIndex& a, std::uint64_t s, const VecMask& mask);
  VIndex shift_right(const VIndex& a, unsigned s, const VecMask& mask);

  /// Per-lane select: cond ? on_true : on_false.
  template <typename T>
  VecReg<T> merge(const VecMask& cond, const VecReg<T>& on_true, const VecReg<T>& on_false);

  // ---- masks -----------------------------------------------------------

  template <typename T>
  VecMask compare(const VecReg<T>& a, Cmp pred, T s, const VecMask& mask);
  template <typename T>
  VecMask compare(const VecReg<T>& a, Cmp pred, const VecReg<T>& b, const VecMask& mask);

  VecMask mask_and(const VecMask& a, const VecMask& b);
  VecMask mask_andnot(const VecMask& a, const VecMask& b);  // a & ~b
  VecMask mask_or(const VecMask& a, const VecMask& b);

  /// Population-count reduction; true iff any lane is set.
  bool any(const VecMask& m);

 private:
  void charge(std::size_t active);
  void charge_indexed(const VIndex& indices, const VecMask& mask);
  void require_vl(std::size_t n, const char* what) const;
  template <typename T>
  static bool test(T a, Cmp pred, T b);

  MachineConfig config_;
  std::size_t vl_ = 0;
  CostReport report_;
  std::uint64_t issue_cycles_ = 0;
};

// ---------------------------------------------------------------------------

template <typename T>
VecReg<T> VecEngine::load(std::span<const T> base, std::size_t offset) {
  if (vl_ == 0) return {};
  if (offset + vl_ > base.size()) throw ModelFault("unit-stride load past end of array");
  charge(vl_);
  return VecReg<T>(std::vector<T>(base.begin() + static_cast<std::ptrdiff_t>(offset),
                                  base.begin() + static_cast<std::ptrdiff_t>(offset + vl_)));
}

template <typename T>
void VecEngine::store(std::span<T> base, std::size_t offset, const VecReg<T>& v) {
  if (vl_ == 0) return;
  require_vl(v.size(), "store");
  if (offset + vl_ > base.size()) throw ModelFault("unit-stride store past end of array");
  charge(vl_);
  std::copy(v.data().begin(), v.data().end(), base.begin() + static_cast<std::ptrdiff_t>(offset));
}

template <typename T>
VecReg<T> VecEngine::load_strided(std::span<const T> base, std::size_t offset, std::size_t stride) {
  if (vl_ == 0) return {};
  if (offset + (vl_ - 1) * stride >= base.size())
    throw ModelFault("strided load past end of array");
  VecReg<T> out(vl_);
  for (std::size_t i = 0; i < vl_; ++i) out[i] = base[offset + i * stride];
  report_.gather_scatter_ops += 1;
  report_.max_index_range =
      std::max<std::uint64_t>(report_.max_index_range, (vl_ - 1) * stride);
  charge(vl_);
  return out;
}

template <typename T>
VecReg<T> VecEngine::gather(std::span<const T> base, const VIndex& indices, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(indices.size(), "gather indices");
  require_vl(mask.size(), "gather mask");
  VecReg<T> out(vl_);
  for (std::size_t i = 0; i < vl_; ++i) {
    if (!mask[i]) continue;
    const Index at = indices[i];
    if (at < 0 || static_cast<std::size_t>(at) >= base.size())
      throw ModelFault("gather index " + std::to_string(at) + " out of bounds");
    out[i] = base[static_cast<std::size_t>(at)];
  }
  charge_indexed(indices, mask);
  return out;
}

template <typename T>
void VecEngine::scatter(std::span<T> base, const VIndex& indices, const VecReg<T>& values,
                        const VecMask& mask) {
  if (vl_ == 0) return;
  require_vl(indices.size(), "scatter indices");
  require_vl(values.size(), "scatter values");
  require_vl(mask.size(), "scatter mask");
  std::vector<Index> live;
  live.reserve(vl_);
  for (std::size_t i = 0; i < vl_; ++i) {
    if (!mask[i]) continue;
    const Index at = indices[i];
    if (at < 0 || static_cast<std::size_t>(at) >= base.size())
      throw ModelFault("scatter index " + std::to_string(at) + " out of bounds");
    live.push_back(at);
  }
  std::sort(live.begin(), live.end());
  if (std::adjacent_find(live.begin(), live.end()) != live.end())
    throw ModelFault("scatter with duplicate unmasked indices");
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) base[static_cast<std::size_t>(indices[i])] = values[i];
  charge_indexed(indices, mask);
}

template <typename T>
VecReg<T> VecEngine::broadcast(T value) {
  if (vl_ == 0) return {};
  charge(vl_);
  return VecReg<T>(vl_, value);
}

template <typename T>
VecReg<T> VecEngine::add(const VecReg<T>& a, const VecReg<T>& b, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "add");
  require_vl(b.size(), "add");
  require_vl(mask.size(), "add mask");
  VecReg<T> out = a;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = a[i] + b[i];
  charge(mask.popcount());
  return out;
}

template <typename T>
VecReg<T> VecEngine::add(const VecReg<T>& a, T s, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "add");
  require_vl(mask.size(), "add mask");
  VecReg<T> out = a;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = a[i] + s;
  charge(mask.popcount());
  return out;
}

template <typename T>
VecReg<T> VecEngine::merge(const VecMask& cond, const VecReg<T>& on_true,
                           const VecReg<T>& on_false) {
  if (vl_ == 0) return {};
  require_vl(cond.size(), "merge mask");
  require_vl(on_true.size(), "merge");
  require_vl(on_false.size(), "merge");
  VecReg<T> out = on_false;
  for (std::size_t i = 0; i < vl_; ++i)
    if (cond[i]) out[i] = on_true[i];
  charge(vl_);
  return out;
}

template <typename T>
bool VecEngine::test(T a, Cmp pred, T b) {
  switch (pred) {
    case Cmp::eq: return a == b;
    case Cmp::ne: return a != b;
    case Cmp::lt: return a < b;
    case Cmp::le: return a <= b;
    case Cmp::gt: return a > b;
    case Cmp::ge: return a >= b;
  }
  return false;
}

template <typename T>
VecMask VecEngine::compare(const VecReg<T>& a, Cmp pred, T s, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "compare");
  require_vl(mask.size(), "compare mask");
  VecMask out(vl_);
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out.set(i, test(a[i], pred, s));
  charge(mask.popcount());
  return out;
}

template <typename T>
VecMask VecEngine::compare(const VecReg<T>& a, Cmp pred, const VecReg<T>& b, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "compare");
  require_vl(b.size(), "compare");
  require_vl(mask.size(), "compare mask");
  VecMask out(vl_);
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out.set(i, test(a[i], pred, b[i]));
  charge(mask.popcount());
  return out;
}

}  // namespace spgemm::vm
