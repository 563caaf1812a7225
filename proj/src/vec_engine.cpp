#include "spgemm/vec_engine.hpp"

#include <numeric>

namespace spgemm::vm {

VecMask::VecMask(std::initializer_list<bool> init) {
  bits_.reserve(init.size());
  for (bool b : init) bits_.push_back(b ? 1 : 0);
}

std::size_t VecMask::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

VecEngine::VecEngine(MachineConfig config) : config_(config) {
  if (config_.max_vl == 0) throw InputError("max_vl must be positive");
  if (config_.lanes == 0) throw InputError("lanes must be positive");
}

std::size_t VecEngine::set_vl(std::size_t n) {
  vl_ = std::min(n, config_.max_vl);
  return vl_;
}

void VecEngine::charge(std::size_t active) {
  report_.vector_instructions += 1;
  report_.lane_slots_total += vl_;
  report_.lane_slots_active += active;
  issue_cycles_ += (vl_ + config_.lanes - 1) / config_.lanes;
}

void VecEngine::charge_indexed(const VIndex& indices, const VecMask& mask) {
  Index lo = 0;
  Index hi = 0;
  bool seen = false;
  for (std::size_t i = 0; i < vl_; ++i) {
    if (!mask[i]) continue;
    if (!seen) {
      lo = hi = indices[i];
      seen = true;
    } else {
      lo = std::min(lo, indices[i]);
      hi = std::max(hi, indices[i]);
    }
  }
  if (seen)
    report_.max_index_range =
        std::max(report_.max_index_range, static_cast<std::uint64_t>(hi - lo));
  report_.gather_scatter_ops += 1;
  charge(mask.popcount());
}

void VecEngine::require_vl(std::size_t n, const char* what) const {
  if (n != vl_)
    throw ModelFault(std::string(what) + ": operand length " + std::to_string(n) +
                     " does not match VL " + std::to_string(vl_));
}

std::size_t VecEngine::compress_store(const VReal& values, const VIndex& indices,
                                      const VecMask& mask, std::span<double> dest_values,
                                      std::span<Index> dest_indices, std::size_t at) {
  if (vl_ == 0) return 0;
  require_vl(values.size(), "compress_store values");
  require_vl(indices.size(), "compress_store indices");
  require_vl(mask.size(), "compress_store mask");
  const std::size_t n = mask.popcount();
  if (at + n > dest_values.size() || at + n > dest_indices.size())
    throw ModelFault("compress_store destination too small");
  std::size_t out = at;
  for (std::size_t i = 0; i < vl_; ++i) {
    if (!mask[i]) continue;
    dest_values[out] = values[i];
    dest_indices[out] = indices[i];
    ++out;
  }
  charge(n);  // compress
  charge(n);  // store; the stored lanes are the active ones
  return n;
}

std::size_t VecEngine::compress_store(const VIndex& indices, const VecMask& mask,
                                      std::span<Index> dest_indices, std::size_t at) {
  if (vl_ == 0) return 0;
  require_vl(indices.size(), "compress_store indices");
  require_vl(mask.size(), "compress_store mask");
  const std::size_t n = mask.popcount();
  if (at + n > dest_indices.size()) throw ModelFault("compress_store destination too small");
  std::size_t out = at;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) dest_indices[out++] = indices[i];
  charge(n);
  charge(n);
  return n;
}

VReal VecEngine::fma(const VReal& acc, const VReal& a, const VReal& b, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(acc.size(), "fma");
  require_vl(a.size(), "fma");
  require_vl(b.size(), "fma");
  require_vl(mask.size(), "fma mask");
  VReal out = acc;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = acc[i] + a[i] * b[i];
  report_.elements_processed += vl_;
  charge(mask.popcount());
  return out;
}

VReal VecEngine::fma(const VReal& acc, const VReal& a, double s, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(acc.size(), "fma");
  require_vl(a.size(), "fma");
  require_vl(mask.size(), "fma mask");
  VReal out = acc;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = acc[i] + a[i] * s;
  report_.elements_processed += vl_;
  charge(mask.popcount());
  return out;
}

VReal VecEngine::mul(const VReal& a, double s, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "mul");
  require_vl(mask.size(), "mul mask");
  VReal out(vl_, 0.0);
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = a[i] * s;
  report_.elements_processed += vl_;
  charge(mask.popcount());
  return out;
}

VIndex VecEngine::iota() {
  if (vl_ == 0) return {};
  std::vector<Index> v(vl_);
  std::iota(v.begin(), v.end(), Index{0});
  charge(vl_);
  return VIndex(std::move(v));
}

VIndex VecEngine::mul_add(const VIndex& a, Index s, const VIndex& b, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "mul_add");
  require_vl(b.size(), "mul_add");
  require_vl(mask.size(), "mul_add mask");
  VIndex out = a;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = a[i] * s + b[i];
  charge(mask.popcount());
  return out;
}

VIndex VecEngine::mul_wrap(const VIndex& a, std::uint64_t s, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "mul_wrap");
  require_vl(mask.size(), "mul_wrap mask");
  VIndex out = a;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = static_cast<Index>(static_cast<std::uint64_t>(a[i]) * s);
  charge(mask.popcount());
  return out;
}

VIndex VecEngine::bit_and(const VIndex& a, std::uint64_t s, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "bit_and");
  require_vl(mask.size(), "bit_and mask");
  VIndex out = a;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = static_cast<Index>(static_cast<std::uint64_t>(a[i]) & s);
  charge(mask.popcount());
  return out;
}

VIndex VecEngine::shift_right(const VIndex& a, unsigned s, const VecMask& mask) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "shift_right");
  require_vl(mask.size(), "shift_right mask");
  VIndex out = a;
  for (std::size_t i = 0; i < vl_; ++i)
    if (mask[i]) out[i] = static_cast<Index>(static_cast<std::uint64_t>(a[i]) >> s);
  charge(mask.popcount());
  return out;
}

VecMask VecEngine::mask_and(const VecMask& a, const VecMask& b) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "mask_and");
  require_vl(b.size(), "mask_and");
  VecMask out(vl_);
  for (std::size_t i = 0; i < vl_; ++i) out.set(i, a[i] && b[i]);
  charge(vl_);
  return out;
}

VecMask VecEngine::mask_andnot(const VecMask& a, const VecMask& b) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "mask_andnot");
  require_vl(b.size(), "mask_andnot");
  VecMask out(vl_);
  for (std::size_t i = 0; i < vl_; ++i) out.set(i, a[i] && !b[i]);
  charge(vl_);
  return out;
}

VecMask VecEngine::mask_or(const VecMask& a, const VecMask& b) {
  if (vl_ == 0) return {};
  require_vl(a.size(), "mask_or");
  require_vl(b.size(), "mask_or");
  VecMask out(vl_);
  for (std::size_t i = 0; i < vl_; ++i) out.set(i, a[i] || b[i]);
  charge(vl_);
  return out;
}

bool VecEngine::any(const VecMask& m) {
  if (vl_ == 0) return false;
  require_vl(m.size(), "any");
  charge(vl_);
  return m.popcount() > 0;
}

}  // namespace spgemm::vm
