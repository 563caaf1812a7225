#pragma once

#include <cstdint>

#include "spgemm/csc_matrix.hpp"

namespace spgemm {

/// n x n matrix with exactly z non-zeros per column at distinct, uniformly
/// drawn rows. Column j is generated from its own stream seeded by
/// (seed, j). Values are uniform in [1, 2).
CscMatrix generate_synthetic(Index n, Index z, std::uint64_t seed);

}  // namespace spgemm
