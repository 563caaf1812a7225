#pragma once

#include <json.hpp>

#include "spgemm/csc_matrix.hpp"
#include "spgemm/preprocess.hpp"
#include "spgemm/vec_engine.hpp"

namespace spgemm {

/// {nrows, ncols, column_pointers, row_indices, values}
nlohmann::json csc_to_json(const CscMatrix& m);
CscMatrix csc_from_json(const nlohmann::json& j);

/// CostReport field names verbatim.
nlohmann::json cost_to_json(const vm::CostReport& r);
vm::CostReport cost_from_json(const nlohmann::json& j);

/// Blocks are written as [begin, end) pairs; hash_sizes is null when absent.
nlohmann::json plan_to_json(const ColumnPlan& plan);

}  // namespace spgemm
