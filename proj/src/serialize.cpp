#include "spgemm/serialize.hpp"

#include "spgemm/errors.hpp"

namespace spgemm {

using nlohmann::json;

json csc_to_json(const CscMatrix& m) {
  return json{{"nrows", m.nrows()},
              {"ncols", m.ncols()},
              {"column_pointers", std::vector<Index>(m.column_pointers().begin(),
                                                     m.column_pointers().end())},
              {"row_indices",
               std::vector<Index>(m.row_indices().begin(), m.row_indices().end())},
              {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

CscMatrix csc_from_json(const json& j) {
  try {
    return CscMatrix(j.at("nrows").get<Index>(), j.at("ncols").get<Index>(),
                     j.at("column_pointers").get<std::vector<Index>>(),
                     j.at("row_indices").get<std::vector<Index>>(),
                     j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad matrix JSON: ") + e.what());
  }
}

json cost_to_json(const vm::CostReport& r) {
  return json{{"loop_iterations", r.loop_iterations},
              {"vector_instructions", r.vector_instructions},
              {"lane_slots_total", r.lane_slots_total},
              {"lane_slots_active", r.lane_slots_active},
              {"elements_processed", r.elements_processed},
              {"gather_scatter_ops", r.gather_scatter_ops},
              {"max_index_range", r.max_index_range}};
}

vm::CostReport cost_from_json(const json& j) {
  vm::CostReport r;
  try {
    r.loop_iterations = j.at("loop_iterations").get<std::uint64_t>();
    r.vector_instructions = j.at("vector_instructions").get<std::uint64_t>();
    r.lane_slots_total = j.at("lane_slots_total").get<std::uint64_t>();
    r.lane_slots_active = j.at("lane_slots_active").get<std::uint64_t>();
    r.elements_processed = j.at("elements_processed").get<std::uint64_t>();
    r.gather_scatter_ops = j.at("gather_scatter_ops").get<std::uint64_t>();
    r.max_index_range = j.at("max_index_range").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad cost report JSON: ") + e.what());
  }
  return r;
}

json plan_to_json(const ColumnPlan& plan) {
  json blocks = json::array();
  for (const auto& b : plan.blocks) blocks.push_back(json::array({b.begin, b.end}));
  json out{{"ops", plan.ops},
           {"perm", plan.perm},
           {"blocks", std::move(blocks)},
           {"hybrid_split", plan.hybrid_split}};
  out["hash_sizes"] = plan.hash_sizes ? json(*plan.hash_sizes) : json(nullptr);
  return out;
}

}  // namespace spgemm
