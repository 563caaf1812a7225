#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spgemm/csc_matrix.hpp"
#include "spgemm/esc.hpp"
#include "spgemm/kernels.hpp"
#include "spgemm/preprocess.hpp"
#include "spgemm/vec_engine.hpp"

namespace spgemm::bench {

enum class Algo { spa, spars, hash, hspa, hhash, esc };

Algo parse_algo(const std::string& name);
std::string algo_name(Algo a);

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr Threshold kDefaultHybridThreshold = 40;
inline constexpr Index kDenseOracleMaxColumns = 5000;
inline constexpr double kVerifyTolerance = 1e-12;

/// Seed used when a synthetic spec omits one: SPGEMM_SEED if set, else 1.
std::uint64_t default_seed();

struct MatrixSource {
  std::string path;    // Matrix Market file; empty for synthetic input
  std::string path_b;  // optional distinct B; A = B when empty
  bool synthetic = false;
  Index n = 0;
  Index z = 0;
  std::uint64_t seed = kDefaultSeed;

  std::string describe() const;
};

/// Parses "N,Z[,SEED]".
MatrixSource parse_synthetic(const std::string& spec);

struct RunConfig {
  Algo algo = Algo::spa;
  MatrixSource source;
  // Unset values take the per-algorithm roster defaults (see resolved()).
  std::optional<Threshold> t;
  std::optional<std::size_t> b_min;
  std::optional<std::size_t> b_max;
  std::size_t max_vl = 256;
  std::uint64_t hash_c = kDefaultHashConstant;
  std::uint64_t esc_threshold = kDefaultEscThreshold;
  RadixPolicy radix = RadixPolicy::automatic;
  bool verify = false;
  bool dump_plan = false;

  /// Copy with every optional filled: SPARS/H-SPA default to 40/40, HASH and
  /// H-HASH to 256/256, hybrids to t = 40 and non-hybrids to t = inf.
  RunConfig resolved() const;
};

/// Roster label such as "SPA", "Spars-40/40" or "H-Hash-256/256".
std::string roster_label(const RunConfig& config);

/// Parses a roster label (case-insensitive), e.g. "h-hash-256/256", "spa",
/// "esc", "spars-16/64".
RunConfig parse_roster_label(const std::string& label);

struct ColumnStats {
  double min = 0;
  double max = 0;
  double avg = 0;
  double var = 0;  // population variance
};

ColumnStats column_stats(const std::vector<std::uint64_t>& counts);

struct MatrixStats {
  Index nrows = 0;
  Index ncols = 0;
  Index nnz = 0;
  ColumnStats nnz_per_column;
  ColumnStats mults_per_column;
};

MatrixStats matrix_stats(const CscMatrix& a, const CscMatrix& b);

enum class Verdict { not_run, pass, fail };
std::string verdict_name(Verdict v);

struct RunReport {
  RunConfig config;  // resolved
  std::string label;
  MatrixStats stats;
  vm::CostReport cost;
  std::uint64_t issue_cycles = 0;
  Index product_nnz = 0;
  Verdict verdict = Verdict::not_run;
  /// Count-based share of preprocessing work: (nnz(B) + ncols) scalar steps
  /// for the load count and sort, over those plus the kernel's loop trips.
  double preprocessing_share = 0;
  std::optional<nlohmann::json> plan;
};

struct Operands {
  CscMatrix a;
  CscMatrix b;
};

Operands load_operands(const MatrixSource& source);

/// Runs one kernel on a fresh engine.
RunReport run_kernel(const RunConfig& config, const CscMatrix& a, const CscMatrix& b);

RunReport cmd_run(const RunConfig& config);

/// "schema": 1. The timestamp is added only when requested.
nlohmann::json report_to_json(const RunReport& r, bool with_timestamp);

std::string csv_header();
std::string csv_row(const RunReport& r, const std::string& sweep_value = "");

enum class SweepAxis { Z, bmax, t, bmin };
SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

struct SweepRow {
  std::string value;
  RunReport report;
};

/// One run per value, in the given order. Z requires a synthetic source;
/// t accepts "inf".
std::vector<SweepRow> cmd_sweep(const RunConfig& base, SweepAxis axis,
                                const std::vector<std::string>& values);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows, SweepAxis axis);

enum class Metric { loop_iterations, lane_slots_total, vector_instructions };
Metric parse_metric(const std::string& name);
std::string metric_name(Metric m);
std::uint64_t metric_value(const vm::CostReport& cost, Metric m);

/// Table 1 roster: SPA, Spars-16/64, Spars-40/40, H-Spa-16/64, H-Spa-40/40,
/// Hash-32/256, Hash-256/256, H-Hash-32/256, H-Hash-256/256, ESC.
std::vector<RunConfig> table_roster();

/// Each non-blank line not starting with '#' is a Matrix Market path,
/// relative to the list file, or "synthetic N,Z[,SEED]".
std::vector<MatrixSource> read_matrix_list(const std::string& path);

struct CompareRow {
  std::string matrix;
  std::string error;  // non-empty when the matrix failed
  std::vector<std::uint64_t> metric;
  std::vector<std::optional<double>> ratio;  // metric / SPA metric; lower is better
  std::string best;
};

struct CompareTable {
  Metric metric = Metric::loop_iterations;
  std::vector<std::string> labels;  // column order; SPA first
  std::vector<CompareRow> rows;
  std::vector<std::optional<double>> geomean;
};

/// Runs every algorithm on every matrix. SPA is added as the baseline if
/// absent. A failing matrix is reported in its row and the run continues.
CompareTable cmd_compare(const std::vector<MatrixSource>& matrices,
                         const std::vector<RunConfig>& algos, Metric metric);

std::string compare_to_csv(const CompareTable& table);
nlohmann::json compare_to_json(const CompareTable& table);

}  // namespace spgemm::bench
