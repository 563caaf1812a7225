#include "spgemm/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spgemm/errors.hpp"
#include "spgemm/kernels.hpp"
#include "spgemm/matrix_market.hpp"
#include "spgemm/reference.hpp"
#include "spgemm/serialize.hpp"
#include "spgemm/synthetic.hpp"

namespace spgemm::bench {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InputError(std::string("expected a non-negative integer for ") + what + ", got '" + s +
                     "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InputError(std::string(what) + " out of range: '" + s + "'");
  }
}

Threshold parse_threshold(const std::string& s) {
  const std::string v = lower(trim(s));
  if (v == "inf" || v == "infinity") return kInfiniteThreshold;
  return parse_u64(v, "threshold");
}

json threshold_json(Threshold t) {
  return t == kInfiniteThreshold ? json("inf") : json(t);
}

std::string threshold_text(Threshold t) {
  return t == kInfiniteThreshold ? "inf" : std::to_string(t);
}

bool is_hybrid(Algo a) { return a == Algo::hspa || a == Algo::hhash; }
bool is_blocked(Algo a) { return a == Algo::spars || a == Algo::hash || is_hybrid(a); }
bool uses_hash(Algo a) { return a == Algo::hash || a == Algo::hhash; }

std::string radix_name(RadixPolicy p) {
  switch (p) {
    case RadixPolicy::fixed5: return "5";
    case RadixPolicy::fixed6: return "6";
    case RadixPolicy::automatic: break;
  }
  return "auto";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(10) << v;
  return out.str();
}

json stats_json(const ColumnStats& s) {
  return json{{"min", s.min}, {"max", s.max}, {"avg", s.avg}, {"var", s.var}};
}

}  // namespace

Algo parse_algo(const std::string& name) {
  const std::string n = lower(trim(name));
  if (n == "spa") return Algo::spa;
  if (n == "spars") return Algo::spars;
  if (n == "hash") return Algo::hash;
  if (n == "hspa" || n == "h-spa") return Algo::hspa;
  if (n == "hhash" || n == "h-hash") return Algo::hhash;
  if (n == "esc") return Algo::esc;
  throw InputError("unknown algorithm '" + name + "' (spa|spars|hash|hspa|hhash|esc)");
}

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::spa: return "spa";
    case Algo::spars: return "spars";
    case Algo::hash: return "hash";
    case Algo::hspa: return "hspa";
    case Algo::hhash: return "hhash";
    case Algo::esc: return "esc";
  }
  return "?";
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SPGEMM_SEED"); env != nullptr && *env != '\0')
    return parse_u64(trim(env), "SPGEMM_SEED");
  return kDefaultSeed;
}

std::string MatrixSource::describe() const {
  if (synthetic)
    return "synthetic:" + std::to_string(n) + "," + std::to_string(z) + "," +
           std::to_string(seed);
  return path_b.empty() ? path : path + " x " + path_b;
}

MatrixSource parse_synthetic(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 2 && parts.size() != 3)
    throw InputError("synthetic spec must be N,Z[,SEED], got '" + spec + "'");
  MatrixSource s;
  s.synthetic = true;
  s.n = static_cast<Index>(parse_u64(parts[0], "synthetic N"));
  s.z = static_cast<Index>(parse_u64(parts[1], "synthetic Z"));
  s.seed = parts.size() == 3 ? parse_u64(parts[2], "synthetic seed") : default_seed();
  if (s.n < 1 || s.z < 1 || s.z > s.n) throw InputError("synthetic spec needs 1 <= Z <= N");
  return s;
}

RunConfig RunConfig::resolved() const {
  RunConfig r = *this;
  const std::size_t block_default = uses_hash(algo) ? 256 : 40;
  if (!is_blocked(algo)) {
    r.b_min.reset();
    r.b_max.reset();
  } else if (!r.b_min && !r.b_max) {
    r.b_min = block_default;
    r.b_max = block_default;
  } else if (!r.b_min) {
    r.b_min = std::min(*r.b_max, block_default);
  } else if (!r.b_max) {
    r.b_max = std::max(*r.b_min, block_default);
  }
  if (!is_hybrid(algo))
    r.t = kInfiniteThreshold;
  else if (!r.t)
    r.t = kDefaultHybridThreshold;
  return r;
}

std::string roster_label(const RunConfig& config) {
  const RunConfig r = config.resolved();
  std::string base;
  switch (r.algo) {
    case Algo::spa: return "SPA";
    case Algo::esc: return "ESC";
    case Algo::spars: base = "Spars"; break;
    case Algo::hash: base = "Hash"; break;
    case Algo::hspa: base = "H-Spa"; break;
    case Algo::hhash: base = "H-Hash"; break;
  }
  std::string label = base + "-" + std::to_string(*r.b_min) + "/" + std::to_string(*r.b_max);
  if (is_hybrid(r.algo) && *r.t != kDefaultHybridThreshold)
    label += "(t=" + threshold_text(*r.t) + ")";
  return label;
}

RunConfig parse_roster_label(const std::string& label) {
  const std::string s = lower(trim(label));
  RunConfig c;
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    c.algo = parse_algo(s);
    return c;
  }
  const auto dash = s.rfind('-', slash);
  if (dash == std::string::npos) throw InputError("bad roster label '" + label + "'");
  c.algo = parse_algo(s.substr(0, dash));
  c.b_min = parse_u64(s.substr(dash + 1, slash - dash - 1), "b_min");
  c.b_max = parse_u64(s.substr(slash + 1), "b_max");
  if (!is_blocked(c.algo)) throw InputError("block sizes given for '" + label + "'");
  return c;
}

ColumnStats column_stats(const std::vector<std::uint64_t>& counts) {
  ColumnStats s;
  if (counts.empty()) return s;
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  s.min = static_cast<double>(*lo);
  s.max = static_cast<double>(*hi);
  double sum = 0;
  for (auto c : counts) sum += static_cast<double>(c);
  s.avg = sum / static_cast<double>(counts.size());
  double sq = 0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - s.avg;
    sq += d * d;
  }
  s.var = sq / static_cast<double>(counts.size());
  return s;
}

MatrixStats matrix_stats(const CscMatrix& a, const CscMatrix& b) {
  MatrixStats s;
  s.nrows = a.nrows();
  s.ncols = a.ncols();
  s.nnz = a.nnz();
  std::vector<std::uint64_t> per_col(static_cast<std::size_t>(a.ncols()));
  for (Index j = 0; j < a.ncols(); ++j)
    per_col[static_cast<std::size_t>(j)] = static_cast<std::uint64_t>(a.col_nnz(j));
  s.nnz_per_column = column_stats(per_col);
  s.mults_per_column = column_stats(compute_ops(a, b));
  return s;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_run: break;
  }
  return "not_run";
}

Operands load_operands(const MatrixSource& source) {
  if (source.synthetic) {
    CscMatrix m = generate_synthetic(source.n, source.z, source.seed);
    return {m, m};
  }
  if (source.path.empty()) throw InputError("no matrix given (--matrix or --synthetic)");
  CscMatrix a = read_matrix_market_file(source.path);
  CscMatrix b = source.path_b.empty() ? a : read_matrix_market_file(source.path_b);
  return {std::move(a), std::move(b)};
}

RunReport run_kernel(const RunConfig& config, const CscMatrix& a, const CscMatrix& b) {
  RunReport rep;
  rep.config = config.resolved();
  const RunConfig& c = rep.config;
  rep.label = roster_label(c);
  if (a.ncols() != b.nrows())
    throw InputError("A is " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()) +
                     " but B has " + std::to_string(b.nrows()) + " rows");
  rep.stats = matrix_stats(a, b);

  vm::VecEngine engine(vm::MachineConfig{c.max_vl, vm::MachineConfig{}.lanes});
  KernelResult result = [&]() -> KernelResult {
    switch (c.algo) {
      case Algo::spa: return spa_kernel(a, b, engine);
      case Algo::esc: return esc_kernel(a, b, c.esc_threshold, c.radix, engine);
      default: break;
    }
    const BlockedVariant variant = uses_hash(c.algo) ? BlockedVariant::hash : BlockedVariant::spars;
    const PlanOptions options{BlockParams{*c.b_min, *c.b_max}, c.max_vl, *c.t, uses_hash(c.algo)};
    const ColumnPlan plan = make_plan(a, b, options);
    if (c.dump_plan) rep.plan = plan_to_json(plan);
    return hybrid_kernel(a, b, plan, variant, c.hash_c, engine);
  }();

  rep.cost = result.cost;
  rep.issue_cycles = engine.issue_cycles();
  rep.product_nnz = result.product.nnz();

  if (is_blocked(c.algo)) {
    const double pre = static_cast<double>(b.nnz() + b.ncols());
    const double total = pre + static_cast<double>(rep.cost.loop_iterations);
    rep.preprocessing_share = total > 0 ? pre / total : 0.0;
  }

  if (c.verify) {
    const bool ok = b.ncols() <= kDenseOracleMaxColumns
                        ? matrices_match(result.product, dense_oracle(a, b), kVerifyTolerance)
                        : matrices_match(result.product, gustavson_reference(a, b),
                                         kVerifyTolerance);
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
  }
  return rep;
}

RunReport cmd_run(const RunConfig& config) {
  const Operands ops = load_operands(config.source);
  return run_kernel(config, ops.a, ops.b);
}

json report_to_json(const RunReport& r, bool with_timestamp) {
  const RunConfig& c = r.config;
  json config{{"algo", algo_name(c.algo)},
              {"label", r.label},
              {"matrix", c.source.describe()},
              {"t", threshold_json(c.t.value_or(kInfiniteThreshold))},
              {"b_min", c.b_min ? json(*c.b_min) : json(nullptr)},
              {"b_max", c.b_max ? json(*c.b_max) : json(nullptr)},
              {"max_vl", c.max_vl},
              {"hash_c", c.hash_c},
              {"esc_threshold", c.esc_threshold},
              {"radix", radix_name(c.radix)},
              {"verify", c.verify}};
  json stats{{"nrows", r.stats.nrows},
             {"ncols", r.stats.ncols},
             {"nnz", r.stats.nnz},
             {"nnz_per_column", stats_json(r.stats.nnz_per_column)},
             {"mults_per_column", stats_json(r.stats.mults_per_column)}};
  json out{{"schema", 1},
           {"config", config},
           {"matrix_stats", stats},
           {"cost", cost_to_json(r.cost)},
           {"utilization", r.cost.utilization()},
           {"issue_cycles", r.issue_cycles},
           {"product_nnz", r.product_nnz},
           {"verification", verdict_name(r.verdict)},
           {"preprocessing_share", r.preprocessing_share}};
  if (r.plan) out["plan"] = *r.plan;
  if (with_timestamp) out["timestamp"] = utc_timestamp();
  return out;
}

// Quotes a field when it holds a delimiter, quote or newline.
static std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string csv_header() {
  return "value,label,algo,matrix,n,nnz,b_min,b_max,t,loop_iterations,vector_instructions,"
         "lane_slots_total,lane_slots_active,elements_processed,gather_scatter_ops,"
         "max_index_range,utilization,issue_cycles,product_nnz,verification";
}

std::string csv_row(const RunReport& r, const std::string& sweep_value) {
  const RunConfig& c = r.config;
  std::ostringstream out;
  out << csv_field(sweep_value) << ',' << csv_field(r.label) << ',' << algo_name(c.algo) << ','
      << csv_field(c.source.describe()) << ',' << r.stats.ncols << ',' << r.stats.nnz << ','
      << (c.b_min ? std::to_string(*c.b_min) : "") << ','
      << (c.b_max ? std::to_string(*c.b_max) : "") << ','
      << threshold_text(c.t.value_or(kInfiniteThreshold)) << ',' << r.cost.loop_iterations << ','
      << r.cost.vector_instructions << ',' << r.cost.lane_slots_total << ','
      << r.cost.lane_slots_active << ',' << r.cost.elements_processed << ','
      << r.cost.gather_scatter_ops << ',' << r.cost.max_index_range << ','
      << fmt_double(r.cost.utilization()) << ',' << r.issue_cycles << ',' << r.product_nnz << ','
      << verdict_name(r.verdict);
  return out.str();
}

SweepAxis parse_axis(const std::string& name) {
  const std::string n = lower(trim(name));
  if (n == "z") return SweepAxis::Z;
  if (n == "bmax") return SweepAxis::bmax;
  if (n == "bmin") return SweepAxis::bmin;
  if (n == "t") return SweepAxis::t;
  throw InputError("unknown sweep axis '" + name + "' (Z|bmax|t|bmin)");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Z: return "Z";
    case SweepAxis::bmax: return "bmax";
    case SweepAxis::bmin: return "bmin";
    case SweepAxis::t: return "t";
  }
  return "?";
}

std::vector<SweepRow> cmd_sweep(const RunConfig& base, SweepAxis axis,
                                const std::vector<std::string>& values) {
  if (values.empty()) throw InputError("sweep needs at least one value");
  if (axis == SweepAxis::Z && !base.source.synthetic)
    throw InputError("sweeping Z needs a synthetic matrix");

  // Operands are reused across values unless the matrix itself changes.
  std::optional<Operands> shared;
  if (axis != SweepAxis::Z) shared = load_operands(base.source);

  std::vector<SweepRow> rows;
  for (const std::string& raw : values) {
    const std::string v = trim(raw);
    RunConfig c = base;
    switch (axis) {
      case SweepAxis::Z:
        c.source.z = static_cast<Index>(parse_u64(v, "Z"));
        if (c.source.z < 1 || c.source.z > c.source.n)
          throw InputError("Z must lie in [1, N]");
        break;
      case SweepAxis::bmax:
        c.b_max = parse_u64(v, "b_max");
        if (!base.b_min) c.b_min = c.b_max;  // block size fixed at b_max
        break;
      case SweepAxis::bmin:
        c.b_min = parse_u64(v, "b_min");
        if (!base.b_max) c.b_max = std::max(*c.b_min, c.resolved().b_max.value());
        break;
      case SweepAxis::t:
        c.t = parse_threshold(v);
        break;
    }
    if (shared) {
      rows.push_back({v, run_kernel(c, shared->a, shared->b)});
    } else {
      const Operands ops = load_operands(c.source);
      rows.push_back({v, run_kernel(c, ops.a, ops.b)});
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& row : rows) out += csv_row(row.report, row.value) + "\n";
  return out;
}

json sweep_to_json(const std::vector<SweepRow>& rows, SweepAxis axis) {
  json runs = json::array();
  for (const auto& row : rows) {
    json r = report_to_json(row.report, false);
    r["value"] = row.value;
    runs.push_back(std::move(r));
  }
  return json{{"schema", 1}, {"axis", axis_name(axis)}, {"runs", std::move(runs)}};
}

Metric parse_metric(const std::string& name) {
  const std::string n = lower(trim(name));
  if (n == "loop_iterations") return Metric::loop_iterations;
  if (n == "lane_slots_total") return Metric::lane_slots_total;
  if (n == "vector_instructions") return Metric::vector_instructions;
  throw InputError("unknown metric '" + name +
                   "' (loop_iterations|lane_slots_total|vector_instructions)");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::loop_iterations: return "loop_iterations";
    case Metric::lane_slots_total: return "lane_slots_total";
    case Metric::vector_instructions: return "vector_instructions";
  }
  return "?";
}

std::uint64_t metric_value(const vm::CostReport& cost, Metric m) {
  switch (m) {
    case Metric::loop_iterations: return cost.loop_iterations;
    case Metric::lane_slots_total: return cost.lane_slots_total;
    case Metric::vector_instructions: return cost.vector_instructions;
  }
  return 0;
}

std::vector<RunConfig> table_roster() {
  std::vector<RunConfig> roster;
  for (const char* label : {"spa", "spars-16/64", "spars-40/40", "h-spa-16/64", "h-spa-40/40",
                            "hash-32/256", "hash-256/256", "h-hash-32/256", "h-hash-256/256",
                            "esc"})
    roster.push_back(parse_roster_label(label));
  return roster;
}

std::vector<MatrixSource> read_matrix_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open matrix list '" + path + "'");
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  std::vector<MatrixSource> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("synthetic", 0) == 0) {
      out.push_back(parse_synthetic(trim(line.substr(9))));
      continue;
    }
    MatrixSource s;
    const std::filesystem::path p(line);
    s.path = p.is_absolute() ? p.string() : (dir / p).string();
    out.push_back(std::move(s));
  }
  return out;
}

CompareTable cmd_compare(const std::vector<MatrixSource>& matrices,
                         const std::vector<RunConfig>& algos, Metric metric) {
  std::vector<RunConfig> roster;
  const bool has_spa = std::any_of(algos.begin(), algos.end(),
                                   [](const RunConfig& c) { return c.algo == Algo::spa; });
  if (!has_spa) roster.push_back(RunConfig{});
  for (const auto& c : algos)
    if (c.algo == Algo::spa) roster.insert(roster.begin(), c);
  for (const auto& c : algos)
    if (c.algo != Algo::spa) roster.push_back(c);
  // Only the first SPA entry is the baseline; drop duplicates of it.
  roster.erase(std::remove_if(roster.begin() + 1, roster.end(),
                              [](const RunConfig& c) { return c.algo == Algo::spa; }),
               roster.end());

  CompareTable table;
  table.metric = metric;
  for (const auto& c : roster) table.labels.push_back(roster_label(c));
  const std::size_t k = roster.size();

  std::vector<double> log_sum(k, 0.0);
  std::vector<std::size_t> log_count(k, 0);

  for (const auto& src : matrices) {
    CompareRow row;
    row.matrix = src.describe();
    row.metric.assign(k, 0);
    row.ratio.assign(k, std::nullopt);
    try {
      const Operands ops = load_operands(src);
      for (std::size_t i = 0; i < k; ++i) {
        RunConfig c = roster[i];
        c.source = src;
        row.metric[i] = metric_value(run_kernel(c, ops.a, ops.b).cost, metric);
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      table.rows.push_back(std::move(row));
      continue;
    }
    const std::uint64_t base = row.metric[0];
    std::optional<double> best_ratio;
    for (std::size_t i = 0; i < k; ++i) {
      if (base == 0) break;
      const double r = static_cast<double>(row.metric[i]) / static_cast<double>(base);
      row.ratio[i] = r;
      if (r > 0) {
        log_sum[i] += std::log(r);
        ++log_count[i];
      }
      if (!best_ratio || r < *best_ratio) {
        best_ratio = r;
        row.best = table.labels[i];
      }
    }
    table.rows.push_back(std::move(row));
  }
  table.geomean.assign(k, std::nullopt);
  for (std::size_t i = 0; i < k; ++i)
    if (log_count[i] > 0) table.geomean[i] = std::exp(log_sum[i] / static_cast<double>(log_count[i]));
  return table;
}

std::string compare_to_csv(const CompareTable& table) {
  std::ostringstream out;
  out << "# cost ratio vs SPA on " << metric_name(table.metric) << " (lower is better)\n";
  out << "matrix";
  for (const auto& l : table.labels) out << ',' << csv_field(l);
  out << ",best,error\n";
  auto cell = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); };
  for (const auto& row : table.rows) {
    out << csv_field(row.matrix);
    for (const auto& r : row.ratio) out << ',' << cell(r);
    out << ',' << csv_field(row.best) << ',' << csv_field(row.error) << '\n';
  }
  out << "geomean";
  for (const auto& g : table.geomean) out << ',' << cell(g);
  out << ",,\n";
  return out.str();
}

json compare_to_json(const CompareTable& table) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& row : table.rows) {
    json ratios = json::array();
    for (const auto& r : row.ratio) ratios.push_back(opt(r));
    json r{{"matrix", row.matrix}, {"metric", row.metric}, {"ratio", ratios}, {"best", row.best}};
    if (!row.error.empty()) r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  json geo = json::array();
  for (const auto& g : table.geomean) geo.push_back(opt(g));
  return json{{"schema", 1},
              {"metric", metric_name(table.metric)},
              {"ratio_meaning", "metric(algorithm) / metric(SPA); lower is better"},
              {"algorithms", table.labels},
              {"rows", std::move(rows)},
              {"geomean", std::move(geo)}};
}

}  // namespace spgemm::bench
