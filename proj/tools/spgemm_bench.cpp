// spgemm_bench: run, sweep and compare the SpGEMM kernels on the vector
// machine model. Exit codes: 0 ok, 1 usage, 2 I/O or parse, 3 verification
// failure, 4 internal fault.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spgemm/bench.hpp"
#include "spgemm/errors.hpp"

namespace {

using namespace spgemm;
using namespace spgemm::bench;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;
constexpr int kExitInternal = 4;

struct Options {
  std::string algo = "spa";
  std::vector<std::string> matrices;
  std::string matrix_b;
  std::vector<std::string> synthetic;
  std::optional<std::size_t> b_min;
  std::optional<std::size_t> b_max;
  std::optional<std::string> threshold;
  std::size_t max_vl = 256;
  std::uint64_t hash_c = kDefaultHashConstant;
  std::uint64_t esc_threshold = kDefaultEscThreshold;
  std::string radix = "auto";
  bool verify = false;
  bool dump_plan = false;
  std::string metric = "loop_iterations";
  std::string output;
  std::string format;
  // sweep
  std::string axis;
  std::vector<std::string> values;
  // compare
  std::string list;
  std::vector<std::string> algos;
};

void add_kernel_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--bmin", o.b_min, "Minimum block size");
  cmd->add_option("--bmax", o.b_max, "Maximum block size");
  cmd->add_option("-t,--threshold", o.threshold, "Hybrid threshold (integer or inf)");
  cmd->add_option("--max-vl", o.max_vl, "Maximum vector length")->capture_default_str();
  cmd->add_option("--hash-c", o.hash_c, "Hash multiplier")->capture_default_str();
  cmd->add_option("--esc-threshold", o.esc_threshold, "ESC column-group load")
      ->capture_default_str();
  cmd->add_option("--radix", o.radix, "ESC radix width: auto|5|6")->capture_default_str();
  cmd->add_option("--output", o.output, "Output file (default stdout)");
}

void add_matrix_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--matrix", o.matrices, "Matrix Market file");
  cmd->add_option("--matrix-b", o.matrix_b, "Distinct right operand (default: B = A)");
  cmd->add_option("--synthetic", o.synthetic, "Synthetic matrix N,Z[,SEED]");
}

RadixPolicy parse_radix(const std::string& s) {
  if (s == "auto") return RadixPolicy::automatic;
  if (s == "5") return RadixPolicy::fixed5;
  if (s == "6") return RadixPolicy::fixed6;
  throw InputError("--radix must be auto, 5 or 6");
}

Threshold parse_t(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfiniteThreshold;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used == s.size() && s.find('-') == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  throw InputError("--threshold must be a non-negative integer or inf");
}

RunConfig base_config(const Options& o) {
  RunConfig c;
  c.b_min = o.b_min;
  c.b_max = o.b_max;
  if (o.threshold) c.t = parse_t(*o.threshold);
  c.max_vl = o.max_vl;
  c.hash_c = o.hash_c;
  c.esc_threshold = o.esc_threshold;
  c.radix = parse_radix(o.radix);
  c.verify = o.verify;
  c.dump_plan = o.dump_plan;
  return c;
}

MatrixSource single_source(const Options& o) {
  if (o.matrices.size() + o.synthetic.size() != 1)
    throw InputError("give exactly one of --matrix or --synthetic");
  if (!o.synthetic.empty()) {
    if (!o.matrix_b.empty()) throw InputError("--matrix-b needs --matrix");
    return parse_synthetic(o.synthetic.front());
  }
  MatrixSource s;
  s.path = o.matrices.front();
  s.path_b = o.matrix_b;
  return s;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw FormatError("cannot write '" + o.output + "'");
  out << text;
  if (!out) throw FormatError("error writing '" + o.output + "'");
}

std::string format_or(const Options& o, const std::string& fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "json" && f != "csv") throw InputError("--format must be json or csv");
  return f;
}

int do_run(const Options& o) {
  RunConfig c = base_config(o);
  c.algo = parse_algo(o.algo);
  c.source = single_source(o);
  const RunReport r = cmd_run(c);
  if (format_or(o, "json") == "json")
    emit(o, report_to_json(r, true).dump(2) + "\n");
  else
    emit(o, csv_header() + "\n" + csv_row(r) + "\n");
  if (r.verdict == Verdict::fail) {
    std::cerr << "verification failed: product differs from the reference\n";
    return kExitVerify;
  }
  return 0;
}

int do_sweep(const Options& o) {
  RunConfig c = base_config(o);
  c.algo = parse_algo(o.algo);
  c.source = single_source(o);
  const SweepAxis axis = parse_axis(o.axis);
  const auto rows = cmd_sweep(c, axis, o.values);
  if (format_or(o, "csv") == "json")
    emit(o, sweep_to_json(rows, axis).dump(2) + "\n");
  else
    emit(o, sweep_to_csv(rows));
  for (const auto& row : rows)
    if (row.report.verdict == Verdict::fail) {
      std::cerr << "verification failed at " << o.axis << "=" << row.value << "\n";
      return kExitVerify;
    }
  return 0;
}

int do_compare(const Options& o) {
  std::vector<MatrixSource> matrices;
  if (!o.list.empty()) matrices = read_matrix_list(o.list);
  for (const auto& m : o.matrices) {
    MatrixSource s;
    s.path = m;
    matrices.push_back(s);
  }
  for (const auto& s : o.synthetic) matrices.push_back(parse_synthetic(s));
  if (matrices.empty()) throw InputError("compare needs --list, --matrix or --synthetic");

  const RunConfig base = base_config(o);
  std::vector<RunConfig> algos;
  if (o.algos.empty()) {
    algos = table_roster();
  } else {
    for (const auto& label : o.algos) algos.push_back(parse_roster_label(label));
  }
  for (auto& a : algos) {
    a.max_vl = base.max_vl;
    a.hash_c = base.hash_c;
    a.esc_threshold = base.esc_threshold;
    a.radix = base.radix;
    if (base.t) a.t = base.t;
  }

  const CompareTable table = cmd_compare(matrices, algos, parse_metric(o.metric));
  if (format_or(o, "csv") == "json")
    emit(o, compare_to_json(table).dump(2) + "\n");
  else
    emit(o, compare_to_csv(table));
  for (const auto& row : table.rows)
    if (!row.error.empty()) std::cerr << row.matrix << ": " << row.error << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SpGEMM kernels on a long-vector machine model"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run one kernel and report its cost counters");
  run->add_option("--algo", o.algo, "spa|spars|hash|hspa|hhash|esc")->capture_default_str();
  add_matrix_options(run, o);
  add_kernel_options(run, o);
  run->add_flag("--verify", o.verify, "Check the product against a reference");
  run->add_flag("--dump-plan", o.dump_plan, "Include the column plan in the report");
  run->add_option("--format", o.format, "json|csv (default json)");

  auto* sweep = app.add_subcommand("sweep", "Run one kernel across parameter values");
  sweep->add_option("--algo", o.algo, "spa|spars|hash|hspa|hhash|esc")->capture_default_str();
  add_matrix_options(sweep, o);
  add_kernel_options(sweep, o);
  sweep->add_option("--axis", o.axis, "Z|bmax|t|bmin")->required();
  sweep->add_option("--values", o.values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_flag("--verify", o.verify, "Check every product");
  sweep->add_option("--format", o.format, "csv|json (default csv)");

  auto* compare = app.add_subcommand("compare", "Cost-metric ratios against SPA");
  compare->add_option("--list", o.list, "Matrix list file");
  add_matrix_options(compare, o);
  add_kernel_options(compare, o);
  compare->add_option("--algos", o.algos, "Roster labels, e.g. spa,spars-40/40,h-hash-256/256")
      ->delimiter(',');
  compare->add_option("--metric", o.metric, "loop_iterations|lane_slots_total|vector_instructions")
      ->capture_default_str();
  compare->add_option("--format", o.format, "csv|json (default csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) return do_run(o);
    if (sweep->parsed()) return do_sweep(o);
    return do_compare(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
