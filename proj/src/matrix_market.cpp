#include "spgemm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "spgemm/errors.hpp"

namespace spgemm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool skippable(const std::string& line) {
  if (line.empty() || line[0] == '%') return true;
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

CscMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty Matrix Market stream");

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw FormatError("missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw FormatError("unsupported object '" + object + "'");
  if (format != "coordinate") throw FormatError("unsupported format '" + format + "'");
  if (field != "real" && field != "integer" && field != "pattern")
    throw FormatError("unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw FormatError("unsupported symmetry '" + symmetry + "'");
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  while (std::getline(in, line) && skippable(line)) {
  }
  if (!in) throw FormatError("missing size line");
  long long nrows = 0, ncols = 0, count = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> nrows >> ncols >> count) || nrows < 0 || ncols < 0 || count < 0)
      throw FormatError("malformed size line: " + line);
  }
  if (symmetric && nrows != ncols) throw FormatError("symmetric matrix must be square");

  TripletList t{nrows, ncols, {}};
  t.entries.reserve(static_cast<std::size_t>(symmetric ? 2 * count : count));
  long long seen = 0;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    if (seen == count) throw FormatError("more entries than declared (" + std::to_string(count) + ")");
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 1.0;
    if (!(entry >> i >> j)) throw FormatError("malformed entry: " + line);
    if (!pattern && !(entry >> v)) throw FormatError("missing value: " + line);
    if (i < 1 || i > nrows || j < 1 || j > ncols)
      throw FormatError("entry index out of range: " + line);
    t.entries.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) t.entries.push_back({j - 1, i - 1, v});
    ++seen;
  }
  if (seen != count)
    throw FormatError("declared " + std::to_string(count) + " entries, found " +
                      std::to_string(seen));
  return from_triplets(t);
}

CscMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CscMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.nrows() << ' ' << m.ncols() << ' ' << m.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index j = 0; j < m.ncols(); ++j) {
    auto rows = m.col_rows(j);
    auto vals = m.col_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p)
      out << rows[p] + 1 << ' ' << j + 1 << ' ' << vals[p] << '\n';
  }
}

void write_matrix_market_file(const std::string& path, const CscMatrix& m) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  write_matrix_market(out, m);
}

}  // namespace spgemm
