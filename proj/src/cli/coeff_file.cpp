#include "shiftorth/cli/coeff_file.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace shiftorth::cli {

namespace {

using nlohmann::json;

std::string with_location(const std::string& what, std::size_t line, std::size_t row) {
  std::string msg = "line " + std::to_string(line);
  if (row > 0) msg += " (row " + std::to_string(row) + ")";
  return msg + ": " + what;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

long parse_int(const std::string& field, std::size_t line, std::size_t row) {
  long value = 0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("expected an integer, got '" + field + "'", line, row);
  }
  return value;
}

double parse_real(const std::string& field, std::size_t line, std::size_t row) {
  if (field.empty()) throw ParseError("empty numeric field", line, row);
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE) {
    throw ParseError("expected a number, got '" + field + "'", line, row);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value '" + field + "'", line, row);
  return value;
}

std::string column_header(int d) {
  std::string out;
  for (int a = 1; a <= d; ++a) out += "i" + std::to_string(a) + ",";
  for (int a = 1; a <= d; ++a) out += "j" + std::to_string(a) + ",";
  return out + "re,im";
}

json parse_header(std::istream& in, const char* schema) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing JSON header", 1, 0);
  json header;
  try {
    header = json::parse(strip_cr(line));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON header: ") + e.what(), 1, 0);
  }
  if (!header.is_object() || header.value("schema", "") != schema) {
    throw ParseError(std::string("header schema is not ") + schema, 1, 0);
  }
  if (header.value("version", 0) != kCoeffVersion) {
    throw ParseError("unsupported version", 1, 0);
  }
  return header;
}

std::vector<int> int_array(const json& header, const char* key) {
  const auto it = header.find(key);
  if (it == header.end() || !it->is_array()) {
    throw ParseError(std::string("header lacks array '") + key + "'", 1, 0);
  }
  std::vector<int> out;
  for (const json& v : *it) {
    if (!v.is_number_integer()) {
      throw ParseError(std::string("header array '") + key + "' must hold integers", 1, 0);
    }
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t row)
    : Error(with_location(what, line, row)), line_(line), row_(row) {}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_coeff_file(const CoeffTensor& t, ValueKind kind) {
  const LatticeDomain& domain = t.domain();
  const int d = domain.dim();
  json header;
  header["schema"] = kCoeffSchema;
  header["version"] = kCoeffVersion;
  header["d"] = d;
  header["L"] = domain.shifts();
  header["N"] = domain.depths();
  header["kind"] = kind == ValueKind::Real ? "real" : "complex";

  std::string out = header.dump() + "\n" + column_header(d) + "\n";
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const LatticeIndex idx = unflatten(flat, domain);
    for (int i : idx.depth) out += std::to_string(i) + ",";
    for (int j : idx.shift) out += std::to_string(j) + ",";
    const Complex z = t[flat];
    out += format_double(z.real());
    out += ",";
    out += kind == ValueKind::Real ? "0" : format_double(z.imag());
    out += "\n";
  }
  return out;
}

void write_coeff_file(const std::filesystem::path& path, const CoeffTensor& t, ValueKind kind) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << format_coeff_file(t, kind);
  if (!out) throw Error("failed writing " + path.string());
}

CoeffFile parse_coeff_file(std::istream& in) {
  const json header = parse_header(in, kCoeffSchema);
  const std::vector<int> shifts = int_array(header, "L");
  const std::vector<int> depths = int_array(header, "N");
  const int d = header.value("d", -1);
  if (d != static_cast<int>(shifts.size()) || d != static_cast<int>(depths.size())) {
    throw ParseError("header d does not match the lengths of L and N", 1, 0);
  }
  const std::string kind_name = header.value("kind", "");
  if (kind_name != "real" && kind_name != "complex") {
    throw ParseError("header kind must be 'real' or 'complex'", 1, 0);
  }
  const ValueKind kind = kind_name == "real" ? ValueKind::Real : ValueKind::Complex;

  LatticeDomain domain = [&] {
    try {
      return LatticeDomain(shifts, depths);
    } catch (const Error& e) {
      throw ParseError(std::string("invalid lattice in header: ") + e.what(), 1, 0);
    }
  }();

  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != column_header(d)) {
    throw ParseError("expected column header '" + column_header(d) + "'", 2, 0);
  }

  ComplexVector data(domain.size());
  const std::size_t fields_per_row = static_cast<std::size_t>(2 * d + 2);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    const std::size_t line_no = row + 3;
    if (line.empty()) {
      // Trailing blank lines are tolerated; anything after them is not.
      std::string rest;
      while (std::getline(in, rest)) {
        if (!strip_cr(rest).empty()) throw ParseError("data after blank line", line_no, row + 1);
      }
      break;
    }
    ++row;
    if (row > domain.size()) {
      throw ParseError("more rows than the " + std::to_string(domain.size()) +
                           " coefficients declared by the header",
                       line_no, row);
    }
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != fields_per_row) {
      throw ParseError("expected " + std::to_string(fields_per_row) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no, row);
    }
    LatticeIndex idx;
    for (int a = 0; a < d; ++a) idx.depth.push_back(static_cast<int>(parse_int(fields[a], line_no, row)));
    for (int a = 0; a < d; ++a) {
      idx.shift.push_back(static_cast<int>(parse_int(fields[d + a], line_no, row)));
    }
    std::size_t flat = 0;
    try {
      flat = flatten(idx, domain);
    } catch (const Error& e) {
      throw ParseError(std::string("index out of range: ") + e.what(), line_no, row);
    }
    if (flat != row - 1) {
      throw ParseError("rows must appear in flat storage order; expected flat index " +
                           std::to_string(row - 1),
                       line_no, row);
    }
    const double re = parse_real(fields[2 * d], line_no, row);
    const double im = parse_real(fields[2 * d + 1], line_no, row);
    if (kind == ValueKind::Real && im != 0.0) {
      throw ParseError("nonzero imaginary part in a real file", line_no, row);
    }
    data[flat] = Complex(re, im);
  }
  if (row != domain.size()) {
    throw ParseError("expected " + std::to_string(domain.size()) + " rows, got " +
                         std::to_string(row),
                     row + 3, row);
  }
  return {CoeffTensor(std::move(domain), std::move(data)), kind};
}

CoeffFile parse_coeff_file(const std::string& text) {
  std::istringstream in(text);
  return parse_coeff_file(in);
}

CoeffFile read_coeff_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_coeff_file(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.row());
  }
}

std::string format_sopw_table(const SopwBasis1D& basis) {
  json header;
  header["schema"] = kSopwTableSchema;
  header["version"] = kCoeffVersion;
  header["L"] = basis.shifts();
  header["N"] = basis.depths();
  std::string out = header.dump() + "\nk,j,n,re,im\n";
  for (int k = 1; k <= basis.depths(); ++k) {
    for (int j = 0; j < basis.shifts(); ++j) {
      for (const FourierMode& mode : sopw_fourier_coeffs(k, j, basis)) {
        out += std::to_string(k) + "," + std::to_string(j) + "," + std::to_string(mode.n) + "," +
               format_double(mode.coeff.real()) + "," + format_double(mode.coeff.imag()) + "\n";
      }
    }
  }
  return out;
}

std::vector<SopwTableRow> parse_sopw_table(std::istream& in, int& shifts, int& depths) {
  const json header = parse_header(in, kSopwTableSchema);
  if (!header.contains("L") || !header["L"].is_number_integer() || !header.contains("N") ||
      !header["N"].is_number_integer()) {
    throw ParseError("table header needs integer L and N", 1, 0);
  }
  shifts = header["L"].get<int>();
  depths = header["N"].get<int>();
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "k,j,n,re,im") {
    throw ParseError("expected column header 'k,j,n,re,im'", 2, 0);
  }
  std::vector<SopwTableRow> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const std::size_t line_no = row + 2;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 5) throw ParseError("expected 5 fields", line_no, row);
    rows.push_back({static_cast<int>(parse_int(f[0], line_no, row)),
                    static_cast<int>(parse_int(f[1], line_no, row)),
                    static_cast<int>(parse_int(f[2], line_no, row)),
                    Complex(parse_real(f[3], line_no, row), parse_real(f[4], line_no, row))});
  }
  return rows;
}

}  // namespace shiftorth::cli
