#pragma once

// Text serialization of coefficient tensors.
//
// A coefficient file is one JSON header line followed by a CSV table:
//
//   {"L":[8],"N":[2],"d":1,"kind":"complex","schema":"shiftorth.coeff","version":1}
//   i1,j1,re,im
//   1,0,0.35355339059327379,0
//   ...
//
// Rows appear in flat storage order (depth outermost, shift innermost), so
// the file for a given tensor is unique. Values use 17 significant digits,
// which round-trips every finite double exactly. For kind "real" the im
// column must be zero.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shiftorth/lattice.hpp"
#include "shiftorth/sopw.hpp"

namespace shiftorth::cli {

inline constexpr const char* kCoeffSchema = "shiftorth.coeff";
inline constexpr const char* kSopwTableSchema = "shiftorth.sopw_table";
inline constexpr int kCoeffVersion = 1;

enum class ValueKind { Real, Complex };

/// Malformed input. `line` is the 1-based line in the file and `row` the
/// 1-based data row (0 for header problems).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t row);
  std::size_t line() const { return line_; }
  std::size_t row() const { return row_; }

 private:
  std::size_t line_;
  std::size_t row_;
};

struct CoeffFile {
  CoeffTensor tensor;
  ValueKind kind = ValueKind::Complex;
};

/// "%.17g"; non-finite values are rejected by the writers before this.
std::string format_double(double x);

/// Kind "real" drops the imaginary parts.
std::string format_coeff_file(const CoeffTensor& t, ValueKind kind);
void write_coeff_file(const std::filesystem::path& path, const CoeffTensor& t, ValueKind kind);

CoeffFile parse_coeff_file(std::istream& in);
CoeffFile parse_coeff_file(const std::string& text);
CoeffFile read_coeff_file(const std::filesystem::path& path);

/// One nonzero Fourier coefficient of theta^k_j.
struct SopwTableRow {
  int depth = 1;
  int shift = 0;
  int frequency = 0;
  Complex coeff;
};

/// Fourier coefficient table of theta^k_j for k = 1..N, j = 0..L-1, with
/// columns k,j,n,re,im under a JSON header of schema shiftorth.sopw_table.
std::string format_sopw_table(const SopwBasis1D& basis);
/// Returns the basis dimensions through `shifts` and `depths`.
std::vector<SopwTableRow> parse_sopw_table(std::istream& in, int& shifts, int& depths);

}  // namespace shiftorth::cli
