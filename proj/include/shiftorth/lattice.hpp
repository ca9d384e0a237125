#pragma once

// Index geometry of a truncated shift-orthogonal basis expansion.
//
// A coefficient tensor a(i1..id ; j1..jd) carries a depth multi-index i
// (1-based, i_k in [1, N_k]) and a shift multi-index j (0-based, j_k in
// [0, L_k - 1]). Storage is a flat complex array with the depth axes
// outermost and the shift axes innermost, each group row-major, so every
// depth slice is one contiguous block of prod(L) entries.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shiftorth/types.hpp"

namespace shiftorth {

class LatticeDomain {
 public:
  static constexpr int kMaxDim = 3;

  /// Throws PreconditionError unless 1 <= d <= 3, every entry >= 1 and
  /// the total size fits in std::size_t.
  LatticeDomain(std::vector<int> shifts, std::vector<int> depths);

  /// Convenience for the 1D case.
  static LatticeDomain line(int shifts, int depths) {
    return LatticeDomain({shifts}, {depths});
  }

  int dim() const { return static_cast<int>(shifts_.size()); }
  const std::vector<int>& shifts() const { return shifts_; }
  const std::vector<int>& depths() const { return depths_; }

  /// prod(L)
  std::size_t shift_count() const { return shift_count_; }
  /// prod(N)
  std::size_t depth_count() const { return depth_count_; }
  /// M = prod(N) * prod(L)
  std::size_t size() const { return depth_count_ * shift_count_; }

  std::size_t flatten_shift(std::span<const int> j) const;
  std::vector<int> unflatten_shift(std::size_t flat) const;
  std::size_t flatten_depth(std::span<const int> i) const;
  std::vector<int> unflatten_depth(std::size_t flat) const;

  bool operator==(const LatticeDomain& other) const = default;

 private:
  std::vector<int> shifts_;
  std::vector<int> depths_;
  std::size_t shift_count_ = 1;
  std::size_t depth_count_ = 1;
};

struct LatticeIndex {
  std::vector<int> depth;  // 1-based
  std::vector<int> shift;  // 0-based

  bool operator==(const LatticeIndex&) const = default;
};

std::size_t flatten(const LatticeIndex& idx, const LatticeDomain& domain);
LatticeIndex unflatten(std::size_t flat, const LatticeDomain& domain);

class CoeffTensor {
 public:
  /// Zero tensor on `domain`.
  explicit CoeffTensor(LatticeDomain domain);
  /// Throws DomainMismatch on a length mismatch and PreconditionError on
  /// non-finite entries.
  CoeffTensor(LatticeDomain domain, ComplexVector data);

  const LatticeDomain& domain() const { return domain_; }
  std::size_t size() const { return data_.size(); }

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  Complex& operator[](std::size_t flat) { return data_[flat]; }
  const Complex& operator[](std::size_t flat) const { return data_[flat]; }

  Complex& at(const LatticeIndex& idx) { return data_[flatten(idx, domain_)]; }
  const Complex& at(const LatticeIndex& idx) const {
    return data_[flatten(idx, domain_)];
  }

  /// Contiguous block of prod(L) entries for one flat depth index.
  std::span<Complex> depth_slice(std::size_t depth_flat);
  std::span<const Complex> depth_slice(std::size_t depth_flat) const;

  double norm() const;
  double max_abs_imag() const;

  CoeffTensor& operator+=(const CoeffTensor& other);
  CoeffTensor& operator-=(const CoeffTensor& other);
  CoeffTensor& operator*=(Complex scale);

 private:
  LatticeDomain domain_;
  ComplexVector data_;
};

CoeffTensor operator+(CoeffTensor a, const CoeffTensor& b);
CoeffTensor operator-(CoeffTensor a, const CoeffTensor& b);
CoeffTensor operator*(Complex scale, CoeffTensor a);

/// <a, b>, conjugate-linear in `a`.
Complex inner(const CoeffTensor& a, const CoeffTensor& b);
double max_abs_diff(const CoeffTensor& a, const CoeffTensor& b);

/// S(s): output(i ; j) = v(i ; j - s), per-axis modulo L_k.
CoeffTensor shift(const CoeffTensor& v, std::span<const int> s);

/// c(t) = <g, S(t) f> for every flat shift index t, by direct summation.
ComplexVector shift_correlation(const CoeffTensor& g, const CoeffTensor& f);

/// Entry (s', s) = <S(s') g, S(s) f>.
Eigen::MatrixXcd gram_shift(const CoeffTensor& g, const CoeffTensor& f);

}  // namespace shiftorth
