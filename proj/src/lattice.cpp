#include "shiftorth/lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace shiftorth {

namespace {

std::size_t checked_product(const std::vector<int>& extents, const char* what) {
  std::size_t product = 1;
  for (int e : extents) {
    if (e < 1) {
      throw PreconditionError(std::string(what) + " entries must be >= 1, got " +
                              std::to_string(e));
    }
    const auto ue = static_cast<std::size_t>(e);
    if (product > std::numeric_limits<std::size_t>::max() / ue) {
      throw PreconditionError("lattice size overflows the index range");
    }
    product *= ue;
  }
  return product;
}

std::size_t row_major(std::span<const int> idx, const std::vector<int>& extents,
                      int offset, const char* what) {
  if (idx.size() != extents.size()) {
    throw IndexError(std::string(what) + " index has " + std::to_string(idx.size()) +
                     " components, domain has " + std::to_string(extents.size()));
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < extents.size(); ++k) {
    const int c = idx[k] - offset;
    if (c < 0 || c >= extents[k]) {
      throw IndexError(std::string(what) + " component " + std::to_string(k) + " = " +
                       std::to_string(idx[k]) + " out of range");
    }
    flat = flat * static_cast<std::size_t>(extents[k]) + static_cast<std::size_t>(c);
  }
  return flat;
}

std::vector<int> row_major_inverse(std::size_t flat, const std::vector<int>& extents,
                                   int offset) {
  std::vector<int> idx(extents.size());
  for (std::size_t k = extents.size(); k-- > 0;) {
    const auto e = static_cast<std::size_t>(extents[k]);
    idx[k] = static_cast<int>(flat % e) + offset;
    flat /= e;
  }
  return idx;
}

void require_same_domain(const CoeffTensor& a, const CoeffTensor& b) {
  if (!(a.domain() == b.domain())) {
    throw DomainMismatch("coefficient tensors live on different lattice domains");
  }
}

}  // namespace

LatticeDomain::LatticeDomain(std::vector<int> shifts, std::vector<int> depths)
    : shifts_(std::move(shifts)), depths_(std::move(depths)) {
  if (shifts_.empty() || static_cast<int>(shifts_.size()) > kMaxDim) {
    throw PreconditionError("lattice dimension must be 1, 2 or 3");
  }
  if (depths_.size() != shifts_.size()) {
    throw PreconditionError("shift and depth extents must have the same dimension");
  }
  shift_count_ = checked_product(shifts_, "shift count");
  depth_count_ = checked_product(depths_, "depth cap");
  if (depth_count_ > std::numeric_limits<std::size_t>::max() / shift_count_) {
    throw PreconditionError("lattice size overflows the index range");
  }
}

std::size_t LatticeDomain::flatten_shift(std::span<const int> j) const {
  return row_major(j, shifts_, 0, "shift");
}

std::vector<int> LatticeDomain::unflatten_shift(std::size_t flat) const {
  if (flat >= shift_count_) throw IndexError("flat shift index out of range");
  return row_major_inverse(flat, shifts_, 0);
}

std::size_t LatticeDomain::flatten_depth(std::span<const int> i) const {
  return row_major(i, depths_, 1, "depth");
}

std::vector<int> LatticeDomain::unflatten_depth(std::size_t flat) const {
  if (flat >= depth_count_) throw IndexError("flat depth index out of range");
  return row_major_inverse(flat, depths_, 1);
}

std::size_t flatten(const LatticeIndex& idx, const LatticeDomain& domain) {
  return domain.flatten_depth(idx.depth) * domain.shift_count() +
         domain.flatten_shift(idx.shift);
}

LatticeIndex unflatten(std::size_t flat, const LatticeDomain& domain) {
  if (flat >= domain.size()) throw IndexError("flat index out of range");
  return {domain.unflatten_depth(flat / domain.shift_count()),
          domain.unflatten_shift(flat % domain.shift_count())};
}

CoeffTensor::CoeffTensor(LatticeDomain domain)
    : domain_(std::move(domain)), data_(domain_.size()) {}

CoeffTensor::CoeffTensor(LatticeDomain domain, ComplexVector data)
    : domain_(std::move(domain)), data_(std::move(data)) {
  if (data_.size() != domain_.size()) {
    throw DomainMismatch("coefficient array has " + std::to_string(data_.size()) +
                         " entries, domain needs " + std::to_string(domain_.size()));
  }
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw PreconditionError("coefficient tensor has a non-finite entry");
    }
  }
}

std::span<Complex> CoeffTensor::depth_slice(std::size_t depth_flat) {
  return std::span<Complex>(data_).subspan(depth_flat * domain_.shift_count(),
                                           domain_.shift_count());
}

std::span<const Complex> CoeffTensor::depth_slice(std::size_t depth_flat) const {
  return std::span<const Complex>(data_).subspan(depth_flat * domain_.shift_count(),
                                                 domain_.shift_count());
}

double CoeffTensor::norm() const {
  double sum = 0.0;
  for (const Complex& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

double CoeffTensor::max_abs_imag() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z.imag()));
  return m;
}

CoeffTensor& CoeffTensor::operator+=(const CoeffTensor& other) {
  require_same_domain(*this, other);
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += other.data_[n];
  return *this;
}

CoeffTensor& CoeffTensor::operator-=(const CoeffTensor& other) {
  require_same_domain(*this, other);
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= other.data_[n];
  return *this;
}

CoeffTensor& CoeffTensor::operator*=(Complex scale) {
  for (Complex& z : data_) z *= scale;
  return *this;
}

CoeffTensor operator+(CoeffTensor a, const CoeffTensor& b) { return a += b; }
CoeffTensor operator-(CoeffTensor a, const CoeffTensor& b) { return a -= b; }
CoeffTensor operator*(Complex scale, CoeffTensor a) { return a *= scale; }

Complex inner(const CoeffTensor& a, const CoeffTensor& b) {
  require_same_domain(a, b);
  Complex sum = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) sum += std::conj(a[n]) * b[n];
  return sum;
}

double max_abs_diff(const CoeffTensor& a, const CoeffTensor& b) {
  require_same_domain(a, b);
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

CoeffTensor shift(const CoeffTensor& v, std::span<const int> s) {
  const LatticeDomain& domain = v.domain();
  const auto& L = domain.shifts();
  if (s.size() != L.size()) throw IndexError("shift vector has the wrong dimension");
  for (std::size_t k = 0; k < L.size(); ++k) {
    if (s[k] < 0 || s[k] >= L[k]) throw IndexError("shift component out of range");
  }

  // Source flat shift index for each destination flat shift index.
  const std::size_t count = domain.shift_count();
  std::vector<std::size_t> source(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<int> j = domain.unflatten_shift(t);
    for (std::size_t k = 0; k < L.size(); ++k) j[k] = (j[k] - s[k] + L[k]) % L[k];
    source[t] = domain.flatten_shift(j);
  }

  CoeffTensor out(domain);
  for (std::size_t i = 0; i < domain.depth_count(); ++i) {
    auto src = v.depth_slice(i);
    auto dst = out.depth_slice(i);
    for (std::size_t t = 0; t < count; ++t) dst[t] = src[source[t]];
  }
  return out;
}

ComplexVector shift_correlation(const CoeffTensor& g, const CoeffTensor& f) {
  require_same_domain(g, f);
  const LatticeDomain& domain = g.domain();
  const std::size_t count = domain.shift_count();
  ComplexVector c(count);
  for (std::size_t t = 0; t < count; ++t) {
    const std::vector<int> s = domain.unflatten_shift(t);
    c[t] = inner(g, shift(f, s));
  }
  return c;
}

Eigen::MatrixXcd gram_shift(const CoeffTensor& g, const CoeffTensor& f) {
  const ComplexVector c = shift_correlation(g, f);
  const LatticeDomain& domain = g.domain();
  const auto& L = domain.shifts();
  const auto count = static_cast<Eigen::Index>(domain.shift_count());
  Eigen::MatrixXcd gram(count, count);
  // <S(s')g, S(s)f> = <g, S(s - s')f>
  for (Eigen::Index row = 0; row < count; ++row) {
    const std::vector<int> sp = domain.unflatten_shift(static_cast<std::size_t>(row));
    for (Eigen::Index col = 0; col < count; ++col) {
      std::vector<int> s = domain.unflatten_shift(static_cast<std::size_t>(col));
      for (std::size_t k = 0; k < L.size(); ++k) s[k] = (s[k] - sp[k] + L[k]) % L[k];
      gram(row, col) = c[domain.flatten_shift(s)];
    }
  }
  return gram;
}

}  // namespace shiftorth
