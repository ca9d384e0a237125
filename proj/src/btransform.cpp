#include "shiftorth/btransform.hpp"

#include "fft_plan.hpp"

namespace shiftorth {

void b_transform_inplace(CoeffTensor& v) {
  const LatticeDomain& domain = v.domain();
  detail::batched_dft(v.data(), domain.shifts(), domain.depth_count(),
                      detail::DftSign::Positive);
}

void b_inverse_inplace(CoeffTensor& p) {
  const LatticeDomain& domain = p.domain();
  detail::batched_dft(p.data(), domain.shifts(), domain.depth_count(),
                      detail::DftSign::Negative);
  p *= 1.0 / static_cast<double>(domain.shift_count());
}

CoeffTensor b_transform(const CoeffTensor& v) {
  CoeffTensor out = v;
  b_transform_inplace(out);
  return out;
}

CoeffTensor b_inverse(const CoeffTensor& p) {
  CoeffTensor out = p;
  b_inverse_inplace(out);
  return out;
}

}  // namespace shiftorth
