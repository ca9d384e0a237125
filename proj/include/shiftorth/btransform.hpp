#pragma once

// The B-transform: for each depth index, a d-dimensional DFT over the
// shift axes with a positive exponent,
//
//   B(v)(i ; j) = sum_l exp(+i 2pi sum_k j_k l_k / L_k) v(i ; l),
//
// and its inverse with the negative exponent and a 1/prod(L) factor. It
// diagonalizes every shift-circulant structure of a coefficient tensor:
// S(s) becomes a per-frequency phase and shift inner products become
// per-frequency inner products over the depth axes.

#include "shiftorth/lattice.hpp"

namespace shiftorth {

CoeffTensor b_transform(const CoeffTensor& v);
CoeffTensor b_inverse(const CoeffTensor& p);

/// In-place variants used by the projection kernels.
void b_transform_inplace(CoeffTensor& v);
void b_inverse_inplace(CoeffTensor& p);


}  // namespace shiftorth
