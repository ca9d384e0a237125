#pragma once

#include <cstddef>
#include <span>

#include "shiftorth/types.hpp"

namespace shiftorth::detail {

/// Exponent sign of an unnormalized DFT: Negative is exp(-i2pi jk/n).
enum class DftSign { Negative, Positive };

/// Unnormalized in-place DFT over each of `batch` contiguous row-major
/// blocks whose extents are `dims`. Plans are cached per shape and the
/// call is safe from concurrent threads.
void batched_dft(std::span<Complex> data, std::span<const int> dims, std::size_t batch,
                 DftSign sign);

/// Out-of-place variant of batched_dft; `in` is left unchanged and must
/// not overlap `out`.
void batched_dft(std::span<const Complex> in, std::span<Complex> out, std::span<const int> dims,
                 std::size_t batch, DftSign sign);

inline void dft(std::span<Complex> data, DftSign sign) {
  const int n = static_cast<int>(data.size());
  batched_dft(data, std::span<const int>(&n, 1), 1, sign);
}

}  // namespace shiftorth::detail
