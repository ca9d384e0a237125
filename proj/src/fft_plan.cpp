#include "fft_plan.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numeric>
#include <tuple>
#include <vector>

namespace shiftorth::detail {

namespace {

// Plans are specific to the buffer alignment class, so SIMD codelets stay
// usable for the common aligned case.
using PlanKey = std::tuple<std::vector<int>, std::size_t, int, int, int>;

struct PlanCache {
  std::mutex mutex;
  std::map<PlanKey, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

/// `out_alignment` is -1 for in-place plans.
fftw_plan plan_for(fftw_complex* in, fftw_complex* out, std::span<const int> dims,
                   std::size_t batch, int sign) {
  const int in_alignment = fftw_alignment_of(reinterpret_cast<double*>(in));
  const int out_alignment =
      in == out ? -1 : fftw_alignment_of(reinterpret_cast<double*>(out));
  PlanCache& c = cache();
  std::lock_guard lock(c.mutex);
  PlanKey key{std::vector<int>(dims.begin(), dims.end()), batch, sign, in_alignment,
              out_alignment};
  if (auto it = c.plans.find(key); it != c.plans.end()) return it->second;

  const int block = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
  // FFTW_ESTIMATE leaves the arrays untouched during planning.
  fftw_plan plan = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(),
                                      static_cast<int>(batch), in, nullptr, 1, block, out,
                                      nullptr, 1, block, sign,
                                      FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  if (plan == nullptr) throw Error("FFTW failed to create a plan");
  c.plans.emplace(std::move(key), plan);
  return plan;
}

int fftw_sign(DftSign sign) { return sign == DftSign::Negative ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void batched_dft(std::span<Complex> data, std::span<const int> dims, std::size_t batch,
                 DftSign sign) {
  if (data.empty()) return;
  auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(buffer, buffer, dims, batch, fftw_sign(sign)), buffer, buffer);
}

void batched_dft(std::span<const Complex> in, std::span<Complex> out, std::span<const int> dims,
                 std::size_t batch, DftSign sign) {
  if (in.size() != out.size()) throw Error("DFT input and output sizes differ");
  if (in.empty()) return;
  // The plan preserves its input, so dropping const is safe.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan_for(src, dst, dims, batch, fftw_sign(sign)), src, dst);
}

}  // namespace shiftorth::detail
