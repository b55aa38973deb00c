#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace tfuncert::detail {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per shape and never destroyed.
fftw_plan plan_for(int n, int dim, bool forward) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, bool>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(n, dim, forward);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  std::size_t total = dim == 1 ? n : static_cast<std::size_t>(n) * n;
  std::vector<fftw_complex> scratch(total);
  int dims[2] = {n, n};
  fftw_plan plan = fftw_plan_dft(dim, dims, scratch.data(), scratch.data(),
                                 forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(key, plan);
  return plan;
}

}  // namespace

void dft_inplace(std::span<std::complex<double>> data, int n, int dim, bool forward) {
  fftw_plan plan = plan_for(n, dim, forward);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, raw, raw);
}

void checkerboard_inplace(std::span<std::complex<double>> data, int n, int dim) {
  if (dim == 1) {
    for (int j = 1; j < n; j += 2) data[j] = -data[j];
    return;
  }
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = (j1 & 1) ? 0 : 1; j2 < n; j2 += 2) {
      auto& v = data[static_cast<std::size_t>(j1) * n + j2];
      v = -v;
    }
  }
}

}  // namespace tfuncert::detail
