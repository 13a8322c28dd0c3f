// SPDX-License-Identifier: Apache-2.0
#include "wnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "wnls/kernels.hpp"

namespace wnls {
namespace {

// The FFTW planner is not re-entrant; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FftPlan::FftPlan(int d, std::size_t n) : d_(d), n_(n), size_(1) {
  int dims[3] = {0, 0, 0};
  for (int a = 0; a < d; ++a) {
    dims[a] = static_cast<int>(n);
    size_ *= n;
  }
  ComplexBuffer scratch(size_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_plan_ = fftw_plan_dft(d, dims, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft(d, dims, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void FftPlan::forward(cplx* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data), as_fftw(data));
}

void FftPlan::backward_raw(cplx* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data), as_fftw(data));
}

void FftPlan::inverse(cplx* data) const {
  backward_raw(data);
  simd::active_kernels().scale(data, 1.0 / static_cast<double>(size_), size_);
}

const FftPlan& fft_plan(int d, std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, std::size_t>, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{d, n}];
  if (!slot) slot = std::make_unique<FftPlan>(d, n);
  return *slot;
}

}  // namespace wnls
