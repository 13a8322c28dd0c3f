// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "wnls/aligned.hpp"

namespace wnls {

/// In-place complex-to-complex transform on an n^d cube, backed by FFTW.
/// Plans are created once (FFTW_ESTIMATE, so planning is deterministic) and may
/// be executed concurrently on different buffers.
class FftPlan {
 public:
  FftPlan(int d, std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  int dim() const noexcept { return d_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }

  /// Unnormalized forward DFT, sign -1.
  void forward(cplx* data) const;
  /// Inverse DFT including the 1/size factor.
  void inverse(cplx* data) const;
  /// Inverse DFT without normalization.
  void backward_raw(cplx* data) const;

 private:
  int d_;
  std::size_t n_;
  std::size_t size_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Process-wide plan cache keyed by (d, n). Plans live until exit.
const FftPlan& fft_plan(int d, std::size_t n);

}  // namespace wnls
