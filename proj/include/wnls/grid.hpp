// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "wnls/aligned.hpp"
#include "wnls/fft.hpp"

namespace wnls {

/// Periodic box [-L, L)^d with n samples per axis. Sample j on an axis sits at
/// x_j = -L + j*dx; wavenumbers are pi*m/L in FFT order (m = j for j < n/2,
/// j - n otherwise). Fields are stored row-major with the last axis fastest.
class SpectralGrid {
 public:
  /// Throws UnsupportedDimension unless 1 <= d <= 3, and InvalidArgument unless
  /// n >= 8 is even with no prime factor above 7 and L is positive and finite.
  static std::shared_ptr<const SpectralGrid> create(int d, std::size_t n, double L);

  int dim() const noexcept { return d_; }
  std::size_t n() const noexcept { return n_; }
  double half_width() const noexcept { return L_; }
  double dx() const noexcept { return dx_; }
  /// n^d
  std::size_t size() const noexcept { return size_; }
  /// dx^d
  double cell_volume() const noexcept { return cell_volume_; }
  /// Largest representable |k| along one axis, pi*n/(2L).
  double k_max() const noexcept;

  /// 1-D tables of length n.
  const std::vector<double>& wavenumbers() const noexcept { return k1_; }
  const std::vector<double>& coordinates() const noexcept { return x1_; }
  /// Signed mode index m for FFT position j.
  long mode_index(std::size_t j) const noexcept;

  /// Full-size tables of length n^d.
  const RealBuffer& k_axis(int axis) const { return k_axis_.at(static_cast<std::size_t>(axis)); }
  /// First-derivative symbol: k_axis with the Nyquist mode zeroed, so real
  /// fields have real derivatives.
  const RealBuffer& derivative_symbol(int axis) const { return d_axis_.at(static_cast<std::size_t>(axis)); }
  const RealBuffer& x_axis(int axis) const { return x_axis_.at(static_cast<std::size_t>(axis)); }
  const RealBuffer& k_squared() const noexcept { return k2_; }
  const RealBuffer& x_squared() const noexcept { return x2_; }
  /// 1 where any |k_axis| exceeds 2/3 of k_max, else 0.
  const RealBuffer& tail_mask() const noexcept { return tail_mask_; }
  /// 1 where any |x_axis| >= L(1 - 1/8), else 0.
  const RealBuffer& boundary_mask() const noexcept { return boundary_mask_; }

  /// Decodes a flat index into per-axis indices.
  std::array<std::size_t, 3> unflatten(std::size_t flat) const noexcept;

  const FftPlan& fft() const noexcept { return *plan_; }

  bool same_as(const SpectralGrid& other) const noexcept {
    return d_ == other.d_ && n_ == other.n_ && L_ == other.L_;
  }

  SpectralGrid(int d, std::size_t n, double L);

 private:
  int d_;
  std::size_t n_;
  double L_;
  double dx_;
  std::size_t size_;
  double cell_volume_;
  std::vector<double> k1_, x1_;
  std::vector<RealBuffer> k_axis_, d_axis_, x_axis_;
  RealBuffer k2_, x2_, tail_mask_, boundary_mask_;
  const FftPlan* plan_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Complex samples of one component on a grid.
struct Field {
  GridPtr grid;
  ComplexBuffer data;
  /// Set when the samples are known to contain NaN/Inf.
  bool diverged = false;

  Field() = default;
  explicit Field(GridPtr g) : grid(std::move(g)), data(grid->size(), cplx(0.0, 0.0)) {}

  std::size_t size() const noexcept { return data.size(); }
  bool all_finite() const noexcept;
};

struct FieldPair {
  Field u;
  Field v;
  double t = 0.0;

  FieldPair() = default;
  FieldPair(Field u_, Field v_, double t_ = 0.0);
  explicit FieldPair(GridPtr g, double t_ = 0.0) : u(g), v(g), t(t_) {}

  const SpectralGrid& grid() const { return *u.grid; }
};

/// Approximation of the continuous Fourier transform on the grid:
/// F(k) = dx^d sum_x f(x) e^{-i k.x}, in FFT layout.
struct Spectrum {
  GridPtr grid;
  ComplexBuffer data;
};

}  // namespace wnls
