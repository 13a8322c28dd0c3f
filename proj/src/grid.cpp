// SPDX-License-Identifier: Apache-2.0
#include "wnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wnls/error.hpp"

namespace wnls {
namespace {

bool is_7_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u})
    while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

std::shared_ptr<const SpectralGrid> SpectralGrid::create(int d, std::size_t n, double L) {
  if (d < 1 || d > 3) throw UnsupportedDimension("grid dimension must be 1, 2 or 3, got " + std::to_string(d));
  if (n < 8 || n % 2 != 0 || !is_7_smooth(n))
    throw InvalidArgument("samples per axis must be even, >= 8 and 7-smooth, got " + std::to_string(n));
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("half-width L must be positive and finite");
  return std::make_shared<const SpectralGrid>(d, n, L);
}

SpectralGrid::SpectralGrid(int d, std::size_t n, double L)
    : d_(d), n_(n), L_(L), dx_(2.0 * L / static_cast<double>(n)), size_(1) {
  for (int a = 0; a < d; ++a) size_ *= n;
  cell_volume_ = std::pow(dx_, d);

  k1_.resize(n);
  x1_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    k1_[j] = std::numbers::pi * static_cast<double>(mode_index(j)) / L;
    x1_[j] = -L + static_cast<double>(j) * dx_;
  }

  k_axis_.assign(static_cast<std::size_t>(d), RealBuffer(size_));
  d_axis_.assign(static_cast<std::size_t>(d), RealBuffer(size_));
  x_axis_.assign(static_cast<std::size_t>(d), RealBuffer(size_));
  k2_.assign(size_, 0.0);
  x2_.assign(size_, 0.0);
  tail_mask_.assign(size_, 0.0);
  boundary_mask_.assign(size_, 0.0);

  const double k_cut = 2.0 / 3.0 * k_max();
  const double x_cut = L * (1.0 - 1.0 / 8.0);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto idx = unflatten(i);
    for (int a = 0; a < d; ++a) {
      const double k = k1_[idx[a]];
      const double x = x1_[idx[a]];
      k_axis_[a][i] = k;
      d_axis_[a][i] = idx[a] == n / 2 ? 0.0 : k;
      x_axis_[a][i] = x;
      k2_[i] += k * k;
      x2_[i] += x * x;
      if (std::abs(k) > k_cut) tail_mask_[i] = 1.0;
      if (std::abs(x) >= x_cut) boundary_mask_[i] = 1.0;
    }
  }
  plan_ = &fft_plan(d, n);
}

double SpectralGrid::k_max() const noexcept {
  return std::numbers::pi * static_cast<double>(n_ / 2) / L_;
}

long SpectralGrid::mode_index(std::size_t j) const noexcept {
  return j < n_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_);
}

std::array<std::size_t, 3> SpectralGrid::unflatten(std::size_t flat) const noexcept {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = flat % n_;
    flat /= n_;
  }
  return idx;
}

bool Field::all_finite() const noexcept {
  return std::all_of(data.begin(), data.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

FieldPair::FieldPair(Field u_, Field v_, double t_) : u(std::move(u_)), v(std::move(v_)), t(t_) {
  if (!u.grid || !v.grid || !u.grid->same_as(*v.grid))
    throw InvalidArgument("field pair components must share one grid");
}

}  // namespace wnls
