// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "wnls/grid.hpp"

namespace wnls {

enum class InitialKind { Zero, Gaussian, Ring, File };

std::string_view to_string(InitialKind k);

/// Profile A * env(x - c) * e^{i velocity.x} * e^{-i chirp |x-c|^2} where env is
/// exp(-|y|^2/width^2) (gaussian) or exp(-(|y|-radius)^2/width^2) (ring).
/// `noise` > 0 adds a seeded complex perturbation shaped by the envelope and
/// low-pass filtered to a quarter of k_max.
struct InitialSpec {
  InitialKind kind = InitialKind::Gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> velocity{0.0, 0.0, 0.0};
  double chirp = 0.0;
  double radius = 0.0;
  /// Checkpoint file for kind = File; component selects u (0) or v (1).
  std::string path;
  double noise = 0.0;
};

Field make_initial(const InitialSpec& spec, const GridPtr& grid, std::uint64_t seed, int component);

/// A e^{-|x-c|^2/width^2}, the common test profile.
Field gaussian(const GridPtr& grid, double amplitude, double width, std::array<double, 3> center = {0, 0, 0});

}  // namespace wnls
