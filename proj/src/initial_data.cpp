// SPDX-License-Identifier: Apache-2.0
#include "wnls/initial_data.hpp"

#include <cmath>
#include <random>

#include "wnls/checkpoint.hpp"
#include "wnls/error.hpp"
#include "wnls/spectral.hpp"

namespace wnls {

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Zero: return "zero";
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::Ring: return "ring";
    case InitialKind::File: return "file";
  }
  return "?";
}

Field gaussian(const GridPtr& grid, double amplitude, double width, std::array<double, 3> center) {
  InitialSpec spec;
  spec.amplitude = amplitude;
  spec.width = width;
  spec.center = center;
  return make_initial(spec, grid, 0, 0);
}

Field make_initial(const InitialSpec& spec, const GridPtr& grid, std::uint64_t seed, int component) {
  Field f(grid);
  if (spec.kind == InitialKind::Zero) return f;
  if (spec.kind == InitialKind::File) {
    Checkpoint c = load_checkpoint(spec.path);
    if (!c.state.grid().same_as(*grid)) throw InvalidArgument("checkpoint grid does not match the configured grid");
    Field src = component == 0 ? c.state.u : c.state.v;
    src.grid = grid;
    return src;
  }
  if (!(spec.width > 0.0)) throw InvalidArgument("initial width must be positive");
  const int d = grid->dim();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double r2 = 0.0, phase = 0.0;
    for (int a = 0; a < d; ++a) {
      const double x = grid->x_axis(a)[i];
      const double y = x - spec.center[a];
      r2 += y * y;
      phase += spec.velocity[a] * x;
    }
    phase -= spec.chirp * r2;
    double env;
    if (spec.kind == InitialKind::Gaussian) {
      env = std::exp(-r2 / (spec.width * spec.width));
    } else {
      const double s = std::sqrt(r2) - spec.radius;
      env = std::exp(-s * s / (spec.width * spec.width));
    }
    f.data[i] = spec.amplitude * env * cplx(std::cos(phase), std::sin(phase));
  }
  if (spec.noise > 0.0) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(component));
    std::normal_distribution<double> normal(0.0, 1.0);
    Field pert(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double re = normal(rng), im = normal(rng);
      pert.data[i] = spec.noise * std::abs(f.data[i]) * cplx(re, im);
    }
    pert = lp_project(pert, grid->k_max() / 4.0, LpSide::Low, LpShape::Sharp);
    for (std::size_t i = 0; i < f.size(); ++i) f.data[i] += pert.data[i];
  }
  return f;
}

}  // namespace wnls
