// SPDX-License-Identifier: Apache-2.0
//
// Binary snapshot format (little-endian):
//   "WNLS" | u32 version=1 | u32 d | u32 n | f64 L | f64 t |
//   f64 alpha | f64 beta | f64 lambda | f64 mu |
//   n^d (re, im) f64 pairs of u, row-major | same for v
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wnls/grid.hpp"
#include "wnls/model.hpp"

namespace wnls {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderBytes = 4 + 3 * 4 + 6 * 8;

struct Checkpoint {
  SystemParams params;
  FieldPair state;
};

std::vector<std::uint8_t> encode_checkpoint(const SystemParams& p, const FieldPair& s);
/// Throws FormatError (with byte offset) or UnsupportedVersion.
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

/// Throw IoError when the file cannot be written/read.
void save_checkpoint(const std::string& path, const SystemParams& p, const FieldPair& s);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace wnls
