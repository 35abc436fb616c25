#pragma once

#include <filesystem>

#include "scn/net.hpp"

namespace scn {

// SCN1 model file, little-endian:
//   magic "SCN1"; version u32;
//   layer count u32, then per layer: kind u8, out_maps u32, kh u32, kw u32,
//   stride u32;
//   norm stats: 6 (mean, stddev) pairs as 64-bit floats;
//   then per layer: weights then biases as 32-bit floats in index order
//   (first layer k-major then channel, slice, kernel rows; later layers
//   q-major then p, kernel rows).
// Input geometry is not stored: serialized models always take the standard
// six-channel, 20-slice, 18x18 cube.

// Exact file size implied by a config; handy for integrity checks.
int64_t scn1_file_size(const ScnConfig& config);

void save_model(const ScnModel& model, const std::filesystem::path& path);

// Loads a model; training hyperparameters in the returned config are
// defaults (the file stores architecture, stats and weights only).
ScnModel load_model(const std::filesystem::path& path);

}  // namespace scn
