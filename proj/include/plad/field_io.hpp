#pragma once

#include <string>

#include "plad/field.hpp"

namespace plad {

// Flat little-endian snapshot format:
//   bytes 0-3   magic "PLAD"
//   bytes 4-7   format version (uint32, currently 1)
//   3 doubles   d, n, half_width
//   n^d doubles row-major cell values
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const DensityField& field);
DensityField read_snapshot(const std::string& path);

// CSV export (header + one row per cell: indices, coordinates, value) with a
// trailing "# config_hash=..." stamp.
void write_field_csv(const std::string& path, const DensityField& field, const std::string& config_hash);

}  // namespace plad
