#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lpnse/fields.hpp"

namespace lpnse::io {

/// Field snapshot file:
///   "LPNSE1"                 6 bytes magic
///   n                        uint64 little-endian
///   box_length               IEEE-754 binary64 little-endian
///   component count          uint64 little-endian
///   values                   binary64 little-endian, component by component,
///                            each component row-major with x1 slowest
struct Snapshot {
  Grid grid;
  std::vector<PhysicalField> components;
};

inline constexpr char kSnapshotMagic[] = "LPNSE1";

std::string encode_snapshot(std::span<const PhysicalField> components);
Snapshot decode_snapshot(const std::string& bytes);

void write_snapshot(const std::filesystem::path& path, std::span<const PhysicalField> components);
void write_snapshot(const std::filesystem::path& path, const SpectralVectorField& u);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Transform a three-component snapshot back to a velocity field.
SpectralVectorField to_vector_field(const Snapshot& snapshot);

}  // namespace lpnse::io
