#include "lpnse/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "lpnse/errors.hpp"
#include "lpnse/spectral.hpp"

namespace lpnse::io {
namespace {

constexpr std::size_t kMagicSize = 6;

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint64_t get_u64(const std::string& in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw IoError("snapshot truncated");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  pos += 8;
  return v;
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(const std::string& in, std::size_t& pos) { return std::bit_cast<double>(get_u64(in, pos)); }

}  // namespace

std::string encode_snapshot(std::span<const PhysicalField> components) {
  if (components.empty()) throw IoError("snapshot needs at least one component");
  const Grid& grid = components.front().grid();
  for (const auto& c : components) require_same_grid(grid, c.grid(), "encode_snapshot");
  std::string out(kSnapshotMagic, kMagicSize);
  out.reserve(kMagicSize + 24 + 8 * grid.size() * components.size());
  put_u64(out, grid.n());
  put_f64(out, grid.box_length());
  put_u64(out, components.size());
  for (const auto& c : components)
    for (double v : c.values()) put_f64(out, v);
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kSnapshotMagic) != 0)
    throw IoError("not a snapshot file (bad magic)");
  std::size_t pos = kMagicSize;
  const std::uint64_t n = get_u64(bytes, pos);
  const double box_length = get_f64(bytes, pos);
  const std::uint64_t count = get_u64(bytes, pos);
  if (n > 4096 || count == 0 || count > 64) throw IoError("snapshot header out of range");
  Grid grid(static_cast<std::size_t>(n), box_length);
  if (bytes.size() != pos + 8 * grid.size() * count)
    throw IoError("snapshot size does not match its header");
  Snapshot snap{grid, {}};
  snap.components.reserve(count);
  for (std::uint64_t c = 0; c < count; ++c) {
    std::vector<double> values(grid.size());
    for (auto& v : values) v = get_f64(bytes, pos);
    snap.components.emplace_back(grid, std::move(values));
  }
  return snap;
}

void write_snapshot(const std::filesystem::path& path, std::span<const PhysicalField> components) {
  const std::string bytes = encode_snapshot(components);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const SpectralVectorField& u) {
  const PhysicalVectorField physical = inverse_transform(u);
  write_snapshot(path, std::span<const PhysicalField>(physical));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

SpectralVectorField to_vector_field(const Snapshot& snapshot) {
  if (snapshot.components.size() != 3)
    throw IoError("expected a 3-component velocity snapshot, found " + std::to_string(snapshot.components.size()));
  return SpectralVectorField(transform(snapshot.components[0]), transform(snapshot.components[1]),
                             transform(snapshot.components[2]));
}

}  // namespace lpnse::io
