#include "zk/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace zk {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes little-endian host");

namespace {
constexpr char kMagic[4] = {'Z', 'K', '2', 'D'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_snapshot(const std::string& path, const RealField2D& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  const auto& g = f.grid();
  char header[32];
  const std::uint32_t nx = g.nx(), ny = g.ny();
  const double lx = g.box_length_x(), ly = g.box_length_y();
  std::memcpy(header, kMagic, 4);
  std::memcpy(header + 4, &kVersion, 4);
  std::memcpy(header + 8, &nx, 4);
  std::memcpy(header + 12, &ny, 4);
  std::memcpy(header + 16, &lx, 8);
  std::memcpy(header + 24, &ly, 8);
  out.write(header, 32);
  out.write(reinterpret_cast<const char*>(f.values().data()),
            std::streamsize(sizeof(double)) * nx * ny);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

RealField2D read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  char header[32];
  in.read(header, 32);
  if (!in || std::memcmp(header, kMagic, 4) != 0)
    throw Error(ErrorKind::Io, "bad snapshot header in " + path);
  std::uint32_t version, nx, ny;
  double lx, ly;
  std::memcpy(&version, header + 4, 4);
  std::memcpy(&nx, header + 8, 4);
  std::memcpy(&ny, header + 12, 4);
  std::memcpy(&lx, header + 16, 8);
  std::memcpy(&ly, header + 24, 8);
  if (version != kVersion) throw Error(ErrorKind::Io, "unsupported snapshot version");
  auto grid = make_grid(int(nx), int(ny), lx, ly);
  RealArray v(nx, ny);
  in.read(reinterpret_cast<char*>(v.data()), std::streamsize(sizeof(double)) * nx * ny);
  if (!in) throw Error(ErrorKind::Io, "truncated snapshot " + path);
  return RealField2D(grid, std::move(v));
}

}  // namespace zk
