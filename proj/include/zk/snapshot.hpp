#pragma once

#include <string>

#include "zk/grid.hpp"

namespace zk {

/// "ZK2D" header (32 bytes) followed by nx*ny little-endian doubles, y fastest.
void write_snapshot(const std::string& path, const RealField2D& f);
RealField2D read_snapshot(const std::string& path);

}  // namespace zk
