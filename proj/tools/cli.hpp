#pragma once

#include <cstdint>
#include <string>

namespace zk::cli {

struct Common {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Runs one verify suite; returns the process exit status.
int run_verify(const std::string& suite, const Common& opts);

bool known_suite(const std::string& suite);

}  // namespace zk::cli
