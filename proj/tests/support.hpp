#pragma once

#include <cstdio>
#include <fstream>
#include <string>

// Small helpers shared by the test binaries. Files land in the ctest
// working directory and are overwritten run to run.

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}
