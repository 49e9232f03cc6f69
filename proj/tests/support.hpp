#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

/// "w0 w1 ... " with n words, one sentence per 10 words.
inline std::string filler(std::size_t n, const std::string& stem = "word") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += stem + std::to_string(i % 97);
    s += (i % 10 == 9) ? ". " : " ";
  }
  return s;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("essaylens-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline void write(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testsupport
