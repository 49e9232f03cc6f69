#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace essaylens {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Hex SHA-256 of a file's contents. Throws InputError if unreadable.
std::string sha256_file(const std::string& path);

/// Incremental hasher for digesting a corpus without concatenating it.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view bytes);
  std::string hex();

 private:
  void* ctx_;
};

}  // namespace essaylens
