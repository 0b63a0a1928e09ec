#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace fig {

using Sha256 = std::array<std::uint8_t, 32>;

class Sha256Stream {
 public:
  Sha256Stream();
  ~Sha256Stream();
  Sha256Stream(const Sha256Stream&) = delete;
  Sha256Stream& operator=(const Sha256Stream&) = delete;

  void update(const void* data, std::size_t len);
  void update(const std::string& s) { update(s.data(), s.size()); }
  Sha256 finish();

 private:
  void* ctx_;
};

Sha256 sha256(const void* data, std::size_t len);
Sha256 sha256(const std::string& s);
std::string hex(const Sha256& digest);

}  // namespace fig
