#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace argexp {

/// 64-bit FNV-1a. Used to stamp artifacts with content and config hashes;
/// not cryptographic.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a(std::string_view bytes) noexcept { return Fnv1a{}.update(bytes).digest(); }

/// 16 lowercase hex digits.
std::string hex_digest(std::uint64_t value);

}  // namespace argexp
