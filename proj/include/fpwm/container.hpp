// Encoded-stream container.
//
//   offset  size  field
//   0       4     magic "FPWM"
//   4       1     version (0x01)
//   5       1     K
//   6       2     m, little-endian
//   8       8     payload bit count, little-endian
//   16      ...   one byte per symbol (0..K), frame aligned
#pragma once

#include "fpwm/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace fpwm {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint8_t kContainerVersion = 0x01;
inline constexpr std::size_t kContainerHeaderSize = 16;

struct EncodedContainer {
  FpwmParams params{1, 1};
  std::uint64_t payload_bits = 0;
  std::vector<Symbol> symbols;
};

void write_container(std::ostream& out, const EncodedContainer& c);
/// Throws FormatError on bad magic, unknown version, invalid K/m, truncation
/// or a symbol count that is not a multiple of m.
EncodedContainer read_container(std::istream& in);

/// MSB-first expansion of bytes into bits.
BitVector bits_from_bytes(std::span<const std::uint8_t> bytes);
/// Packs bits MSB-first; a trailing partial byte is zero-filled.
std::vector<std::uint8_t> bytes_from_bits(std::span<const std::uint8_t> bits);

}  // namespace fpwm
