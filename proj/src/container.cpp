#include "fpwm/container.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <string>

namespace fpwm {

namespace {

constexpr std::array<char, 4> kMagic{'F', 'P', 'W', 'M'};

template <typename T>
void put_le(std::ostream& out, T value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::istream& in, int bytes, const char* field) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof())
      throw FormatError(std::string("container truncated in field ") + field);
    v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_container(std::ostream& out, const EncodedContainer& c) {
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kContainerVersion));
  put_le(out, c.params.k(), 1);
  put_le(out, c.params.m(), 2);
  put_le(out, c.payload_bits, 8);
  out.write(reinterpret_cast<const char*>(c.symbols.data()), static_cast<std::streamsize>(c.symbols.size()));
}

EncodedContainer read_container(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kMagic) throw FormatError("bad container magic (expected FPWM)");
  const auto version = get_le(in, 1, "version");
  if (version != kContainerVersion)
    throw FormatError("unsupported container version " + std::to_string(version));
  const auto k = static_cast<int>(get_le(in, 1, "K"));
  const auto m = static_cast<int>(get_le(in, 2, "m"));
  const auto payload_bits = get_le(in, 8, "payload bit count");
  if (k < 1 || m < 1) throw FormatError("container header has K=" + std::to_string(k) + ", m=" + std::to_string(m));

  EncodedContainer c{FpwmParams(k, m), payload_bits, {}};
  std::array<char, 65536> buf{};
  while (in.read(buf.data(), buf.size()) || in.gcount() > 0)
    c.symbols.insert(c.symbols.end(), buf.begin(), buf.begin() + in.gcount());
  if (c.symbols.size() % static_cast<std::size_t>(m) != 0)
    throw FormatError("symbol section holds " + std::to_string(c.symbols.size()) +
                      " symbols, not a multiple of m=" + std::to_string(m));
  return c;
}

BitVector bits_from_bytes(std::span<const std::uint8_t> bytes) {
  BitVector bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    for (int b = 0; b < 8; ++b) bits[i * 8 + static_cast<std::size_t>(b)] = (bytes[i] >> (7 - b)) & 1u;
  return bits;
}

std::vector<std::uint8_t> bytes_from_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return bytes;
}

}  // namespace fpwm
