#include "fpwm/container.hpp"
#include "fpwm/experiments.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

TEST_CASE("container header layout is bit exact") {
  fpwm::EncodedContainer c{fpwm::FpwmParams(4, 8), 14, {0, 0, 0, 0, 0, 0, 0, 4}};
  std::ostringstream os;
  fpwm::write_container(os, c);
  const std::string bytes = os.str();
  REQUIRE(bytes.size() == fpwm::kContainerHeaderSize + 8);
  const std::string expected_header("FPWM\x01\x04\x08\x00\x0e\x00\x00\x00\x00\x00\x00\x00", 16);
  CHECK(bytes.substr(0, 16) == expected_header);
  CHECK(bytes.back() == '\x04');

  std::istringstream is(bytes);
  const auto back = fpwm::read_container(is);
  CHECK(back.params == c.params);
  CHECK(back.payload_bits == 14);
  CHECK(back.symbols == c.symbols);
}

TEST_CASE("container rejects corrupt input") {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return fpwm::read_container(is);
  };
  CHECK_THROWS_AS(parse("FPWX\x01\x04\x08\x00" + std::string(8, '\0')), fpwm::FormatError);
  CHECK_THROWS_AS(parse(std::string("FPWM\x02\x04\x08\x00", 8) + std::string(8, '\0')), fpwm::FormatError);
  CHECK_THROWS_AS(parse(std::string("FPWM\x01\x04\x08", 7)), fpwm::FormatError);
  CHECK_THROWS_AS(parse(std::string("FPWM\x01\x04\x08\x00", 8) + std::string(8, '\0') + std::string(3, '\0')),
                  fpwm::FormatError);
  CHECK_THROWS_AS(parse(std::string("FPWM\x01\x00\x08\x00", 8) + std::string(8, '\0')), fpwm::FormatError);
}

TEST_CASE("bit/byte helpers") {
  const std::vector<std::uint8_t> bytes{0xA5, 0x01};
  const auto bits = fpwm::bits_from_bytes(bytes);
  CHECK(bits == fpwm::BitVector{1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(fpwm::bytes_from_bits(bits) == bytes);
  CHECK(fpwm::bytes_from_bits(fpwm::BitVector{1, 1}) == std::vector<std::uint8_t>{0xC0});
}

TEST_CASE("file coding round trip") {
  SUBCASE("empty input") {
    const auto c = fpwm::encode_bytes({}, fpwm::FpwmParams(4, 8));
    CHECK(c.payload_bits == 0);
    CHECK(c.symbols.empty());
    CHECK(fpwm::decode_container(c).empty());
  }
  SUBCASE("1 MiB seeded random") {
    std::vector<std::uint8_t> data(1 << 20);
    std::mt19937_64 rng(99);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    const auto c = fpwm::encode_bytes(data, fpwm::FpwmParams(4, 8));
    std::stringstream ss;
    fpwm::write_container(ss, c);
    CHECK(fpwm::decode_container(fpwm::read_container(ss)) == data);
  }
  SUBCASE("hand-built container with the rank-7 frame") {
    const std::string raw = std::string("FPWM\x01\x04\x08\x00\x0e", 9) + std::string(7, '\0') +
                            std::string("\x00\x00\x00\x00\x00\x01\x00\x00", 8);
    std::istringstream is(raw);
    const auto c = fpwm::read_container(is);
    const fpwm::Codec codec(c.params);
    const auto bits = fpwm::decode_stream(codec, c.symbols, c.payload_bits);
    CHECK(fpwm::chunk_value(bits, 0, 14) == 7);
  }
  SUBCASE("invalid frame reports its index") {
    auto c = fpwm::encode_bytes(std::vector<std::uint8_t>(10, 0), fpwm::FpwmParams(4, 8));
    c.symbols[8 * 2 + 7] = 2;
    try {
      fpwm::decode_container(c);
      FAIL("expected FrameError");
    } catch (const fpwm::FrameError& e) {
      CHECK(e.frame_index() == 2);
    }
  }
}
