// Shared value types for framed pulse-width modulation (FPWM).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpwm {

/// Exact nonnegative counts; codeword counts grow like (K+1)^m.
using BigInt = boost::multiprecision::cpp_int;

/// Symbol index q in 0..K. S_0 carries no transition, S_q (q >= 1) one
/// transition at (K - q) / K UI into the UI.
using Symbol = std::uint8_t;

using SymbolFrame = std::vector<Symbol>;

/// Payload bits, one 0/1 value per element, first element is the MSB of the
/// first chunk.
using BitVector = std::vector<std::uint8_t>;

/// Pulse-width resolution K and frame length m.
class FpwmParams {
 public:
  static constexpr int kMaxK = 255;     // one byte per symbol in containers
  static constexpr int kMaxM = 65535;   // two-byte frame length field

  FpwmParams(int k, int m) : k_(k), m_(m) {
    if (k < 1 || k > kMaxK)
      throw std::invalid_argument("pulse-width resolution K must be in 1.." +
                                  std::to_string(kMaxK) + ", got " + std::to_string(k));
    if (m < 1 || m > kMaxM)
      throw std::invalid_argument("frame length m must be in 1.." + std::to_string(kMaxM) +
                                  ", got " + std::to_string(m));
  }

  int k() const noexcept { return k_; }
  int m() const noexcept { return m_; }
  int alphabet_size() const noexcept { return k_ + 1; }

  friend bool operator==(const FpwmParams&, const FpwmParams&) = default;

 private:
  int k_;
  int m_;
};

/// Line level entering or leaving a UI.
enum class Level : std::uint8_t { Low = 0, High = 1 };

constexpr Level toggled(Level l) noexcept { return l == Level::Low ? Level::High : Level::Low; }

struct PolarityState {
  Level level = Level::Low;
  friend bool operator==(const PolarityState&, const PolarityState&) = default;
};

/// A decoded frame was not a legal codeword, or was a codeword outside the
/// payload range.
class FrameError : public std::runtime_error {
 public:
  FrameError(const std::string& what, std::size_t frame, std::ptrdiff_t digit)
      : std::runtime_error(what), frame_(frame), digit_(digit) {}

  std::size_t frame_index() const noexcept { return frame_; }
  /// -1 when the error concerns the whole frame rather than one digit.
  std::ptrdiff_t digit_index() const noexcept { return digit_; }

 private:
  std::size_t frame_;
  std::ptrdiff_t digit_;
};

/// A request would exceed a configured work cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace fpwm
