// Pipelined enumerative FPWM coder.
//
// Each digit stage owns the cumulative thresholds of the suffix-count vector
// for its remaining length. Encoding quantizes the residual against those
// thresholds and passes residual - threshold on; decoding adds the thresholds
// of the received symbols. A stage never looks at its neighbours: the residual
// bound alone keeps the adjacency and frame-end rules satisfied.
#pragma once

#include "fpwm/combinatorics.hpp"
#include "fpwm/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fpwm {

/// Cumulative thresholds for one digit. length counts the current digit, so
/// the MSD stage has length m and the LSD stage length 1.
struct StageTable {
  int length = 0;
  /// K+2 entries: cum[q] = sum_{h<q} v_{length,h}; cum[K+1] is the stage total.
  std::vector<BigInt> cum;
};

struct FrameVerdict {
  enum class Kind { Valid, WrongLength, SymbolOutOfRange, ForbiddenTransition, BadTerminal };

  Kind kind = Kind::Valid;
  /// Index of the first offending digit, -1 when valid or for a length error.
  std::ptrdiff_t position = -1;

  bool ok() const noexcept { return kind == Kind::Valid; }
  std::string describe() const;
};

FrameVerdict validate_frame(const FpwmParams& params, std::span<const Symbol> frame);

class Codec {
 public:
  explicit Codec(const FpwmParams& params);

  const FpwmParams& params() const noexcept { return params_; }
  int bits_per_frame() const noexcept { return bits_; }
  const BigInt& total_arrays() const noexcept { return stages_.front().cum.back(); }
  /// 2^n, one past the largest rank reachable from payload bits.
  const BigInt& payload_limit() const noexcept { return payload_limit_; }
  /// MSD first.
  const std::vector<StageTable>& stages() const noexcept { return stages_; }

  /// Unranks x in [0, N). Throws std::out_of_range otherwise.
  SymbolFrame encode_frame(const BigInt& x) const;
  void encode_frame_into(const BigInt& x, std::span<Symbol> out) const;

  /// Ranks a frame. Throws FrameError (frame index 0) for an illegal frame.
  BigInt decode_frame(std::span<const Symbol> frame) const;

 private:
  void unrank(BigInt residual, std::span<Symbol> out) const;

  FpwmParams params_;
  int bits_;
  BigInt payload_limit_;
  std::vector<StageTable> stages_;
};

inline Codec build_codec(const FpwmParams& params) { return Codec(params); }

struct EncodedStream {
  std::vector<Symbol> symbols;
  /// Line level entering each UI.
  std::vector<Level> levels;
  PolarityState final_state;
  std::size_t frames = 0;
};

/// Splits bits into n-bit big-endian chunks (last one zero-padded on the LSB
/// side), encodes each, and chains the line polarity across symbols and frames.
EncodedStream encode_stream(const Codec& codec, std::span<const std::uint8_t> bits,
                            PolarityState initial = {});

/// Inverse of encode_stream, truncated to bit_count. Throws FrameError for an
/// illegal frame or a rank >= 2^n; std::invalid_argument when the symbol count
/// is not frame aligned or bit_count exceeds the decoded payload.
BitVector decode_stream(const Codec& codec, std::span<const Symbol> symbols,
                        std::size_t bit_count);

std::size_t frames_for_bits(const Codec& codec, std::size_t bit_count) noexcept;

/// Big-endian value of bits[offset, offset + n), zero beyond the end of bits.
BigInt chunk_value(std::span<const std::uint8_t> bits, std::size_t offset, int n);

/// Writes the n-bit big-endian form of value into out[0, n).
void write_chunk(const BigInt& value, int n, std::span<std::uint8_t> out);

/// Number of non-S_0 symbols, i.e. line transitions.
std::size_t count_edges(std::span<const Symbol> symbols) noexcept;

}  // namespace fpwm
