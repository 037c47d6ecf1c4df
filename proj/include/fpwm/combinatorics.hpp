// Counting theory for FPWM codewords: suffix-count vectors, frame totals,
// bitrate, the per-stage LUT cost model, and symbol occurrence statistics.
#pragma once

#include "fpwm/types.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fpwm {

/// allowed(p -> q): after S_0 or S_K anything may follow, otherwise only
/// S_0..S_p. Keeps every pulse at least 1 UI wide.
constexpr bool transition_allowed(int k, int p, int q) noexcept {
  return p == 0 || p == k || q <= p;
}

/// Frames must end in S_0 or S_K so that frames are independent.
constexpr bool terminal_allowed(int k, int q) noexcept { return q == 0 || q == k; }

/// counts[q] is the number of valid length-r suffixes that start with S_q
/// and end in S_0 or S_K. Indexed ascending by q.
struct CountVector {
  int r = 0;
  std::vector<BigInt> counts;

  BigInt total() const;
};

/// V_r from V_1 = [1, 0, ..., 0, 1] by r - 1 applications of the recurrence.
/// Throws std::invalid_argument when r < 1 or r > params.m().
CountVector count_vector(const FpwmParams& params, int r);

/// V_1 .. V_m in one pass; element i holds V_{i+1}.
std::vector<CountVector> count_vectors(const FpwmParams& params);

/// N: number of valid m-symbol frames.
BigInt total_arrays(const FpwmParams& params);

/// floor(log2 N), exact.
int bits_per_frame(const FpwmParams& params);

/// Exact rational bits/UI, kept as numerator / denominator in lowest terms.
struct Bitrate {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Bitrate&, const Bitrate&) = default;
};

Bitrate normalized_bitrate(const FpwmParams& params);

/// Hardware LUT estimate: (K+1) entries x (n+K) output bits per stage, m stages.
std::int64_t lut_size_model(const FpwmParams& params);

/// Size of the monolithic 8-bit -> 6-UI table of the earlier FPWM coder
/// (2^8 inputs x 24 output bits).
inline constexpr std::int64_t kPriorArtLutSize = 6144;
inline constexpr int kPriorArtOutputBits = 24;

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Calls visit for every valid frame in ascending rank order (lexicographic,
/// MSD first, S_0 lowest). Depth-first over the adjacency rule only, with the
/// frame-end rule applied at the leaves; does not consult count vectors.
/// Throws CapExceeded once more than cap frames have been produced.
void for_each_valid_frame(const FpwmParams& params,
                          const std::function<void(std::span<const Symbol>)>& visit,
                          std::uint64_t cap = kDefaultEnumerationCap);

std::vector<SymbolFrame> enumerate_valid_frames(const FpwmParams& params,
                                                std::uint64_t cap = kDefaultEnumerationCap);

struct SchemeStats {
  BigInt total_arrays;
  int bits_per_frame = 0;
  Bitrate bitrate;
  std::int64_t lut_size_bits = 0;
  /// occurrences[q]: how often S_q appears across all positions of all N frames.
  std::vector<BigInt> symbol_occurrences;

  BigInt total_slots() const;  // m x N
};

/// Occurrence counts by a forward/backward pass: prefixes ending in S_q under
/// the adjacency rule, times valid suffixes starting with S_q.
SchemeStats symbol_occurrence_stats(const FpwmParams& params);

/// Same occurrence counts by walking every frame. Refuses above cap.
std::vector<BigInt> brute_force_occurrences(const FpwmParams& params,
                                            std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace fpwm
