// Reproducible experiments behind the command-line tool: parameter sweeps,
// symbol statistics, file encode/decode and the end-to-end link simulation.
#pragma once

#include "fpwm/channel.hpp"
#include "fpwm/codec.hpp"
#include "fpwm/combinatorics.hpp"
#include "fpwm/container.hpp"
#include "fpwm/spectrum.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpwm {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

/// "A..B" or a single "A".
IntRange parse_range(std::string_view text);

inline constexpr int kTableMaxK = 16;
inline constexpr int kTableMaxM = 64;

struct TableRow {
  int k = 0;
  int m = 0;
  BigInt total_arrays;
  int bits_per_frame = 0;
  Bitrate bitrate;
  std::int64_t lut_size_bits = 0;
};

/// Throws CapExceeded when a range leaves [1, max_k] x [1, max_m].
std::vector<TableRow> sweep_tables(IntRange k, IntRange m, int max_k = kTableMaxK, int max_m = kTableMaxM);
void write_tables_csv(std::ostream& out, const std::vector<TableRow>& rows);

struct StatsReport {
  FpwmParams params{1, 1};
  SchemeStats stats;
  /// Present when the frame count fits under the enumeration cap.
  std::optional<std::vector<BigInt>> brute_force;

  BigInt s0() const { return stats.symbol_occurrences.front(); }
  BigInt edges() const { return stats.total_slots() - s0(); }
  bool brute_force_matches() const { return brute_force && *brute_force == stats.symbol_occurrences; }
};

StatsReport symbol_stats(const FpwmParams& params, std::uint64_t brute_force_cap = kDefaultEnumerationCap);
void write_stats(std::ostream& out, const StatsReport& report);

EncodedContainer encode_bytes(std::span<const std::uint8_t> bytes, const FpwmParams& params);
std::vector<std::uint8_t> decode_container(const EncodedContainer& container);

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kPreferredSamplesPerUi = 16;

/// Smallest multiple of K that is at least kPreferredSamplesPerUi.
int default_samples_per_ui(int k);

struct SimConfig {
  int k = 4;
  int m = 8;
  std::size_t frames = 20000;
  /// wave.samples_per_ui == 0 selects default_samples_per_ui(k).
  WaveformConfig wave;
  double sigma = 0;
  std::uint64_t seed = 42;
  bool zero_bits = false;
  std::size_t psd_segment = kDefaultSegmentLength;
};

struct SimReport {
  int k = 0;
  int m = 0;
  int samples_per_ui = 0;
  double cutoff = 0;
  int taps = 0;
  double sigma = 0;
  std::uint64_t seed = 0;
  std::size_t frames = 0;
  int bits_per_frame = 0;
  std::size_t bits_sent = 0;
  std::size_t bit_errors = 0;
  double ber = 0;
  std::optional<double> min_pulse_width_ui;
  double edge_displacement_max = 0;
  std::size_t displacement_warnings = 0;
  std::size_t glitches_removed = 0;
  std::size_t nrz_bits_sent = 0;
  std::size_t nrz_bit_errors = 0;
  double bit_ratio = 0;  // FPWM payload bits per NRZ bit over the same UI
  double psd_dc_delta_db = 0;
  double psd_mid_delta_db = 0;
  double elapsed_seconds = 0;  // not serialized; reports stay byte-stable
};

/// Everything a run produced, for callers that need more than the report.
struct SimRun {
  SimReport report;
  BitVector bits;
  EncodedStream encoded;
  Waveform ideal;
  Waveform received;
  Waveform nrz_received;
  EdgeList ideal_edges;
  std::vector<double> taps;
  PsdEstimate fpwm_psd;
  PsdEstimate nrz_psd;
};

/// Bands used for the FPWM vs NRZ spectral comparison, F units.
inline constexpr double kDcBandHi = 0.05;
inline constexpr double kMidBandLo = 0.25;
inline constexpr double kMidBandHi = 0.45;

/// Runs bits -> encode -> synthesize -> filter -> noise -> edges -> symbols ->
/// decode, plus the NRZ reference over the same UI count. Stage failures are
/// rethrown as SimulationError prefixed with the stage name.
SimRun run_simulation(const SimConfig& config);

/// Seeded uniform i.i.d. bits.
BitVector random_bits(std::size_t count, std::uint64_t seed);

void write_report(std::ostream& out, const SimReport& report);

}  // namespace fpwm
