// Averaged modified periodogram (Welch) PSD estimate.
#pragma once

#include "fpwm/channel.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fpwm {

enum class WindowKind { Hann, Rectangular };

std::string window_name(WindowKind kind);
std::vector<double> make_window(WindowKind kind, std::size_t length);

struct PsdEstimate {
  std::vector<double> frequency;  // F units, 0 .. S/2
  std::vector<double> density;    // one-sided, power per F
  std::vector<double> density_db;
  std::size_t segment_length = 0;
  std::size_t segments = 0;
  WindowKind window = WindowKind::Hann;

  double bin_width() const noexcept {
    return frequency.size() > 1 ? frequency[1] - frequency[0] : 0.0;
  }
  /// Sum of density x bin width; approximates the mean-square of the signal.
  double integrated_power() const;
  /// Mean of density_db over bins with lo <= f <= hi.
  double band_mean_db(double lo, double hi) const;
};

inline constexpr std::size_t kDefaultSegmentLength = 4096;

/// One-sided Welch estimate with 50% overlapping segments. No detrending.
/// Throws std::invalid_argument when the waveform is shorter than a segment.
PsdEstimate estimate_psd(const Waveform& wave, std::size_t segment_length = kDefaultSegmentLength,
                         WindowKind window = WindowKind::Hann);

/// CSV with columns frequency_F and one dB column per estimate.
void write_psd_csv(std::ostream& out, const PsdEstimate& fpwm, const PsdEstimate* nrz = nullptr);

}  // namespace fpwm
