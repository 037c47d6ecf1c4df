// Welch machinery shared by the parallel and serial PSD kernels.
#pragma once

#include "fpwm/spectrum.hpp"

#include <fftw3.h>

namespace fpwm::detail {

struct WelchPlan {
  WelchPlan(const Waveform& wave, std::size_t segment_length, WindowKind kind);
  ~WelchPlan();
  WelchPlan(const WelchPlan&) = delete;
  WelchPlan& operator=(const WelchPlan&) = delete;

  /// |DFT(window * segment)|^2 for bins 0..length/2. Thread-safe given
  /// per-thread scratch buffers from fftw_alloc_*.
  void periodogram(const double* segment, double* scratch_in, fftw_complex* scratch_out, double* power) const;

  PsdEstimate finish(const std::vector<double>& summed, double samples_per_ui, WindowKind kind) const;

  std::size_t length;
  std::size_t step = 0;
  std::size_t segments = 0;
  std::size_t bins = 0;
  std::vector<double> window;
  double window_power = 0;
  fftw_plan plan = nullptr;
};

}  // namespace fpwm::detail
