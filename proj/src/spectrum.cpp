#include "fpwm/spectrum.hpp"

#include "spectrum_detail.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fpwm {

std::string window_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::Hann: return "hann";
    case WindowKind::Rectangular: return "rectangular";
  }
  return "unknown";
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::Hann)
    for (std::size_t i = 0; i < length; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(length));
  return w;
}

double PsdEstimate::integrated_power() const {
  double sum = 0;
  for (double d : density) sum += d;
  return sum * bin_width();
}

double PsdEstimate::band_mean_db(double lo, double hi) const {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    if (frequency[i] < lo || frequency[i] > hi) continue;
    sum += density_db[i];
    ++n;
  }
  if (n == 0) throw std::invalid_argument("PSD band holds no frequency bins");
  return sum / static_cast<double>(n);
}

namespace detail {

WelchPlan::WelchPlan(const Waveform& wave, std::size_t segment_length, WindowKind kind)
    : length(segment_length), window(make_window(kind, segment_length)) {
  if (segment_length < 2) throw std::invalid_argument("PSD segment length must be at least 2");
  if (wave.samples.size() < segment_length)
    throw std::invalid_argument("waveform has " + std::to_string(wave.samples.size()) +
                                " samples, fewer than one PSD segment of " + std::to_string(segment_length));
  step = segment_length / 2;
  segments = (wave.samples.size() - segment_length) / step + 1;
  bins = segment_length / 2 + 1;
  for (double w : window) window_power += w * w;

  auto* in = fftw_alloc_real(length);
  auto* out = fftw_alloc_complex(bins);
  plan = fftw_plan_dft_r2c_1d(static_cast<int>(length), in, out, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!plan) throw std::runtime_error("FFT plan creation failed");
}

WelchPlan::~WelchPlan() {
  if (plan) fftw_destroy_plan(plan);
}

void WelchPlan::periodogram(const double* segment, double* scratch_in, fftw_complex* scratch_out,
                            double* power) const {
  for (std::size_t i = 0; i < length; ++i) scratch_in[i] = segment[i] * window[i];
  fftw_execute_dft_r2c(plan, scratch_in, scratch_out);
  for (std::size_t k = 0; k < bins; ++k) power[k] = scratch_out[k][0] * scratch_out[k][0] + scratch_out[k][1] * scratch_out[k][1];
}

PsdEstimate WelchPlan::finish(const std::vector<double>& summed, double samples_per_ui, WindowKind kind) const {
  PsdEstimate psd;
  psd.segment_length = length;
  psd.segments = segments;
  psd.window = kind;
  psd.frequency.resize(bins);
  psd.density.resize(bins);
  psd.density_db.resize(bins);
  const double fs = samples_per_ui;
  const double scale = 1.0 / (fs * window_power * static_cast<double>(segments));
  for (std::size_t k = 0; k < bins; ++k) {
    const bool edge = k == 0 || (length % 2 == 0 && k == bins - 1);
    psd.frequency[k] = static_cast<double>(k) * fs / static_cast<double>(length);
    psd.density[k] = summed[k] * scale * (edge ? 1.0 : 2.0);
    psd.density_db[k] = 10.0 * std::log10(std::max(psd.density[k], 1e-300));
  }
  return psd;
}

}  // namespace detail

PsdEstimate estimate_psd(const Waveform& wave, std::size_t segment_length, WindowKind window) {
  const detail::WelchPlan plan(wave, segment_length, window);
  const auto segs = static_cast<std::ptrdiff_t>(plan.segments);
  std::vector<double> per_segment(plan.segments * plan.bins);

#pragma omp parallel
  {
    double* in = fftw_alloc_real(plan.length);
    fftw_complex* out = fftw_alloc_complex(plan.bins);
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < segs; ++s) {
      const auto si = static_cast<std::size_t>(s);
      plan.periodogram(wave.samples.data() + si * plan.step, in, out, per_segment.data() + si * plan.bins);
    }
    fftw_free(in);
    fftw_free(out);
  }

  // Per-bin sums in segment order match the serial accumulation bit for bit.
  std::vector<double> summed(plan.bins, 0.0);
  const auto nbins = static_cast<std::ptrdiff_t>(plan.bins);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < nbins; ++k) {
    double acc = 0;
    for (std::size_t s = 0; s < plan.segments; ++s) acc += per_segment[s * plan.bins + static_cast<std::size_t>(k)];
    summed[static_cast<std::size_t>(k)] = acc;
  }
  return plan.finish(summed, wave.samples_per_ui, window);
}

void write_psd_csv(std::ostream& out, const PsdEstimate& fpwm, const PsdEstimate* nrz) {
  out << "frequency_F,fpwm_dB" << (nrz ? ",nrz_dB" : "") << '\n';
  for (std::size_t k = 0; k < fpwm.frequency.size(); ++k) {
    out << fpwm.frequency[k] << ',' << fpwm.density_db[k];
    if (nrz && k < nrz->density_db.size()) out << ',' << nrz->density_db[k];
    out << '\n';
  }
}

}  // namespace fpwm
