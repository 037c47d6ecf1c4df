// Single-threaded reference versions of the OpenMP kernels. They follow the
// definitions directly (one frame, one sample, one segment at a time) and
// must produce bit-identical results to the parallel versions.
#pragma once

#include "fpwm/channel.hpp"
#include "fpwm/codec.hpp"
#include "fpwm/spectrum.hpp"

namespace fpwm::serial {

EncodedStream encode_stream(const Codec& codec, std::span<const std::uint8_t> bits,
                            PolarityState initial = {});

BitVector decode_stream(const Codec& codec, std::span<const Symbol> symbols, std::size_t bit_count);

Waveform apply_filter(const Waveform& wave, std::span<const double> taps);

PsdEstimate estimate_psd(const Waveform& wave, std::size_t segment_length = kDefaultSegmentLength,
                         WindowKind window = WindowKind::Hann);

}  // namespace fpwm::serial
