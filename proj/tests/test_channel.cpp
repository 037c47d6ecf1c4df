#include "fpwm/channel.hpp"
#include "fpwm/codec.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

using fpwm::FpwmParams;
using fpwm::Level;
using fpwm::Waveform;
using fpwm::WaveformConfig;

namespace {

// Independent DFT of the taps at f (cycles/sample).
double response_db(const std::vector<double>& h, double f) {
  std::complex<double> acc = 0;
  for (std::size_t n = 0; n < h.size(); ++n) acc += h[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(n));
  return 20.0 * std::log10(std::abs(acc));
}

std::vector<fpwm::Symbol> random_stream(const fpwm::Codec& codec, std::size_t frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  fpwm::BitVector bits(frames * static_cast<std::size_t>(codec.bits_per_frame()));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return fpwm::encode_stream(codec, bits).symbols;
}

}  // namespace

TEST_CASE("config validation") {
  WaveformConfig c;
  CHECK_NOTHROW(fpwm::validate_config(c, 4));
  CHECK_THROWS_AS(fpwm::validate_config(c, 3), std::invalid_argument);
  c.samples_per_ui = 4;
  CHECK_THROWS_AS(fpwm::validate_config(c, 4), std::invalid_argument);  // S < 2K
  c = {};
  c.cutoff = 8.0;
  CHECK_THROWS_AS(fpwm::validate_config(c, 4), std::invalid_argument);
  c = {};
  c.filter_taps = 64;
  CHECK_THROWS_AS(fpwm::validate_config(c, 4), std::invalid_argument);
}

TEST_CASE("synthesize") {
  const WaveformConfig c;
  const auto zeros = fpwm::synthesize(std::vector<fpwm::Symbol>(5, 0), Level::Low, 4, c);
  CHECK(zeros.samples == std::vector<double>(80, -1.0));

  const auto s4 = fpwm::synthesize(std::vector<fpwm::Symbol>{4}, Level::Low, 4, c);
  CHECK(s4.samples == std::vector<double>(16, 1.0));

  const auto s2 = fpwm::synthesize(std::vector<fpwm::Symbol>{2}, Level::Low, 4, c);
  for (int i = 0; i < 16; ++i) CHECK(s2.samples[static_cast<std::size_t>(i)] == (i < 8 ? -1.0 : 1.0));

  const auto lead = fpwm::synthesize(std::vector<fpwm::Symbol>{4}, Level::High, 4, c, 2);
  CHECK(lead.start_ui == -2);
  CHECK(lead.samples.size() == 48);
  CHECK(lead.samples.front() == 1.0);
  CHECK(lead.samples.back() == -1.0);

  CHECK_THROWS_AS(fpwm::synthesize(std::vector<fpwm::Symbol>{5}, Level::Low, 4, c), std::invalid_argument);
  WaveformConfig bad;
  bad.samples_per_ui = 18;
  CHECK_THROWS_AS(fpwm::synthesize(std::vector<fpwm::Symbol>{0}, Level::Low, 4, bad), std::invalid_argument);
}

TEST_CASE("design_lowpass") {
  const WaveformConfig c;
  const auto h = fpwm::design_lowpass(c);
  REQUIRE(h.size() % 2 == 1);

  double sum = 0;
  for (double v : h) sum += v;
  CHECK(std::abs(sum - 1.0) < 1e-6);
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(h[i] == h[h.size() - 1 - i]);

  const double fs = c.samples_per_ui;
  CHECK(response_db(h, 0.7 / fs) >= -6.0);
  double worst_stop = -400, worst_pass = 0;
  for (int g = 0; g < 4096; ++g) {
    const double f = 0.5 * g / 4095.0;
    const double db = response_db(h, f);
    if (f * fs >= 1.0) worst_stop = std::max(worst_stop, db);
    if (f * fs <= 0.7) worst_pass = std::max(worst_pass, std::abs(db));
  }
  CHECK(worst_stop <= -40.0);
  CHECK(worst_pass <= 0.5);

  SUBCASE("too few taps suggests a minimum") {
    WaveformConfig shortc;
    shortc.filter_taps = 31;
    try {
      fpwm::design_lowpass(shortc);
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(std::to_string(fpwm::minimum_lowpass_taps(shortc))) != std::string::npos);
    }
  }
  SUBCASE("explicit tap count above the minimum is honoured") {
    WaveformConfig longc;
    longc.filter_taps = static_cast<int>(h.size()) + 20;
    CHECK(fpwm::design_lowpass(longc).size() == h.size() + 20);
  }
}

TEST_CASE("apply_filter") {
  const WaveformConfig c;
  const auto h = fpwm::design_lowpass(c);

  Waveform x;
  x.samples = {0.5, -1.0, 2.0, 3.0, -4.0};
  CHECK(fpwm::apply_filter(x, std::vector<double>{1.0}).samples == x.samples);

  Waveform constant;
  constant.samples.assign(500, 0.75);
  for (double v : fpwm::apply_filter(constant, h).samples) CHECK(v == doctest::Approx(0.75).epsilon(1e-12));

  Waveform impulse;
  impulse.samples.assign(1001, 0.0);
  impulse.samples[500] = 1.0;
  const auto y = fpwm::apply_filter(impulse, h);
  const std::size_t half = (h.size() - 1) / 2;
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(y.samples[500 - half + i] == doctest::Approx(h[i]).epsilon(1e-15));

  SUBCASE("linearity") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    Waveform a, b, mix;
    for (int i = 0; i < 3000; ++i) {
      a.samples.push_back(nd(rng));
      b.samples.push_back(nd(rng));
      mix.samples.push_back(2.5 * a.samples.back() - 0.7 * b.samples.back());
    }
    const auto fa = fpwm::apply_filter(a, h), fb = fpwm::apply_filter(b, h), fm = fpwm::apply_filter(mix, h);
    for (std::size_t i = 0; i < fm.samples.size(); ++i)
      CHECK(std::abs(fm.samples[i] - (2.5 * fa.samples[i] - 0.7 * fb.samples[i])) < 1e-9);
  }

  SUBCASE("0101 NRZ keeps distinguishable levels at UI centres") {
    fpwm::BitVector bits;
    for (int i = 0; i < 200; ++i) bits.push_back(static_cast<std::uint8_t>(i & 1));
    const auto f = fpwm::apply_filter(fpwm::synthesize_nrz(bits, c), h);
    for (std::size_t u = 10; u < 190; ++u) {
      const double v = f.samples[u * 16 + 8];
      CHECK(std::abs(v) > 0.2 * c.swing());
      CHECK((v > 0) == (bits[u] == 1));
    }
  }
}

TEST_CASE("detect_edges") {
  Waveform flat;
  flat.samples.assign(100, -1.0);
  CHECK(fpwm::detect_edges(flat, 0.0).edges.empty());

  Waveform step;
  step.samples.assign(200, -1.0);
  std::fill(step.samples.begin() + 100, step.samples.end(), 1.0);
  const auto e = fpwm::detect_edges(step, 0.0);
  REQUIRE(e.edges.size() == 1);
  CHECK(e.edges[0].time_ui == 6.25);
  CHECK(e.edges[0].direction == fpwm::EdgeDirection::Rising);

  const fpwm::Codec codec(FpwmParams(4, 8));
  const auto frame = codec.encode_frame(1);
  const auto wave = fpwm::synthesize(frame, Level::Low, 4, WaveformConfig{});
  const auto fe = fpwm::detect_edges(wave, 0.0);
  REQUIRE(fe.edges.size() == 1);
  CHECK(fe.edges[0].time_ui == 7.0);

  SUBCASE("ringing glitches shorter than the window are dropped") {
    Waveform g = step;
    g.samples[150] = -0.2;  // dips across the threshold for one sample
    const auto ge = fpwm::detect_edges(g, 0.0);
    CHECK(ge.edges.size() == 1);
    CHECK(ge.glitches_removed == 2);
  }
}

TEST_CASE("edges_to_symbols") {
  const FpwmParams p(4, 8);
  CHECK(fpwm::edges_to_symbols({}, 1, p).symbols == std::vector<fpwm::Symbol>(8, 0));

  fpwm::EdgeList one{{{7.0, fpwm::EdgeDirection::Rising}}, 0};
  const auto r = fpwm::edges_to_symbols(one, 1, p);
  CHECK(r.symbols == std::vector<fpwm::Symbol>{0, 0, 0, 0, 0, 0, 0, 4});
  CHECK(fpwm::Codec(p).decode_frame(r.symbols) == 1);

  fpwm::EdgeList half{{{6.5, fpwm::EdgeDirection::Rising}}, 0};
  CHECK(fpwm::edges_to_symbols(half, 1, p).symbols[6] == 2);

  fpwm::EdgeList crowded{{{6.0, fpwm::EdgeDirection::Rising}, {6.5, fpwm::EdgeDirection::Falling}}, 0};
  try {
    fpwm::edges_to_symbols(crowded, 1, p);
    FAIL("expected ChannelError");
  } catch (const fpwm::ChannelError& err) {
    CHECK(err.ui_index() == 6);
    CHECK(std::string(err.what()).find("pulse-width violation") != std::string::npos);
  }

  fpwm::EdgeList off{{{2.0 + 0.35 / 4, fpwm::EdgeDirection::Rising}}, 0};
  const auto w = fpwm::edges_to_symbols(off, 1, p);
  CHECK(w.displacement_warnings == 1);
  CHECK(w.max_displacement == doctest::Approx(0.35));

  fpwm::EdgeList outside{{{8.1, fpwm::EdgeDirection::Rising}}, 0};
  CHECK_THROWS_AS(fpwm::edges_to_symbols(outside, 1, p), fpwm::ChannelError);
}

TEST_CASE("min_pulse_width") {
  CHECK_FALSE(fpwm::min_pulse_width({}).has_value());
  fpwm::EdgeList two{{{3.0, fpwm::EdgeDirection::Rising}, {4.25, fpwm::EdgeDirection::Falling}}, 0};
  CHECK(*fpwm::min_pulse_width(two) == 1.25);

  // Every allowed pair of edge-bearing symbols is at least 1 UI apart, with
  // equality exactly when the two symbols match.
  for (int k = 1; k <= 8; ++k) {
    for (int p = 1; p <= k; ++p) {
      for (int q = 1; q <= k; ++q) {
        if (!fpwm::transition_allowed(k, p, q)) continue;
        const double tp = static_cast<double>(k - p) / k, tq = static_cast<double>(k - q) / k;
        CHECK(1.0 - tp + tq >= 1.0);
        WaveformConfig c;
        c.samples_per_ui = 2 * k * 8;
        const auto wave = fpwm::synthesize(std::vector<fpwm::Symbol>{static_cast<fpwm::Symbol>(p), static_cast<fpwm::Symbol>(q), 0},
                                           Level::Low, k, c, 1);
        const auto width = fpwm::min_pulse_width(fpwm::detect_edges(wave, 0.0));
        REQUIRE(width.has_value());
        CHECK(*width >= 1.0 - 1e-12);
        if (p == q) CHECK(*width == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("synthesis and detection round trip") {
  for (int k = 1; k <= 4; ++k) {
    const fpwm::Codec codec(FpwmParams(k, 8));
    WaveformConfig c;
    c.samples_per_ui = k == 3 ? 18 : 16;
    const auto symbols = random_stream(codec, 500, 11 + static_cast<std::uint64_t>(k));
    const auto ideal = fpwm::synthesize(symbols, Level::Low, k, c, 1);

    const auto direct = fpwm::edges_to_symbols(fpwm::detect_edges(ideal, 0.0), 500, codec.params());
    CHECK(direct.symbols == symbols);
    CHECK(direct.max_displacement < 1e-9);

    const auto filtered = fpwm::apply_filter(ideal, fpwm::design_lowpass(c));
    const auto through = fpwm::edges_to_symbols(fpwm::detect_edges(filtered, 0.0), 500, codec.params());
    CHECK(through.symbols == symbols);
    CHECK(through.displacement_warnings == 0);

    const auto width = fpwm::min_pulse_width(fpwm::detect_edges(ideal, 0.0));
    REQUIRE(width.has_value());
    CHECK(*width >= 1.0 - 1e-9);
  }
}

TEST_CASE("eye measurements") {
  const WaveformConfig c;
  Waveform flat;
  flat.samples.assign(1600, 1.0);
  const auto e = fpwm::eye_histogram(flat, 1, 16, 20, -1.5, 1.5);
  CHECK(e.total == 1600);
  int rows = 0;
  for (int a = 0; a < 20; ++a) {
    std::uint64_t n = 0;
    for (int p = 0; p < 16; ++p) n += e.at(p, a);
    rows += n > 0;
  }
  CHECK(rows == 1);

  std::mt19937 rng(1);
  fpwm::BitVector bits(400);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  const auto nrz = fpwm::eye_histogram(fpwm::synthesize_nrz(bits, c), 1, 16, 20, -1.5, 1.5);
  std::uint64_t sum = 0;
  for (int p = 0; p < 16; ++p) {
    int occupied = 0;
    for (int a = 0; a < 20; ++a) {
      occupied += nrz.at(p, a) > 0;
      sum += nrz.at(p, a);
    }
    CHECK(occupied == 2);
  }
  CHECK(sum == nrz.total);

  const fpwm::Codec codec(FpwmParams(4, 8));
  const auto ideal = fpwm::synthesize(random_stream(codec, 300, 3), Level::Low, 4, c, 1);
  const auto last = fpwm::eye_window(ideal, 8, 7.1, 7.9, c.threshold(), 0.1 * c.swing());
  CHECK(last.samples > 0);
  CHECK(last.mid_level_samples == 0);
}

TEST_CASE("add_noise") {
  Waveform w;
  w.samples.assign(1'000'000, 0.0);
  CHECK(fpwm::add_noise(w, 0.0, 1).samples == w.samples);
  const auto a = fpwm::add_noise(w, 0.1, 77);
  CHECK(fpwm::add_noise(w, 0.1, 77).samples == a.samples);
  double mean = 0, sq = 0;
  for (double v : a.samples) mean += v;
  mean /= static_cast<double>(a.samples.size());
  for (double v : a.samples) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(a.samples.size() - 1));
  CHECK(std::abs(sd - 0.1) < 0.002);
  CHECK_THROWS_AS(fpwm::add_noise(w, -1.0, 1), std::invalid_argument);
}

TEST_CASE("waveform file") {
  Waveform w;
  w.samples_per_ui = 16;
  w.samples = {1.0, -0.5, 3.25};
  std::stringstream ss;
  fpwm::write_waveform(ss, w);
  const std::string raw = ss.str();
  CHECK(raw.size() == 4 + 1 + 4 + 8 + 3 * 8);
  CHECK(raw.substr(0, 9) == std::string("FPWV\x01\x10\x00\x00\x00", 9));
  CHECK(raw.substr(9, 8) == std::string("\x03\x00\x00\x00\x00\x00\x00\x00", 8));
  CHECK(raw.substr(17, 8) == std::string("\x00\x00\x00\x00\x00\x00\xf0\x3f", 8));  // 1.0
  const auto back = fpwm::read_waveform(ss);
  CHECK(back.samples == w.samples);
  CHECK(back.samples_per_ui == 16);

  std::istringstream bad("FPWX");
  CHECK_THROWS(fpwm::read_waveform(bad));
}
