// fpwm: sweeps, statistics, file coding and link simulation for framed
// pulse-width modulation.
#include "fpwm/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::uint8_t> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Framed pulse-width modulation toolkit"};
  app.require_subcommand(1);

  std::string k_range = "1..8", m_range = "1..16", tables_out;
  auto* tables = app.add_subcommand("tables", "bitrate and LUT-size sweep as CSV");
  tables->add_option("--k", k_range, "K range, A..B");
  tables->add_option("--m", m_range, "m range, C..D");
  tables->add_option("--out", tables_out, "output CSV (stdout when omitted)");

  int k = 4, m = 8;
  std::string in_path, out_path;
  auto* encode = app.add_subcommand("encode", "encode a file into an FPWM container");
  encode->add_option("--k", k, "pulse-width resolution")->capture_default_str();
  encode->add_option("--m", m, "frame length in UI")->capture_default_str();
  encode->add_option("--in", in_path, "input file")->required();
  encode->add_option("--out", out_path, "output container")->required();

  auto* decode = app.add_subcommand("decode", "decode an FPWM container back to the original file");
  decode->add_option("--in", in_path, "input container")->required();
  decode->add_option("--out", out_path, "output file")->required();

  fpwm::SimConfig sim;
  sim.wave.samples_per_ui = 0;
  std::string report_path, eye_path, psd_path, wave_path;
  auto* simulate = app.add_subcommand("simulate", "end-to-end encode/channel/decode run");
  simulate->add_option("--k", sim.k, "pulse-width resolution")->capture_default_str();
  simulate->add_option("--m", sim.m, "frame length in UI")->capture_default_str();
  simulate->add_option("--frames", sim.frames, "frames to send")->capture_default_str();
  simulate->add_option("--samples-per-ui", sim.wave.samples_per_ui, "oversampling factor S, 0 = smallest multiple of K >= 16")->capture_default_str();
  simulate->add_option("--cutoff", sim.wave.cutoff, "low-pass passband edge in F")->capture_default_str();
  simulate->add_option("--taps", sim.wave.filter_taps, "FIR length, 0 = shortest meeting the envelope")
      ->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "receiver noise standard deviation")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "PRNG seed")->capture_default_str();
  simulate->add_flag("--zero-bits", sim.zero_bits, "send all-zero payload instead of random bits");
  simulate->add_option("--report", report_path, "report file (JSON)")->required();
  simulate->add_option("--eye", eye_path, "eye histogram CSV of the received FPWM waveform");
  simulate->add_option("--psd", psd_path, "PSD CSV, FPWM and NRZ");
  simulate->add_option("--waveform", wave_path, "received FPWM waveform (FPWV file)");

  auto* stats = app.add_subcommand("stats", "symbol occurrence statistics");
  stats->add_option("--k", k, "pulse-width resolution")->capture_default_str();
  stats->add_option("--m", m, "frame length in UI")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*tables) {
      const auto rows = fpwm::sweep_tables(fpwm::parse_range(k_range), fpwm::parse_range(m_range));
      if (tables_out.empty()) {
        fpwm::write_tables_csv(std::cout, rows);
      } else {
        auto out = open_out(tables_out);
        fpwm::write_tables_csv(out, rows);
      }
    } else if (*encode) {
      const auto bytes = read_all(in_path);
      const auto container = fpwm::encode_bytes(bytes, fpwm::FpwmParams(k, m));
      auto out = open_out(out_path);
      fpwm::write_container(out, container);
    } else if (*decode) {
      std::ifstream in(in_path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open '" + in_path + "' for reading");
      const auto bytes = fpwm::decode_container(fpwm::read_container(in));
      auto out = open_out(out_path);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    } else if (*simulate) {
      const auto run = fpwm::run_simulation(sim);
      {
        auto out = open_out(report_path);
        fpwm::write_report(out, run.report);
      }
      if (!eye_path.empty()) {
        const double swing = sim.wave.swing();
        const auto eye = fpwm::eye_histogram(run.received, sim.m, 32 * sim.m, 64, sim.wave.low_level - 0.5 * swing,
                                             sim.wave.high_level + 0.5 * swing);
        auto out = open_out(eye_path);
        fpwm::write_eye_csv(out, eye);
      }
      if (!psd_path.empty()) {
        if (run.fpwm_psd.frequency.empty()) throw std::runtime_error("run too short for a PSD segment");
        auto out = open_out(psd_path);
        fpwm::write_psd_csv(out, run.fpwm_psd, &run.nrz_psd);
      }
      if (!wave_path.empty()) {
        auto out = open_out(wave_path);
        fpwm::write_waveform(out, run.received);
      }
      std::printf("bits_sent=%zu bit_errors=%zu nrz_bit_errors=%zu elapsed=%.2fs\n", run.report.bits_sent,
                  run.report.bit_errors, run.report.nrz_bit_errors, run.report.elapsed_seconds);
    } else if (*stats) {
      fpwm::write_stats(std::cout, fpwm::symbol_stats(fpwm::FpwmParams(k, m)));
    }
  } catch (const std::exception& e) {
    std::cerr << "fpwm: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
