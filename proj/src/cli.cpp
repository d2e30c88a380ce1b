#include "thermsense/cli.hpp"

#include "thermsense/codec.hpp"
#include "thermsense/csv.hpp"
#include "thermsense/emissivity.hpp"
#include "thermsense/errors.hpp"
#include "thermsense/pipeline.hpp"
#include "thermsense/service/server.hpp"
#include "thermsense/synth.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>
#include <thread>

namespace thermsense::cli {

namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

// Usage problems found after CLI11 parsing succeeded.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError(std::string(what) + " expects lo,hi");
  try {
    std::size_t a = 0, b = 0;
    const double lo = std::stod(text.substr(0, comma), &a);
    const double hi = std::stod(text.substr(comma + 1), &b);
    if (a != comma || b != text.size() - comma - 1) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(what) + " expects lo,hi, got \"" + text + "\"");
  }
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct Globals {
  std::string roi;
  std::string band;
  double quantum = 0.01;
  double window_s = 30.0;
  double hop_s = 1.0;
  double fs = 9.0;
  double speed = 1.0;
  int port = 8080;
  double floor_window_s = 30.0;
  std::optional<double> fixed_floor;
  int order = 2;
  bool causal = false;
  bool log_rvs = false;

  PipelineParams pipeline() const {
    PipelineParams p;
    p.voxel.quantum_k = quantum;
    p.voxel.window_s = floor_window_s;
    if (fixed_floor) {
      p.voxel.floor_mode = FloorMode::fixed;
      p.voxel.fixed_floor_k = *fixed_floor;
    }
    if (!band.empty()) {
      const auto [lo, hi] = parse_pair(band, "--band");
      p.band.low_hz = lo;
      p.band.high_hz = hi;
    }
    p.band.order = order;
    p.band.zero_phase = !causal;
    p.rate_window_s = window_s;
    p.rate_hop_s = hop_s;
    p.resample_fs = fs;
    if (log_rvs) p.rvs.scale = RvsScale::log_magnitude;
    check_params(p);
    return p;
  }

  std::optional<Roi> optional_roi() const {
    if (roi.empty()) return std::nullopt;
    return parse_roi(roi);
  }

  Roi required_roi() const {
    if (roi.empty()) throw UsageError("ROI required (--roi x,y,w,h)");
    return parse_roi(roi);
  }
};

ThermalSequence load_sequence(const std::string& path) {
  if (!fs::is_regular_file(path)) throw InputError("cannot read " + path);
  return read_tseq(path);
}

bool is_tseq(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::string(magic, 4) == "TSEQ";
}

void note_causal(const PipelineParams& p, std::ostream& out) {
  if (p.band.zero_phase) return;
  const auto design = design_bandpass(p.band, p.resample_fs);
  const double f_mid = 0.25;
  out << "note: causal filter delays the signal by about "
      << fmt("%.2f", design.group_delay_s(f_mid)) << " s at " << f_mid << " Hz\n";
}

// Raw breathing signal from a .tseq (with ROI) or a signal CSV.
BreathingSignal load_raw(const std::string& input, const Globals& g, const PipelineParams& params) {
  if (is_tseq(input)) {
    const Roi roi = g.required_roi();
    const auto seq = load_sequence(input);
    check_roi(roi, seq.meta.width, seq.meta.height);
    return integrate_sequence(emissivity_correct(seq), roi, params.voxel);
  }
  return read_signal_csv(input);
}

int cmd_synth(const SynthConfig& cfg, const std::string& out_path, const std::string& truth_path,
              std::ostream& out) {
  check_config(cfg);
  const auto res = synthesize_sequence(cfg);
  write_tseq(out_path, res.sequence);
  if (!truth_path.empty()) write_ground_truth(truth_path, res.truth);
  std::ostringstream rate;
  if (cfg.rate.is_constant()) {
    rate << cfg.rate.start_bpm << " bpm";
  } else {
    rate << cfg.rate.start_bpm << "->" << cfg.rate.end_bpm << " bpm chirp";
  }
  out << out_path << ": " << res.sequence.frames.size() << " frames, " << cfg.duration_s
      << " s at " << cfg.fps << " fps, rate " << rate.str() << ", seed " << cfg.seed << "\n";
  return kOk;
}

int cmd_process(const std::string& input, const std::string& out_dir, const Globals& g,
                std::ostream& out) {
  const Roi roi = g.required_roi();
  const auto params = g.pipeline();
  const auto seq = load_sequence(input);
  check_roi(roi, seq.meta.width, seq.meta.height);
  note_causal(params, out);
  const auto res = process_sequence(seq, roi, params);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_signal_csv(dir / "signal.csv", res.raw);
  write_signal_csv(dir / "filtered.csv", res.filtered);
  write_rate_csv(dir / "rates.csv", res.rates);
  write_rvs_csv(dir / "rvs.csv", res.rvs);
  write_pgm(dir / "rvs.pgm", res.rvs);

  double mean = 0.0;
  for (const auto& r : res.rates) mean += r.bpm;
  if (!res.rates.empty()) mean /= static_cast<double>(res.rates.size());
  out << "roi " << format_roi(roi) << ": " << res.raw.values.size() << " samples, "
      << res.rates.size() << " rate windows, mean " << fmt("%.2f", mean) << " bpm -> "
      << dir.string() << "\n";
  return kOk;
}

int cmd_rate(const std::string& input, const std::string& out_path, const Globals& g,
             std::ostream& out) {
  const auto params = g.pipeline();
  note_causal(params, out);
  const auto uniform = resample_uniform(load_raw(input, g, params), params.resample_fs);
  const auto rates = estimate_rate(bandpass(uniform, params.band), params.rate_params());
  if (out_path.empty()) {
    out << "t_center_s,bpm,confidence\n";
    for (const auto& r : rates) {
      out << fmt("%.17g", r.t_center) << ',' << fmt("%.17g", r.bpm) << ','
          << fmt("%.17g", r.confidence) << '\n';
    }
  } else {
    write_rate_csv(out_path, rates);
  }
  return kOk;
}

int cmd_rvs(const std::string& input, const std::string& out_path, const std::string& pgm_path,
            const Globals& g, std::ostream& out) {
  const auto params = g.pipeline();
  note_causal(params, out);
  const auto uniform = resample_uniform(load_raw(input, g, params), params.resample_fs);
  const Rvs rvs = compute_rvs(bandpass(uniform, params.band), params.rvs);
  write_rvs_csv(out_path, rvs);
  if (!pgm_path.empty()) write_pgm(pgm_path, rvs);
  out << out_path << ": " << rvs.n_freq() << " x " << rvs.n_time() << " RVS\n";
  return kOk;
}

int cmd_serve(const std::string& input, const std::string& address, const std::string& ui_dir,
              bool paused, bool exit_on_end, const Globals& g, std::ostream& out) {
  service::ReplayConfig rc;
  rc.params = g.pipeline();
  rc.speed = g.speed;
  rc.autoplay = !paused;
  rc.roi = g.optional_roi();
  if (g.port < 0 || g.port > 65535) throw UsageError("--port must be in 0..65535");
  service::ServerConfig sc;
  sc.address = address;
  sc.port = static_cast<unsigned short>(g.port);
  sc.ui_dir = ui_dir;
  auto seq = load_sequence(input);
  if (rc.roi) check_roi(*rc.roi, seq.meta.width, seq.meta.height);
  service::check_config(rc);

  service::Server server(std::move(seq), std::move(rc), std::move(sc));
  server.start();
  out << "serving " << input << " on " << address << ":" << server.port() << std::endl;

  g_interrupted = false;
  auto prev_int = std::signal(SIGINT, on_signal);
  auto prev_term = std::signal(SIGTERM, on_signal);
  while (!g_interrupted && !(exit_on_end && server.driver().finished())) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);
  server.stop();
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermal breathing estimation: synthesis, batch processing and live replay",
               "thermsense"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--roi", g.roi, "Nostril region x,y,w,h (pixels)");
  app.add_option("--band", g.band, "Bandpass edges lo,hi in Hz (default 0.1,0.85)");
  app.add_option("--quantum", g.quantum, "Voxel height in kelvin")->capture_default_str();
  app.add_option("--window-s", g.window_s, "Rate window in seconds")->capture_default_str();
  app.add_option("--hop-s", g.hop_s, "Rate hop in seconds")->capture_default_str();
  app.add_option("--fs", g.fs, "Resampling rate in Hz")->capture_default_str();
  app.add_option("--speed", g.speed, "Replay speed (0 = unthrottled)")->capture_default_str();
  app.add_option("--port", g.port, "Replay server port (0 = any free port)")->capture_default_str();
  app.add_option("--floor-window-s", g.floor_window_s, "Voxel floor window in seconds")
      ->capture_default_str();
  app.add_option("--fixed-floor", g.fixed_floor, "Fixed voxel floor in kelvin");
  app.add_option("--order", g.order, "Butterworth order")->capture_default_str();
  app.add_flag("--causal", g.causal, "Single-pass filtering instead of zero-phase");
  app.add_flag("--log-rvs", g.log_rvs, "Log-magnitude RVS");

  SynthConfig sc;
  std::string synth_out, synth_truth, nostril;
  std::optional<double> end_bpm;
  auto* synth = app.add_subcommand("synth", "Write a synthetic .tseq with known breathing");
  synth->fallthrough();
  synth->add_option("--rate-bpm", sc.rate.start_bpm, "Breathing rate")->capture_default_str();
  synth->add_option("--rate-end-bpm", end_bpm, "Final rate of a linear chirp");
  synth->add_option("--duration", sc.duration_s, "Seconds")->capture_default_str();
  synth->add_option("--fps", sc.fps, "Frame rate (<= 9)")->capture_default_str();
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--width", sc.width)->capture_default_str();
  synth->add_option("--height", sc.height)->capture_default_str();
  synth->add_option("--amplitude", sc.amplitude_k, "Breathing amplitude in K")->capture_default_str();
  synth->add_option("--baseline", sc.baseline_k, "Nostril mean temperature in K")
      ->capture_default_str();
  synth->add_option("--ambient", sc.ambient_k, "Background temperature in K")->capture_default_str();
  synth->add_option("--noise-sd", sc.noise_sd_k, "Pixel noise in K")->capture_default_str();
  synth->add_option("--jitter-sd", sc.jitter_sd_s, "Timestamp jitter in s")->capture_default_str();
  synth->add_option("--drift", sc.drift_k_per_min, "Baseline drift in K/min")->capture_default_str();
  synth->add_option("--emissivity", sc.emissivity)->capture_default_str();
  synth->add_option("--nostril", nostril, "Nostril region x,y,w,h (default 72,70,16,8)");
  synth->add_option("--out", synth_out, "Output .tseq")->required();
  synth->add_option("--truth", synth_truth, "Ground-truth CSV");

  std::string input, out_dir = ".", out_path, pgm_path;
  auto* process = app.add_subcommand("process", "Run the full pipeline on a .tseq");
  process->fallthrough();
  process->add_option("--in", input, "Input .tseq")->required();
  process->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  auto* rate = app.add_subcommand("rate", "Breathing rate from a .tseq or signal CSV");
  rate->fallthrough();
  rate->add_option("--in", input, "Input .tseq or t_s,value CSV")->required();
  rate->add_option("--out", out_path, "Rate CSV (default stdout)");

  auto* rvs = app.add_subcommand("rvs", "Respiration variability spectrogram");
  rvs->fallthrough();
  rvs->add_option("--in", input, "Input .tseq or t_s,value CSV")->required();
  rvs->add_option("--out", out_path, "RVS CSV")->required();
  rvs->add_option("--pgm", pgm_path, "Grayscale image");

  std::string address = "0.0.0.0", ui_dir;
  bool paused = false, exit_on_end = false;
  auto* serve = app.add_subcommand("serve", "Replay a .tseq over WebSocket");
  serve->fallthrough();
  serve->add_option("--in", input, "Input .tseq")->required();
  serve->add_option("--address", address)->capture_default_str();
  serve->add_option("--ui-dir", ui_dir, "Static UI bundle served at /");
  serve->add_flag("--paused", paused, "Wait for a play command");
  serve->add_flag("--exit-on-end", exit_on_end, "Exit once the replay has ended");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (synth->parsed()) {
      sc.rate.end_bpm = end_bpm.value_or(sc.rate.start_bpm);
      if (!nostril.empty()) sc.nostril_roi = parse_roi(nostril);
      return cmd_synth(sc, synth_out, synth_truth, out);
    }
    if (process->parsed()) return cmd_process(input, out_dir, g, out);
    if (rate->parsed()) return cmd_rate(input, out_path, g, out);
    if (rvs->parsed()) return cmd_rvs(input, out_path, pgm_path, g, out);
    if (serve->parsed()) return cmd_serve(input, address, ui_dir, paused, exit_on_end, g, out);
  } catch (const RoiError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFormat;
  } catch (const DecodeError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFormat;
  } catch (const CsvError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFormat;
  } catch (const std::system_error& e) {
    err << "error: " << e.what() << "\n";
    return kProcessing;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kProcessing;
  }
  return kUsage;
}

} // namespace thermsense::cli
