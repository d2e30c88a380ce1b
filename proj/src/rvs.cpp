#include "thermsense/rvs.hpp"

#include "thermsense/errors.hpp"
#include "thermsense/fft.hpp"
#include "thermsense/rate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

namespace thermsense {

void check_params(const RvsParams& params, double fs) {
  if (!(fs > 0.0)) throw ParameterError("sampling rate must be positive");
  if (!(params.win_s > 0.0)) throw ParameterError("RVS window must be positive");
  if (!(params.hop_s > 0.0)) throw ParameterError("RVS hop must be positive");
  if (!(params.f_lo >= 0.0 && params.f_lo < params.f_hi)) {
    throw ParameterError("RVS band must satisfy 0 <= f_lo < f_hi");
  }
  if (params.f_hi > fs / 2.0 + 1e-12) {
    throw ParameterError("RVS f_hi " + std::to_string(params.f_hi) + " Hz above Nyquist");
  }
}

RvsAxis rvs_axis(const RvsParams& params, double fs, std::size_t window_length) {
  RvsAxis axis;
  axis.nfft = std::max(params.pad_to, next_pow2(window_length));
  const double df = fs / static_cast<double>(axis.nfft);
  axis.first_bin = static_cast<std::size_t>(std::ceil(params.f_lo / df - 1e-9));
  for (std::size_t k = axis.first_bin; k <= axis.nfft / 2; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f > params.f_hi + 1e-12) break;
    axis.freqs_hz.push_back(f);
  }
  if (axis.freqs_hz.empty()) throw ParameterError("RVS band holds no frequency bin");
  return axis;
}

std::vector<double> rvs_column(std::span<const double> window, const RvsAxis& axis,
                               RvsScale scale) {
  const std::size_t n = window.size();
  const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(n);
  const auto taper = hann(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (window[i] - mean) * taper[i];
  RealFft fft(axis.nfft);
  const auto bins = fft.forward(x);
  std::vector<double> col(axis.freqs_hz.size());
  for (std::size_t r = 0; r < col.size(); ++r) {
    const double m = std::abs(bins[axis.first_bin + r]);
    col[r] = scale == RvsScale::log_magnitude ? std::log10(m + 1e-12) : m;
  }
  return col;
}

std::vector<double> Rvs::column(std::size_t t) const {
  std::vector<double> c(n_freq());
  for (std::size_t f = 0; f < c.size(); ++f) c[f] = at(f, t);
  return c;
}

Rvs compute_rvs_raw(const BreathingSignal& sig, const RvsParams& params) {
  if (!sig.is_uniform()) throw ParameterError("RVS needs a uniformly sampled signal");
  check_params(params, sig.fs);
  const WindowPlan plan = plan_windows(sig.size(), sig.fs, params.win_s, params.hop_s);
  const RvsAxis axis = rvs_axis(params, sig.fs, plan.length);

  Rvs rvs;
  rvs.params = params;
  rvs.freqs_hz = axis.freqs_hz;
  rvs.times_s.reserve(plan.count);
  for (std::size_t w = 0; w < plan.count; ++w) {
    const std::size_t s = w * plan.hop;
    rvs.times_s.push_back(0.5 * (sig.times[s] + sig.times[s + plan.length - 1]));
  }
  rvs.magnitudes.assign(rvs.n_freq() * rvs.n_time(), 0.0);
  const std::span<const double> values(sig.values);
  for (std::size_t w = 0; w < plan.count; ++w) {
    const auto col = rvs_column(values.subspan(w * plan.hop, plan.length), axis, params.scale);
    for (std::size_t f = 0; f < col.size(); ++f) rvs.at(f, w) = col[f];
  }
  return rvs;
}

void normalize_global(Rvs& rvs) {
  if (rvs.magnitudes.empty()) return;
  const auto [lo, hi] = std::minmax_element(rvs.magnitudes.begin(), rvs.magnitudes.end());
  const double mn = *lo;
  const double mx = *hi;
  if (!(mx > mn)) {
    std::fill(rvs.magnitudes.begin(), rvs.magnitudes.end(), 0.0);
    return;
  }
  for (double& v : rvs.magnitudes) v = std::clamp((v - mn) / (mx - mn), 0.0, 1.0);
}

Rvs compute_rvs(const BreathingSignal& sig, const RvsParams& params) {
  Rvs rvs = compute_rvs_raw(sig, params);
  normalize_global(rvs);
  return rvs;
}

RvsStream::RvsStream(const RvsParams& params, double fs) : params_(params), fs_(fs) {
  check_params(params, fs);
  length_ = static_cast<std::size_t>(std::llround(params.win_s * fs));
  hop_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.hop_s * fs)));
  if (length_ < 2) throw ParameterError("RVS window shorter than 2 samples");
  axis_ = rvs_axis(params, fs, length_);
}

void RvsStream::reset() {
  buffer_.clear();
  buffer_times_.clear();
  emitted_ = 0;
  skip_ = 0;
  have_last_ = false;
  have_extrema_ = false;
  run_min_ = run_max_ = 0.0;
}

std::vector<RvsColumn> RvsStream::push(const BreathingSignal& chunk) {
  if (chunk.fs != fs_) {
    throw ParameterError("chunk sampled at " + std::to_string(chunk.fs) + " Hz, stream at " +
                         std::to_string(fs_) + " Hz");
  }
  std::vector<RvsColumn> out;
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    auto cols = push(chunk.times[i], chunk.values[i]);
    std::move(cols.begin(), cols.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<RvsColumn> RvsStream::push(double t, double value) {
  if (have_last_ && std::abs(t - last_t_ - 1.0 / fs_) > 1e-6) {
    throw ParameterError("sample at t=" + std::to_string(t) + " breaks the uniform grid");
  }
  have_last_ = true;
  last_t_ = t;
  if (skip_ > 0) {
    --skip_;
    return {};
  }
  buffer_.push_back(value);
  buffer_times_.push_back(t);
  return drain();
}

std::vector<RvsColumn> RvsStream::drain() {
  std::vector<RvsColumn> out;
  while (buffer_.size() >= length_) {
    RvsColumn col;
    col.t_s = 0.5 * (buffer_times_.front() + buffer_times_[length_ - 1]);
    col.raw = rvs_column(std::span<const double>(buffer_).first(length_), axis_, params_.scale);

    const auto [lo, hi] = std::minmax_element(col.raw.begin(), col.raw.end());
    if (!have_extrema_) {
      run_min_ = *lo;
      run_max_ = *hi;
      have_extrema_ = true;
    } else {
      run_min_ = std::min(run_min_, *lo);
      run_max_ = std::max(run_max_, *hi);
    }
    const double base = params_.scale == RvsScale::log_magnitude ? run_min_ : 0.0;
    col.normalized.resize(col.raw.size(), 0.0);
    if (run_max_ > base) {
      for (std::size_t i = 0; i < col.raw.size(); ++i) {
        col.normalized[i] = std::clamp((col.raw[i] - base) / (run_max_ - base), 0.0, 1.0);
      }
    }
    out.push_back(std::move(col));
    ++emitted_;

    // keep the tail from the next window start; a hop longer than the
    // window also skips samples not yet received
    const std::size_t drop = std::min(hop_, buffer_.size());
    skip_ = hop_ - drop;
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(drop));
    buffer_times_.erase(buffer_times_.begin(),
                        buffer_times_.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return out;
}

std::uint8_t to_gray(double magnitude) noexcept {
  const double v = std::floor(255.0 * std::clamp(magnitude, 0.0, 1.0) + 0.5);
  return static_cast<std::uint8_t>(v);
}

std::vector<std::uint8_t> rvs_to_pgm(const Rvs& rvs) {
  if (rvs.n_freq() == 0 || rvs.n_time() == 0 ||
      rvs.magnitudes.size() != rvs.n_freq() * rvs.n_time()) {
    throw InvariantError("cannot render an empty or inconsistent RVS");
  }
  const std::string header = "P5\n" + std::to_string(rvs.n_time()) + " " +
                             std::to_string(rvs.n_freq()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + rvs.magnitudes.size());
  for (std::size_t row = 0; row < rvs.n_freq(); ++row) {
    const std::size_t f = rvs.n_freq() - 1 - row;
    for (std::size_t t = 0; t < rvs.n_time(); ++t) out.push_back(to_gray(rvs.at(f, t)));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const Rvs& rvs) {
  const auto bytes = rvs_to_pgm(rvs);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_rvs_csv(const std::filesystem::path& path, const Rvs& rvs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "f_hz\\t_s";
  for (double t : rvs.times_s) out << ',' << t;
  out << '\n';
  for (std::size_t f = 0; f < rvs.n_freq(); ++f) {
    out << rvs.freqs_hz[f];
    for (std::size_t t = 0; t < rvs.n_time(); ++t) out << ',' << rvs.at(f, t);
    out << '\n';
  }
}

} // namespace thermsense
