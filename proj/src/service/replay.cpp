#include "thermsense/service/replay.hpp"

#include "thermsense/codec.hpp"
#include "thermsense/emissivity.hpp"
#include "thermsense/errors.hpp"

#include <algorithm>
#include <cmath>

namespace thermsense::service {

void check_config(const ReplayConfig& cfg) {
  check_params(cfg.params);
  if (!(cfg.speed >= 0.0) || !std::isfinite(cfg.speed)) {
    throw ParameterError("replay speed must be >= 0 (0 = unthrottled)");
  }
}

ReplayDriver::ReplayDriver(ThermalSequence seq, ReplayConfig cfg, MessageSink& sink)
    : seq_(std::move(seq)), cfg_(std::move(cfg)), sink_(sink) {
  validate(seq_);
  check_config(cfg_);
  if (cfg_.roi) {
    check_roi(*cfg_.roi, seq_.meta.width, seq_.meta.height);
    estimator_.emplace(*cfg_.roi, cfg_.params, seq_.meta.emissivity);
  }
  playing_ = cfg_.autoplay;
}

ReplayDriver::~ReplayDriver() { stop(); }

void ReplayDriver::start() {
  anchor_clock();
  thread_ = std::thread([this] { run(); });
}

void ReplayDriver::stop() {
  {
    std::lock_guard lock(mutex_);
    stop_requested_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void ReplayDriver::submit(ClientId client, ClientCommand cmd) {
  {
    std::lock_guard lock(mutex_);
    pending_.push_back({client, std::move(cmd)});
    finished_ = false;
  }
  cv_.notify_all();
}

void ReplayDriver::submit_text(ClientId client, std::string_view text) {
  try {
    submit(client, parse_client_message(text));
  } catch (const ProtocolError& e) {
    sink_.send_to(client, ErrorMsg{e.code(), e.what()});
  }
}

bool ReplayDriver::wait_finished(std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  return cv_.wait_for(lock, timeout, [this] { return finished_.load(); });
}

std::vector<double> ReplayDriver::frame_lateness() const {
  std::lock_guard lock(mutex_);
  return lateness_;
}

void ReplayDriver::anchor_clock() {
  anchor_wall_ = Clock::now();
  anchor_media_ = next_frame_ < seq_.frames.size() ? seq_.frames[next_frame_].timestamp() : 0.0;
}

void ReplayDriver::apply(const Pending& p) {
  std::visit(
      [&](const auto& cmd) {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, SetRoiCmd>) {
          try {
            check_roi(cmd.roi, seq_.meta.width, seq_.meta.height);
          } catch (const RoiError& e) {
            const bool bounds = e.edge() != RoiError::Edge::none;
            sink_.send_to(p.client, ErrorMsg{bounds ? "roi_out_of_bounds" : "roi_too_small", e.what()});
            return;
          }
          estimator_.emplace(cmd.roi, cfg_.params, seq_.meta.emissivity);
          sink_.broadcast(RoiAckMsg{cmd.roi});
        } else if constexpr (std::is_same_v<T, PlayCmd>) {
          if (!playing_) {
            playing_ = true;
            anchor_clock();
          }
        } else if constexpr (std::is_same_v<T, PauseCmd>) {
          playing_ = false;
        } else if constexpr (std::is_same_v<T, SeekCmd>) {
          const auto it = std::lower_bound(
              seq_.frames.begin(), seq_.frames.end(), cmd.t_s,
              [](const ThermalFrame& f, double t) { return f.timestamp() < t; });
          next_frame_ = static_cast<std::size_t>(it - seq_.frames.begin());
          end_sent_ = false;
          if (estimator_) estimator_->reset();
          anchor_clock();
        }
      },
      p.cmd);
}

void ReplayDriver::emit_frame(const ThermalFrame& raw) {
  const ThermalFrame frame = emissivity_correct(raw, seq_.meta.emissivity);
  FrameMsg fm;
  fm.seq = static_cast<std::uint32_t>(frame_seq_++);
  fm.timestamp_us = to_timestamp_us(frame.timestamp());
  fm.width = static_cast<std::uint16_t>(frame.width());
  fm.height = static_cast<std::uint16_t>(frame.height());
  fm.cells = frame_cells(frame);
  sink_.broadcast(fm);

  if (!estimator_) return;
  const auto up = estimator_->push(raw);
  if (up.sample) sink_.broadcast(SignalMsg{signal_seq_++, up.sample->first, up.sample->second});
  for (const auto& r : up.rates) {
    sink_.broadcast(RateMsg{rate_seq_++, r.t_center, r.bpm, r.confidence});
  }
  const auto& axis = estimator_->rvs_stream().axis();
  for (const auto& c : up.rvs_columns) {
    sink_.broadcast(RvsColumnMsg{rvs_seq_++, c.t_s, axis.freqs_hz.front(), axis.freqs_hz.back(),
                                 c.normalized});
  }
}

void ReplayDriver::send_end() {
  for (const char* ch : kChannels) sink_.broadcast(EndMsg{ch});
  end_sent_ = true;
}

void ReplayDriver::run() {
  std::unique_lock lock(mutex_);
  for (;;) {
    if (stop_requested_) return;
    if (!pending_.empty()) {
      const Pending p = std::move(pending_.front());
      pending_.pop_front();
      lock.unlock();
      apply(p);
      lock.lock();
      continue;
    }

    const bool at_end = next_frame_ >= seq_.frames.size();
    if (at_end && !end_sent_) {
      lock.unlock();
      send_end();
      lock.lock();
      continue;
    }
    if (at_end || !playing_) {
      finished_ = at_end;
      cv_.notify_all();
      cv_.wait(lock, [this] { return stop_requested_ || !pending_.empty(); });
      continue;
    }

    const ThermalFrame& frame = seq_.frames[next_frame_];
    if (cfg_.speed > 0.0) {
      const auto due = anchor_wall_ + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(
                                              (frame.timestamp() - anchor_media_) / cfg_.speed));
      if (Clock::now() < due) {
        cv_.wait_until(lock, due, [this] { return stop_requested_ || !pending_.empty(); });
        continue;
      }
      lateness_.push_back(std::chrono::duration<double>(Clock::now() - due).count());
    }
    ++next_frame_;
    lock.unlock();
    emit_frame(frame);
    lock.lock();
  }
}

} // namespace thermsense::service
