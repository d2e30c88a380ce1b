#pragma once

#include "thermsense/pipeline.hpp"
#include "thermsense/service/protocol.hpp"
#include "thermsense/thermal.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace thermsense::service {

using ClientId = std::uint64_t;
inline constexpr ClientId kNoClient = 0;

// Where the driver delivers messages. Implementations must be thread-safe
// with respect to their own clients; the driver calls from its thread only.
class MessageSink {
public:
  virtual ~MessageSink() = default;
  virtual void broadcast(const StreamMessage& msg) = 0;
  virtual void send_to(ClientId client, const StreamMessage& msg) = 0;
};

struct ReplayConfig {
  PipelineParams params;
  double speed = 1.0;        // media seconds per wall second; 0 = as fast as possible
  bool autoplay = true;      // start playing immediately
  std::optional<Roi> roi;    // preset ROI, as if a client had sent it
};

void check_config(const ReplayConfig& cfg);

// Plays one sequence on a media clock and runs the streaming estimator once
// an ROI is set. It is the single producer of stream messages: client
// commands are queued and applied on the driver thread between frames, so
// estimator state never changes under a running computation.
//
// Before any ROI only Frame messages are sent. A valid set_roi resets the
// estimator, is acknowledged to every client with roi_ack and takes effect
// from the next frame. Sequence numbers are per channel, gapless and never
// reset; after the last frame an End message closes each channel.
class ReplayDriver {
public:
  ReplayDriver(ThermalSequence seq, ReplayConfig cfg, MessageSink& sink);
  ~ReplayDriver();

  ReplayDriver(const ReplayDriver&) = delete;
  ReplayDriver& operator=(const ReplayDriver&) = delete;

  void start();
  void stop();

  void submit(ClientId client, ClientCommand cmd);
  // Parses a client text message; malformed ones get an Error reply.
  void submit_text(ClientId client, std::string_view text);

  // True once End was sent and no further command is pending.
  bool finished() const noexcept { return finished_.load(); }
  // Blocks until finished() or the timeout expires.
  bool wait_finished(std::chrono::milliseconds timeout) const;

  const ThermalSequence& sequence() const noexcept { return seq_; }

  // Wall-clock lateness of each emitted frame against its media schedule, in
  // seconds (only recorded for speed > 0).
  std::vector<double> frame_lateness() const;

private:
  using Clock = std::chrono::steady_clock;

  struct Pending {
    ClientId client;
    ClientCommand cmd;
  };

  void run();
  void apply(const Pending& p);
  void emit_frame(const ThermalFrame& frame);
  void send_end();
  void anchor_clock();

  ThermalSequence seq_;
  ReplayConfig cfg_;
  MessageSink& sink_;

  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::deque<Pending> pending_;
  bool stop_requested_ = false;
  std::thread thread_;
  std::atomic<bool> finished_{false};

  // driver-thread state
  std::optional<StreamingEstimator> estimator_;
  bool playing_ = false;
  std::size_t next_frame_ = 0;
  bool end_sent_ = false;
  Clock::time_point anchor_wall_;
  double anchor_media_ = 0.0;
  std::uint64_t frame_seq_ = 0;
  std::uint64_t signal_seq_ = 0;
  std::uint64_t rate_seq_ = 0;
  std::uint64_t rvs_seq_ = 0;
  std::vector<double> lateness_;
};

} // namespace thermsense::service
