#pragma once

#include "thermsense/service/replay.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

namespace thermsense::service {

struct ServerConfig {
  std::string address = "0.0.0.0";
  unsigned short port = 8080;           // 0 picks a free port
  std::filesystem::path ui_dir;         // static UI bundle served at "/"
  std::size_t max_queued_bytes = 64u << 20; // per client; frames beyond it are dropped
};

// Replay server: one HTTP/WebSocket endpoint per port. Plain GET requests
// are answered from ui_dir (or a minimal built-in page when it is unset or
// lacks index.html); WebSocket upgrades join the stream. Every client
// receives the broadcast messages of the single ReplayDriver; error replies
// go to the offending client only. A client that falls behind by more than
// max_queued_bytes loses Frame messages (visible as seq gaps), never the
// signal, rate, RVS or control messages.
class Server {
public:
  Server(ThermalSequence seq, ReplayConfig replay, ServerConfig cfg);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving. Throws std::system_error when the port is in
  // use or the address is invalid.
  void start();
  void stop();

  // Actual bound port (useful with port 0).
  unsigned short port() const;
  ReplayDriver& driver();
  std::size_t client_count() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace thermsense::service
