#include "thermsense/service/server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <system_error>
#include <thread>

namespace thermsense::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr const char* kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>thermsense replay</title></head>
<body><h1>thermsense replay server</h1>
<p>No UI bundle configured. Connect a WebSocket client to this address.</p>
</body></html>
)";

std::string mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".png") return "image/png";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

class Hub;

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
  WsSession(tcp::socket&& socket, ClientId id, Hub& hub, ReplayDriver& driver,
            std::size_t max_queued)
      : ws_(std::move(socket)), id_(id), hub_(hub), driver_(driver), max_queued_(max_queued) {}

  ClientId id() const noexcept { return id_; }

  void run(http::request<http::string_body> req);
  void deliver(std::shared_ptr<const WireMessage> msg);

private:
  void on_accept(beast::error_code ec);
  void do_read();
  void on_read(beast::error_code ec, std::size_t);
  void do_write();
  void on_write(beast::error_code ec, std::size_t);

  websocket::stream<beast::tcp_stream> ws_;
  ClientId id_;
  Hub& hub_;
  ReplayDriver& driver_;
  std::size_t max_queued_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const WireMessage>> queue_;
  std::size_t queued_bytes_ = 0;
  bool open_ = false;
};

class Hub : public MessageSink {
public:
  void add(const std::shared_ptr<WsSession>& s) {
    std::lock_guard lock(mutex_);
    sessions_[s->id()] = s;
  }
  void remove(ClientId id) {
    std::lock_guard lock(mutex_);
    sessions_.erase(id);
  }
  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
  }

  void broadcast(const StreamMessage& msg) override {
    const auto wire = std::make_shared<const WireMessage>(serialize(msg));
    std::lock_guard lock(mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (auto s = it->second.lock()) {
        s->deliver(wire);
        ++it;
      } else {
        it = sessions_.erase(it);
      }
    }
  }

  void send_to(ClientId client, const StreamMessage& msg) override {
    std::shared_ptr<WsSession> s;
    {
      std::lock_guard lock(mutex_);
      const auto it = sessions_.find(client);
      if (it != sessions_.end()) s = it->second.lock();
    }
    if (s) s->deliver(std::make_shared<const WireMessage>(serialize(msg)));
  }

private:
  mutable std::mutex mutex_;
  std::map<ClientId, std::weak_ptr<WsSession>> sessions_;
};

void WsSession::run(http::request<http::string_body> req) {
  ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
  ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
}

void WsSession::on_accept(beast::error_code ec) {
  if (ec) return;
  open_ = true;
  hub_.add(shared_from_this());
  do_read();
}

void WsSession::do_read() {
  ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
}

void WsSession::on_read(beast::error_code ec, std::size_t) {
  if (ec) {
    open_ = false;
    hub_.remove(id_);
    return;
  }
  if (ws_.got_text()) {
    driver_.submit_text(id_, beast::buffers_to_string(buffer_.data()));
  } else {
    hub_.send_to(id_, ErrorMsg{"bad_message", "binary client messages are not accepted"});
  }
  buffer_.consume(buffer_.size());
  do_read();
}

void WsSession::deliver(std::shared_ptr<const WireMessage> msg) {
  net::post(ws_.get_executor(), [self = shared_from_this(), msg = std::move(msg)]() mutable {
    if (!self->open_) return;
    if (msg->binary && self->queued_bytes_ > self->max_queued_) return;
    self->queued_bytes_ += msg->payload.size();
    self->queue_.push_back(std::move(msg));
    if (self->queue_.size() == 1) self->do_write();
  });
}

void WsSession::do_write() {
  const auto& msg = *queue_.front();
  ws_.binary(msg.binary);
  ws_.async_write(net::buffer(msg.payload),
                  beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
}

void WsSession::on_write(beast::error_code ec, std::size_t) {
  if (ec) {
    open_ = false;
    queue_.clear();
    hub_.remove(id_);
    return;
  }
  queued_bytes_ -= queue_.front()->payload.size();
  queue_.pop_front();
  if (!queue_.empty()) do_write();
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
  HttpSession(tcp::socket&& socket, std::function<void(tcp::socket&&, http::request<http::string_body>)> upgrade,
              std::filesystem::path ui_dir)
      : stream_(std::move(socket)), upgrade_(std::move(upgrade)), ui_dir_(std::move(ui_dir)) {}

  void run() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

private:
  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      stream_.expires_never();
      upgrade_(stream_.release_socket(), std::move(req_));
      return;
    }
    respond();
  }

  void respond() {
    auto res = std::make_shared<http::response<http::string_body>>();
    res->version(req_.version());
    res->keep_alive(false);
    res->set(http::field::server, "thermsense");

    std::string target(req_.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      res->result(http::status::method_not_allowed);
      res->body() = "method not allowed\n";
    } else if (target.empty() || target[0] != '/' || target.find("..") != std::string::npos) {
      res->result(http::status::bad_request);
      res->body() = "bad path\n";
    } else {
      if (target == "/") target = "/index.html";
      const auto path = ui_dir_.empty() ? std::filesystem::path() : ui_dir_ / target.substr(1);
      std::ifstream in;
      if (!path.empty()) in.open(path, std::ios::binary);
      if (in.is_open() && in) {
        std::ostringstream body;
        body << in.rdbuf();
        res->result(http::status::ok);
        res->set(http::field::content_type, mime_type(path));
        res->body() = body.str();
      } else if (target == "/index.html") {
        res->result(http::status::ok);
        res->set(http::field::content_type, "text/html");
        res->body() = kFallbackPage;
      } else {
        res->result(http::status::not_found);
        res->body() = "not found\n";
      }
    }
    if (req_.method() == http::verb::head) {
      res->content_length(res->body().size());
      res->body().clear();
    } else {
      res->prepare_payload();
    }
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::function<void(tcp::socket&&, http::request<http::string_body>)> upgrade_;
  std::filesystem::path ui_dir_;
};

} // namespace

struct Server::Impl {
  Impl(ThermalSequence seq, ReplayConfig replay, ServerConfig config)
      : cfg(std::move(config)), acceptor(ioc), driver(std::move(seq), std::move(replay), hub) {}

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec == net::error::operation_aborted) return;
      } else {
        auto upgrade = [this](tcp::socket&& s, http::request<http::string_body> req) {
          auto ws = std::make_shared<WsSession>(std::move(s), next_id++, hub, driver,
                                                cfg.max_queued_bytes);
          ws->run(std::move(req));
        };
        std::make_shared<HttpSession>(std::move(socket), upgrade, cfg.ui_dir)->run();
      }
      do_accept();
    });
  }

  ServerConfig cfg;
  net::io_context ioc;
  tcp::acceptor acceptor;
  Hub hub;
  ReplayDriver driver;
  std::atomic<ClientId> next_id{1};
  std::thread io_thread;
  bool running = false;
};

Server::Server(ThermalSequence seq, ReplayConfig replay, ServerConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(seq), std::move(replay), std::move(cfg))) {}

Server::~Server() { stop(); }

void Server::start() {
  auto& im = *impl_;
  beast::error_code addr_ec;
  const auto address = net::ip::make_address(im.cfg.address, addr_ec);
  if (addr_ec) {
    throw std::system_error(addr_ec.value(), std::system_category(),
                            "bad address " + im.cfg.address);
  }
  const tcp::endpoint ep(address, im.cfg.port);
  beast::error_code ec;
  auto check = [&](const char* what) {
    if (ec) {
      beast::error_code ignored;
      im.acceptor.close(ignored);
      throw std::system_error(ec.value(), std::system_category(),
                              std::string(what) + " " + im.cfg.address + ":" +
                                  std::to_string(im.cfg.port));
    }
  };
  im.acceptor.open(ep.protocol(), ec);
  check("open");
  im.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  check("set_option");
  im.acceptor.bind(ep, ec);
  check("bind");
  im.acceptor.listen(net::socket_base::max_listen_connections, ec);
  check("listen");
  im.do_accept();
  im.io_thread = std::thread([&im] { im.ioc.run(); });
  im.running = true;
  im.driver.start();
}

void Server::stop() {
  if (!impl_ || !impl_->running) return;
  impl_->running = false;
  impl_->driver.stop();
  impl_->ioc.stop();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

ReplayDriver& Server::driver() { return impl_->driver; }

std::size_t Server::client_count() const { return impl_->hub.size(); }

} // namespace thermsense::service
