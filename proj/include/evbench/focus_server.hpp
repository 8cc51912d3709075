#pragma once

// Network front end of the focus assistant.
//
//   GET  /ws/focus      WebSocket; one JSON FocusSnapshot per published tick
//   GET  /config        window, cadence, thresholds, stimulus settings
//   GET  /snapshot      most recently published snapshot (null before the first)
//   POST /reset-peaks   restart session peaks
//
// All socket I/O runs on one io_context thread; publish() may be called from
// any thread and only enqueues the serialized snapshot to each client.

#include "evbench/focus.hpp"
#include "evbench/report.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace evbench::focus {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

class FocusServer {
 public:
  FocusServer(FocusService& service, std::string address = "127.0.0.1", unsigned short port = 0)
      : service_(service), address_(std::move(address)), requested_port_(port) {}

  FocusServer(const FocusServer&) = delete;
  FocusServer& operator=(const FocusServer&) = delete;
  ~FocusServer() { stop(); }

  /// Binds and starts serving; port 0 picks an ephemeral port.
  void start() {
    const tcp::endpoint ep(net::ip::make_address(address_), requested_port_);
    acceptor_.open(ep.protocol());
    acceptor_.set_option(net::socket_base::reuse_address(true));
    acceptor_.bind(ep);
    acceptor_.listen(net::socket_base::max_listen_connections);
    port_ = acceptor_.local_endpoint().port();
    do_accept();
    thread_ = std::thread([this] { ioc_.run(); });
  }

  void stop() {
    if (!thread_.joinable()) return;
    ioc_.stop();
    thread_.join();
  }

  unsigned short port() const { return port_; }

  void publish(const FocusSnapshot& s) {
    auto msg = std::make_shared<const std::string>(to_json(s).dump());
    std::vector<std::shared_ptr<WsSession>> clients;
    {
      std::lock_guard lock(mutex_);
      latest_ = msg;
      for (auto it = clients_.begin(); it != clients_.end();) {
        if (auto c = it->lock()) {
          clients.push_back(std::move(c));
          ++it;
        } else {
          it = clients_.erase(it);
        }
      }
    }
    for (auto& c : clients) c->send(msg);
  }

  std::size_t client_count() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& c : clients_) n += c.expired() ? 0 : 1;
    return n;
  }

 private:
  class WsSession : public std::enable_shared_from_this<WsSession> {
   public:
    WsSession(tcp::socket&& socket, FocusServer& server) : ws_(std::move(socket)), server_(server) {}

    void run(http::request<http::string_body> req) {
      ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
      ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
    }

    void send(std::shared_ptr<const std::string> msg) {
      net::post(ws_.get_executor(), [self = shared_from_this(), msg = std::move(msg)] { self->enqueue(msg); });
    }

   private:
    void on_accept(beast::error_code ec) {
      if (ec) return;
      {
        std::lock_guard lock(server_.mutex_);
        server_.clients_.push_back(weak_from_this());
      }
      do_read();
    }

    // Incoming frames are ignored; the read keeps close/ping handling alive.
    void do_read() {
      ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) return;
        self->buffer_.consume(self->buffer_.size());
        self->do_read();
      });
    }

    void enqueue(std::shared_ptr<const std::string> msg) {
      // slow clients only get the most recent snapshots
      while (queue_.size() > 8) queue_.erase(queue_.begin() + 1);
      queue_.push_back(std::move(msg));
      if (queue_.size() == 1) do_write();
    }

    void do_write() {
      ws_.text(true);
      ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) return;
        self->queue_.pop_front();
        if (!self->queue_.empty()) self->do_write();
      });
    }

    websocket::stream<beast::tcp_stream> ws_;
    FocusServer& server_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
  };

  class HttpSession : public std::enable_shared_from_this<HttpSession> {
   public:
    HttpSession(tcp::socket&& socket, FocusServer& server) : stream_(std::move(socket)), server_(server) {}

    void run() { do_read(); }

   private:
    void do_read() {
      req_ = {};
      stream_.expires_after(std::chrono::seconds(30));
      http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
      if (ec == http::error::end_of_stream) {
        stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      if (ec) return;
      if (websocket::is_upgrade(req_) && req_.target() == "/ws/focus") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(req_));
        return;
      }
      auto res = std::make_shared<http::response<http::string_body>>(server_.handle(req_));
      http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code wec, std::size_t) {
        if (wec) return;
        if (res->need_eof()) {
          self->stream_.socket().shutdown(tcp::socket::shutdown_send, wec);
          return;
        }
        self->do_read();
      });
    }

    beast::tcp_stream stream_;
    FocusServer& server_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
  };

  http::response<http::string_body> handle(const http::request<http::string_body>& req) {
    auto reply = [&](http::status status, std::string body) {
      http::response<http::string_body> res{status, req.version()};
      res.set(http::field::content_type, "application/json");
      res.set(http::field::access_control_allow_origin, "*");
      res.keep_alive(req.keep_alive());
      res.body() = std::move(body);
      res.prepare_payload();
      return res;
    };
    const auto target = req.target();
    if (target == "/config") {
      if (req.method() != http::verb::get) return reply(http::status::method_not_allowed, R"({"error":"use GET"})");
      return reply(http::status::ok, to_json(service_.config()).dump());
    }
    if (target == "/reset-peaks") {
      if (req.method() != http::verb::post) return reply(http::status::method_not_allowed, R"({"error":"use POST"})");
      service_.reset_peaks();
      return reply(http::status::ok, R"({"ok":true})");
    }
    if (target == "/snapshot") {
      std::lock_guard lock(mutex_);
      return reply(http::status::ok, latest_ ? *latest_ : "null");
    }
    return reply(http::status::not_found, R"({"error":"not found"})");
  }

  void do_accept() {
    acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), *this)->run();
      do_accept();
    });
  }

  FocusService& service_;
  std::string address_;
  unsigned short requested_port_;
  unsigned short port_ = 0;
  net::io_context ioc_{1};
  tcp::acceptor acceptor_{ioc_};
  std::thread thread_;
  mutable std::mutex mutex_;
  std::vector<std::weak_ptr<WsSession>> clients_;
  std::shared_ptr<const std::string> latest_;
};

/// Feeds a packed-binary event stream (file, FIFO or device) into one camera
/// channel in batches until end of input or `stop`. Returns the events read.
inline std::size_t stream_into(FocusService& service, Camera cam, const std::filesystem::path& path,
                               const std::atomic<bool>& stop, std::size_t batch = 4096) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::filesystem::filesystem_error("cannot open", path, std::make_error_code(std::errc::no_such_file_or_directory));
  read_event_header(in);
  std::size_t total = 0;
  while (!stop) {
    const auto events = read_event_records(in, batch);
    if (events.empty()) break;
    total += service.ingest_batch(cam, events);
    if (events.size() < batch) break;
  }
  return total;
}

}  // namespace evbench::focus
