#include "sentinel/gateway/server.hpp"

#include <array>
#include <deque>
#include <string_view>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace sentinel::gateway {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr std::string_view kUpgradePrefix = "GET ";

// Counts live session objects so shutdown can tell when writes are done.
class LiveCount {
 public:
  explicit LiveCount(std::size_t& n) : n_(n) { ++n_; }
  LiveCount(const LiveCount&) = delete;
  LiveCount& operator=(const LiveCount&) = delete;
  ~LiveCount() { --n_; }
  std::size_t& counter() const { return n_; }

 private:
  std::size_t& n_;
};

// Feeds buffered bytes to the hub frame by frame. Returns false on a
// protocol error; partial trailing frames stay in `buf`.
bool dispatch_frames(Hub& hub, SessionId id, std::vector<std::uint8_t>& buf) {
  std::size_t offset = 0;
  bool ok = true;
  while (true) {
    const auto r = decode_frame(std::span<const std::uint8_t>(buf).subspan(offset));
    if (r.status == DecodeStatus::NeedMore) break;
    if (r.status == DecodeStatus::ProtocolError) {
      ok = false;
      break;
    }
    offset += r.consumed;
    hub.on_frame(id, r.frame);
  }
  buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(offset));
  return ok;
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Hub& hub, const std::vector<std::uint8_t>& prefix, std::string peer,
            std::size_t& live)
      : live_(live), ws_(std::move(socket)), hub_(hub), peer_(std::move(peer)) {
    auto dst = http_buf_.prepare(prefix.size());
    asio::buffer_copy(dst, asio::buffer(prefix));
    http_buf_.commit(prefix.size());
  }

  void start() {
    http::async_read(ws_.next_layer(), http_buf_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_request(ec); });
  }

 private:
  void on_request(beast::error_code ec) {
    if (ec || !websocket::is_upgrade(request_)) {
      beast::error_code ignored;
      ws_.next_layer().close(ignored);
      return;
    }
    ws_.binary(true);
    ws_.async_accept(request_, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void on_accept(beast::error_code ec) {
    if (ec) return;
    auto weak = weak_from_this();
    auto ioc = ws_.get_executor();
    SessionSink sink;
    sink.send = [weak, ex = ioc](const Frame& f) {
      asio::post(ex, [weak, bytes = encode_frame(f)]() mutable {
        if (auto self = weak.lock()) self->enqueue(std::move(bytes));
      });
    };
    sink.close = [weak, ex = ioc]() {
      asio::post(ex, [weak] {
        if (auto self = weak.lock()) self->begin_close();
      });
    };
    id_ = hub_.open(std::move(sink), peer_);
    opened_ = true;
    do_read();
  }

  void do_read() {
    ws_.async_read(msg_buf_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      if (opened_ && !closing_) hub_.on_disconnect(id_);
      return;
    }
    const auto data = msg_buf_.cdata();
    std::vector<std::uint8_t> bytes(asio::buffer_size(data));
    asio::buffer_copy(asio::buffer(bytes), data);
    msg_buf_.consume(msg_buf_.size());
    // A message carries whole frames only.
    if (!dispatch_frames(hub_, id_, bytes) || !bytes.empty()) {
      hub_.on_protocol_error(id_);
      return;
    }
    if (!closing_) do_read();
  }

  void enqueue(std::vector<std::uint8_t> bytes) {
    if (closed_) return;
    queue_.push_back(std::move(bytes));
    if (!writing_) do_write();
  }

  void do_write() {
    if (queue_.empty()) {
      writing_ = false;
      if (closing_) finish_close();
      return;
    }
    writing_ = true;
    ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->queue_.clear();
        self->writing_ = false;
        return;
      }
      self->queue_.pop_front();
      self->do_write();
    });
  }

  void begin_close() {
    closing_ = true;
    if (!writing_) finish_close();
  }

  void finish_close() {
    if (closed_) return;
    closed_ = true;
    ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
  }

  LiveCount live_;
  websocket::stream<tcp::socket> ws_;
  Hub& hub_;
  std::string peer_;
  beast::flat_buffer http_buf_;
  beast::flat_buffer msg_buf_;
  http::request<http::string_body> request_;
  std::deque<std::vector<std::uint8_t>> queue_;
  SessionId id_ = 0;
  bool opened_ = false;
  bool writing_ = false;
  bool closing_ = false;
  bool closed_ = false;
};

class TcpSession : public std::enable_shared_from_this<TcpSession> {
 public:
  TcpSession(tcp::socket socket, Hub& hub, std::size_t& live)
      : live_(live), socket_(std::move(socket)), hub_(hub) {
    beast::error_code ec;
    const auto ep = socket_.remote_endpoint(ec);
    if (!ec) peer_ = ep.address().to_string() + ":" + std::to_string(ep.port());
  }

  void start() { do_read(); }

  /// Processes whatever the kernel has already buffered for this socket.
  void drain() {
    if (!opened_ || closing_ || !socket_.is_open()) return;
    beast::error_code ec;
    std::size_t avail = socket_.available(ec);
    while (!ec && avail > 0) {
      std::vector<std::uint8_t> chunk(avail);
      const auto n = socket_.read_some(asio::buffer(chunk), ec);
      if (ec) break;
      pending_.insert(pending_.end(), chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(n));
      avail = socket_.available(ec);
    }
    if (!dispatch_frames(hub_, id_, pending_)) hub_.on_protocol_error(id_);
  }

 private:
  void do_read() {
    socket_.async_read_some(asio::buffer(read_buf_), [self = shared_from_this()](beast::error_code ec, std::size_t n) {
      self->on_read(ec, n);
    });
  }

  void on_read(beast::error_code ec, std::size_t n) {
    if (ec) {
      if (opened_ && !closing_) hub_.on_disconnect(id_);
      return;
    }
    pending_.insert(pending_.end(), read_buf_.begin(), read_buf_.begin() + static_cast<std::ptrdiff_t>(n));

    if (!opened_) {
      const std::size_t k = std::min(pending_.size(), kUpgradePrefix.size());
      const bool prefix_match = std::equal(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(k),
                                           kUpgradePrefix.begin());
      if (prefix_match && pending_.size() < kUpgradePrefix.size()) {
        do_read();
        return;
      }
      if (prefix_match) {
        std::make_shared<WsSession>(std::move(socket_), hub_, pending_, peer_, live_.counter())->start();
        return;
      }
      open_in_hub();
    }
    if (!dispatch_frames(hub_, id_, pending_)) {
      hub_.on_protocol_error(id_);
      return;
    }
    if (!closing_) do_read();
  }

  void open_in_hub() {
    auto weak = weak_from_this();
    auto ex = socket_.get_executor();
    SessionSink sink;
    sink.send = [weak, ex](const Frame& f) {
      asio::post(ex, [weak, bytes = encode_frame(f)]() mutable {
        if (auto self = weak.lock()) self->enqueue(std::move(bytes));
      });
    };
    sink.close = [weak, ex]() {
      asio::post(ex, [weak] {
        if (auto self = weak.lock()) self->begin_close();
      });
    };
    // Set before open(): the hub may close synchronously.
    opened_ = true;
    id_ = hub_.open(std::move(sink), peer_);
  }

  void enqueue(std::vector<std::uint8_t> bytes) {
    if (closed_) return;
    queue_.push_back(std::move(bytes));
    if (!writing_) do_write();
  }

  void do_write() {
    if (queue_.empty()) {
      writing_ = false;
      if (closing_) finish_close();
      return;
    }
    writing_ = true;
    asio::async_write(socket_, asio::buffer(queue_.front()),
                      [self = shared_from_this()](beast::error_code ec, std::size_t) {
                        if (ec) {
                          self->queue_.clear();
                          self->writing_ = false;
                          return;
                        }
                        self->queue_.pop_front();
                        self->do_write();
                      });
  }

  void begin_close() {
    closing_ = true;
    if (!writing_) finish_close();
  }

  void finish_close() {
    if (closed_) return;
    closed_ = true;
    beast::error_code ignored;
    socket_.shutdown(tcp::socket::shutdown_both, ignored);
    socket_.close(ignored);
  }

  LiveCount live_;
  tcp::socket socket_;
  Hub& hub_;
  std::string peer_;
  std::array<std::uint8_t, 4096> read_buf_{};
  std::vector<std::uint8_t> pending_;
  std::deque<std::vector<std::uint8_t>> queue_;
  SessionId id_ = 0;
  bool opened_ = false;
  bool writing_ = false;
  bool closing_ = false;
  bool closed_ = false;
};

}  // namespace

struct Server::Impl {
  Impl(GatewayConfig cfg, Options opts)
      : config(std::move(cfg)),
        options(opts),
        log(config.log_path),
        hub(config, log),
        acceptor(ioc),
        signals(ioc),
        guard_timer(ioc) {
    beast::error_code ec;
    const auto address = asio::ip::make_address(config.bind, ec);
    if (ec) throw ConfigError("server.bind: invalid address '" + config.bind + "'");
    const tcp::endpoint ep(address, config.port);
    acceptor.open(ep.protocol());
    acceptor.set_option(asio::socket_base::reuse_address(true));
    acceptor.bind(ep, ec);
    if (ec) {
      if (ec == asio::error::address_in_use || ec == asio::error::access_denied) {
        throw PortInUse("cannot bind " + config.bind + ":" + std::to_string(config.port) + ": " + ec.message());
      }
      throw std::runtime_error("bind failed: " + ec.message());
    }
    acceptor.listen(asio::socket_base::max_listen_connections);
  }

  void do_accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      auto session = std::make_shared<TcpSession>(std::move(socket), hub, live_sessions);
      std::erase_if(tcp_sessions, [](const auto& w) { return w.expired(); });
      tcp_sessions.push_back(session);
      session->start();
      do_accept();
    });
  }

  void shutdown_now() {
    if (stopping) return;
    stopping = true;
    beast::error_code ignored;
    acceptor.close(ignored);
    signals.cancel(ignored);
    for (auto& weak : tcp_sessions) {
      if (auto s = weak.lock()) s->drain();
    }
    tcp_sessions.clear();
    hub.shutdown();
    deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
    wait_for_sessions();
  }

  // Pending writes get a short grace period before the loop is cut.
  void wait_for_sessions() {
    if (live_sessions == 0 || std::chrono::steady_clock::now() >= deadline) {
      ioc.stop();
      return;
    }
    guard_timer.expires_after(std::chrono::milliseconds(5));
    guard_timer.async_wait([this](beast::error_code ec) {
      if (!ec) wait_for_sessions();
    });
  }

  GatewayConfig config;
  Options options;
  EventLog log;
  Hub hub;
  asio::io_context ioc{1};
  tcp::acceptor acceptor;
  asio::signal_set signals;
  asio::steady_timer guard_timer;
  std::vector<std::weak_ptr<TcpSession>> tcp_sessions;
  std::size_t live_sessions = 0;
  std::chrono::steady_clock::time_point deadline;
  bool stopping = false;
};

Server::Server(GatewayConfig config) : Server(std::move(config), Options{}) {}

Server::Server(GatewayConfig config, Options options) : impl_(std::make_unique<Impl>(std::move(config), options)) {
  // Registered before the caller can announce the port, so an early signal
  // is queued rather than fatal.
  if (impl_->options.handle_signals) {
    impl_->signals.add(SIGINT);
    impl_->signals.add(SIGTERM);
  }
}

Server::~Server() = default;

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  auto& im = *impl_;
  if (im.options.handle_signals) {
    im.signals.async_wait([&im](beast::error_code ec, int) {
      if (!ec) im.shutdown_now();
    });
  }
  im.do_accept();
  im.ioc.run();
  // Covers a stop() that was never delivered because run() ended early.
  im.hub.shutdown();
}

void Server::stop() {
  asio::post(impl_->ioc, [im = impl_.get()] { im->shutdown_now(); });
}

Hub& Server::hub() { return impl_->hub; }
EventLog& Server::log() { return impl_->log; }

}  // namespace sentinel::gateway
