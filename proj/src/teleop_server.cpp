#include "bendjoint/teleop_server.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio/signal_set.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace bendjoint::teleop {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

// State frames beyond this backlog are dropped for a slow client; replies
// are always queued.
constexpr std::size_t kMaxQueuedFrames = 256;

class Session;

struct Pending {
  std::weak_ptr<Session> session;
  Message message;
};

class Hub {
 public:
  virtual ~Hub() = default;
  virtual void attach(const std::shared_ptr<Session>& session) = 0;
  virtual void enqueue(Pending pending) = 0;
};

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket&& socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

  void run() {
    net::dispatch(ws_.get_executor(), [self = shared_from_this()] { self->accept(); });
  }

  void send(std::shared_ptr<const std::string> frame, bool droppable) {
    net::post(ws_.get_executor(), [self = shared_from_this(), frame = std::move(frame), droppable] {
      if (self->closed_ || (droppable && self->outbox_.size() >= kMaxQueuedFrames)) {
        return;
      }
      self->outbox_.push_back(frame);
      if (self->outbox_.size() == 1) {
        self->write_next();
      }
    });
  }

 private:
  void accept() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        return;
      }
      self->ws_.text(true);
      self->hub_.attach(self);
      self->read_next();
    });
  }

  void read_next() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      closed_ = true;
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      Message msg = decode(text);
      if (!is_client_message(msg)) {
        reply(Error{std::string(codes::kWrongDirection),
                    "'" + std::string(type_name(msg)) + "' is a server-to-client message"});
      } else {
        hub_.enqueue({weak_from_this(), std::move(msg)});
      }
    } catch (const ProtocolError& e) {
      reply(Error{e.code(), e.what()});
    }
    read_next();
  }

  void reply(const Message& msg) {
    send(std::make_shared<const std::string>(encode(msg)), false);
  }

  void write_next() {
    ws_.async_write(net::buffer(*outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->closed_ = true;
                        self->outbox_.clear();
                        return;
                      }
                      self->outbox_.pop_front();
                      if (!self->outbox_.empty()) {
                        self->write_next();
                      }
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  Hub& hub_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> outbox_;
  bool closed_ = false;
};

}  // namespace

struct TeleopServer::Impl final : Hub {
  Impl(SimConfig cfg, ServerOptions opts)
      : options(std::move(opts)), core(std::move(cfg), options.rate_hz), acceptor(ioc) {}

  void attach(const std::shared_ptr<Session>& session) override {
    const std::lock_guard lock(sessions_mutex);
    sessions.push_back(session);
  }

  void enqueue(Pending pending) override {
    const std::lock_guard lock(queue_mutex);
    queue.push_back(std::move(pending));
  }

  void bind() {
    try {
      const tcp::endpoint endpoint(net::ip::make_address(options.bind_address), options.port);
      acceptor.open(endpoint.protocol());
      acceptor.set_option(net::socket_base::reuse_address(true));
      acceptor.bind(endpoint);
      acceptor.listen(net::socket_base::max_listen_connections);
    } catch (const boost::system::system_error& e) {
      throw BindError("cannot bind " + options.bind_address + ":" +
                      std::to_string(options.port) + ": " + e.what());
    }
  }

  void accept_next() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        return;  // acceptor closed
      }
      std::make_shared<Session>(std::move(socket), *this)->run();
      accept_next();
    });
  }

  void broadcast(const StateFrame& frame) {
    const auto text = std::make_shared<const std::string>(encode(frame));
    const std::lock_guard lock(sessions_mutex);
    std::erase_if(sessions, [](const std::weak_ptr<Session>& s) { return s.expired(); });
    for (const auto& weak : sessions) {
      if (auto session = weak.lock()) {
        session->send(text, true);
      }
    }
  }

  void drain_commands() {
    std::deque<Pending> batch;
    {
      const std::lock_guard lock(queue_mutex);
      batch.swap(queue);
    }
    for (Pending& pending : batch) {
      const Message reply = core.handle(pending.message);
      if (auto session = pending.session.lock()) {
        session->send(std::make_shared<const std::string>(encode(reply)), false);
      }
    }
  }

  // Steps at wall-clock pace. A late loop catches up by stepping several dt
  // in a row; simulation steps are never skipped.
  void simulation_loop() {
    using Clock = std::chrono::steady_clock;
    const auto dt = std::chrono::duration<double>(core.sim().config().dt);
    const auto start = Clock::now();
    std::uint64_t steps = 0;
    while (running.load()) {
      drain_commands();
      const auto due = static_cast<std::uint64_t>((Clock::now() - start) / dt);
      while (steps < due) {
        if (auto frame = core.step()) {
          broadcast(*frame);
        }
        ++steps;
      }
      std::this_thread::sleep_until(
          start + std::chrono::duration_cast<Clock::duration>(dt * static_cast<double>(steps + 1)));
    }
  }

  ServerOptions options;
  TeleopCore core;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::thread io_thread;
  std::thread sim_thread;
  std::atomic<bool> running{false};

  std::mutex sessions_mutex;
  std::vector<std::weak_ptr<Session>> sessions;
  std::mutex queue_mutex;
  std::deque<Pending> queue;
};

TeleopServer::TeleopServer(SimConfig cfg, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(options))) {}

TeleopServer::~TeleopServer() { stop(); }

void TeleopServer::start() {
  impl_->bind();
  impl_->running = true;
  impl_->accept_next();
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
  impl_->sim_thread = std::thread([this] { impl_->simulation_loop(); });
}

std::uint16_t TeleopServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void TeleopServer::stop() {
  if (!impl_->running.exchange(false)) {
    return;
  }
  impl_->sim_thread.join();
  // Outstanding session handlers are destroyed with the io_context, which
  // closes their sockets.
  impl_->ioc.stop();
  impl_->io_thread.join();
}

void TeleopServer::run_until_signal() {
  net::io_context signal_ioc;
  net::signal_set signals(signal_ioc, SIGINT, SIGTERM);
  signals.async_wait([](beast::error_code, int) {});
  signal_ioc.run();
  stop();
}

}  // namespace bendjoint::teleop
