#include "snpc/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <functional>
#include <optional>

#include "snpc/engine.hpp"

namespace snpc::proto {
namespace {

constexpr size_t kMaxLine = 1 << 20;  // 1 MiB framing limit

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list) freeaddrinfo(list);
  }
};

int resolve_and(const std::string& host, std::uint16_t port, bool passive,
                const std::function<int(const addrinfo&)>& use) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo res;
  const std::string port_text = std::to_string(port);
  int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(), port_text.c_str(),
                       &hints, &res.list);
  if (rc != 0)
    throw NetworkError("cannot resolve " + host + ": " + gai_strerror(rc));
  int last_errno = 0;
  for (addrinfo* ai = res.list; ai; ai = ai->ai_next) {
    int fd = use(*ai);
    if (fd >= 0) return fd;
    last_errno = errno;
  }
  throw NetworkError("cannot reach " + host + ":" + port_text + ": " +
                     std::strerror(last_errno));
}

// Reads until '\n' (inclusive limit kMaxLine) or EOF. Returns the line
// without guaranteeing a trailing newline; oversized input returns nullopt.
std::optional<std::string> read_line(int fd) {
  std::string line;
  char buf[4096];
  while (line.size() <= kMaxLine) {
    ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      return std::nullopt;
    }
    if (n == 0) break;  // EOF
    line.append(buf, static_cast<size_t>(n));
    if (line.find('\n') != std::string::npos) break;
  }
  if (line.empty()) return std::nullopt;
  size_t nl = line.find('\n');
  if (nl == std::string::npos || nl + 1 > kMaxLine) return std::nullopt;
  // Anything past the first newline is ignored: one request per connection.
  return line.substr(0, nl + 1);
}

bool write_all(int fd, const std::string& data) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    sent += static_cast<size_t>(n);
  }
  return true;
}

// Consumes whatever the peer is still sending so closing the socket does not
// reset the connection under the response we just wrote. Bounded.
void drain(int fd) {
  char buf[4096];
  size_t drained = 0;
  while (drained < (8u << 20)) {
    ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    drained += static_cast<size_t>(n);
  }
}

}  // namespace

Server::Server(const std::string& host, std::uint16_t port, ServeOptions options)
    : options_(std::move(options)) {
  listen_fd_ = resolve_and(host, port, /*passive=*/true, [](const addrinfo& ai) {
    int fd = ::socket(ai.ai_family, ai.ai_socktype, ai.ai_protocol);
    if (fd < 0) return -1;
    int one = 1;
    setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai.ai_addr, ai.ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
      int saved = errno;
      ::close(fd);
      errno = saved;
      return -1;
    }
    return fd;
  });

  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  if (getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len) == 0) {
    if (addr.ss_family == AF_INET)
      port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    else if (addr.ss_family == AF_INET6)
      port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  }

  acceptor_ = std::thread(&Server::accept_loop, this);
}

Server::~Server() { stop(); }

void Server::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, 100);
    if (rc <= 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    ++active_;
    std::thread([this, fd] {
      handle_connection(fd);
      --active_;
    }).detach();
  }
}

void Server::handle_connection(int fd) {
  auto finish = [fd](const std::string& line) {
    write_all(fd, line);
    ::shutdown(fd, SHUT_WR);
    drain(fd);
    ::close(fd);
  };
  std::optional<std::string> line = read_line(fd);
  if (!line) {
    finish(encode_error("BAD_SYNTAX", "missing or oversized request line"));
    return;
  }
  auto decoded = decode_request(*line);
  if (auto* err = std::get_if<WireError>(&decoded)) {
    finish(encode_error(wire_code_name(err->code), err->message));
    return;
  }
  ComputeRequest req = std::get<ComputeRequest>(decoded);
  // The operator's engine choice is authoritative; the result is
  // mode-independent, so honoring it never changes the answer.
  req.mode = options_.mode;
  try {
    finish(encode_response(server_compute(req, options_.budgets)));
  } catch (const OverBudget& e) {
    finish(encode_error("OVERBUDGET", e.what()));
  } catch (const BadRequest& e) {
    finish(encode_error("VALUE_RANGE", e.what()));
  } catch (const std::exception& e) {
    finish(encode_error("INTERNAL", e.what()));
  }
}

void Server::wait() {
  if (acceptor_.joinable()) acceptor_.join();
}

void Server::stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  // Let in-flight connections finish; they are short-lived by design.
  for (int i = 0; i < 500 && active_ > 0; ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
}

void serve(const std::string& host, std::uint16_t port, ServeOptions options) {
  Server server(host, port, std::move(options));
  server.wait();
}

std::string exchange_line(const std::string& host, std::uint16_t port,
                          const std::string& line) {
  int fd = resolve_and(host, port, /*passive=*/false, [](const addrinfo& ai) {
    int fd = ::socket(ai.ai_family, ai.ai_socktype, ai.ai_protocol);
    if (fd < 0) return -1;
    if (::connect(fd, ai.ai_addr, ai.ai_addrlen) != 0) {
      int saved = errno;
      ::close(fd);
      errno = saved;
      return -1;
    }
    return fd;
  });
  // Attempt the read even after a short write: the peer may have rejected
  // the request mid-stream and already queued its error line.
  write_all(fd, line);
  std::optional<std::string> reply = read_line(fd);
  ::close(fd);
  if (!reply) throw NetworkError("no response line from " + host);
  return *reply;
}

ComputeResponse compute_remote(const std::string& host, std::uint16_t port,
                               const ComputeRequest& req) {
  std::string reply = exchange_line(host, port, encode_request(req));
  auto decoded = decode_response(reply);
  if (auto* resp = std::get_if<ComputeResponse>(&decoded)) return *resp;
  if (auto* remote = std::get_if<RemoteError>(&decoded))
    throw RemoteFailure(remote->code, remote->message);
  throw NetworkError("malformed response: " +
                     std::get<WireError>(decoded).message);
}

}  // namespace snpc::proto
