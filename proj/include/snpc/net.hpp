#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>

#include "snpc/protocol.hpp"

namespace snpc::proto {

struct NetworkError : Error {
  using Error::Error;
};

// A RESULT could not be obtained: the server answered with an ERROR line.
struct RemoteFailure : Error {
  std::string code;

  RemoteFailure(std::string code_, const std::string& message)
      : Error(code_ + ": " + message), code(std::move(code_)) {}
};

struct ServeOptions {
  Mode mode = Mode::Closed;
  Budgets budgets;
};

// TCP server for the SNPC1 wire protocol. Per connection: read exactly one
// request line (at most 1 MiB), write exactly one response line, close.
// Connections are independent and served concurrently; the handler never
// sees plaintext-bearing fields. Port 0 binds an ephemeral port.
class Server {
 public:
  Server(const std::string& host, std::uint16_t port, ServeOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const { return port_; }

  // Blocks until stop() is called from another thread (or forever).
  void wait();

  void stop();

 private:
  void accept_loop();
  void handle_connection(int fd);

  ServeOptions options_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<int> active_{0};
  std::thread acceptor_;
};

// Hosts protocol steps 4-5 until the process is stopped.
void serve(const std::string& host, std::uint16_t port, ServeOptions options);

// One exchange on a fresh connection: send `line`, read one response line.
std::string exchange_line(const std::string& host, std::uint16_t port,
                          const std::string& line);

// encode_request + exchange_line + decode_response. ERROR lines raise
// RemoteFailure; malformed responses raise NetworkError.
ComputeResponse compute_remote(const std::string& host, std::uint16_t port,
                               const ComputeRequest& req);

}  // namespace snpc::proto
