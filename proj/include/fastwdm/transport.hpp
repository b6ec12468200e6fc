#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "fastwdm/agent.hpp"
#include "fastwdm/protocol.hpp"
#include "fastwdm/world.hpp"

namespace fastwdm {

/// Carries one encoded request line and returns the reply line.
class Transport {
 public:
  virtual ~Transport() = default;
  /// Throws Error(Transport) when the peer is unreachable or the
  /// connection drops before a full reply arrives.
  virtual std::string roundtrip(const std::string& line) = 0;
};

/// In-process transport; shares the agent's line handler with the TCP path.
class LoopbackTransport : public Transport {
 public:
  explicit LoopbackTransport(Agent& agent) : agent_(agent) {}
  std::string roundtrip(const std::string& line) override { return agent_.handle_line(line); }

 private:
  Agent& agent_;
};

/// Always fails; stands in for an agent that cannot be reached.
class UnreachableTransport : public Transport {
 public:
  explicit UnreachableTransport(std::string name) : name_(std::move(name)) {}
  std::string roundtrip(const std::string& line) override;

 private:
  std::string name_;
};

class TcpTransport : public Transport {
 public:
  TcpTransport(std::string host, std::uint16_t port);
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  std::string roundtrip(const std::string& line) override;

 private:
  void connect_locked();

  std::mutex mu_;
  std::string host_;
  std::uint16_t port_;
  int fd_ = -1;
  std::string buffer_;
};

/// Serves an agent over TCP on 127.0.0.1, one thread per connection.
class AgentServer {
 public:
  /// Port 0 picks a free port.
  AgentServer(Agent& agent, std::uint16_t port = 0);
  ~AgentServer();
  AgentServer(const AgentServer&) = delete;
  AgentServer& operator=(const AgentServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  void stop();

 private:
  void accept_loop();
  void serve(int fd);

  Agent& agent_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{true};
  std::thread acceptor_;
  std::mutex conn_mu_;
  std::list<std::thread> workers_;
  std::list<int> conns_;
};

/// Typed controller-side client for one agent.
class AgentClient {
 public:
  explicit AgentClient(std::unique_ptr<Transport> transport) : transport_(std::move(transport)) {}

  /// Sends a request and returns the result object; remote errors are
  /// rethrown with their original code.
  nlohmann::json call(const std::string& method, nlohmann::json params);

  TrxCharacteristics characteristics();
  void configure(int trx, double freq_thz, const std::string& mode_id);
  void admin_set(int trx, AdminState state);
  BerReading get_ber(int trx, double window_s);
  nlohmann::json telemetry(int trx);

 private:
  std::unique_ptr<Transport> transport_;
  std::atomic<std::int64_t> next_id_{1};
};

}  // namespace fastwdm
