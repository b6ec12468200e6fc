#include "fastwdm/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "fastwdm/error.hpp"

namespace fastwdm {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::Transport, what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const auto n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("send");
    }
    off += static_cast<std::size_t>(n);
  }
}

// Reads one '\n'-terminated line; false on orderly EOF before any byte.
bool read_line(int fd, std::string& buffer, std::string& line) {
  for (;;) {
    const auto pos = buffer.find('\n');
    if (pos != std::string::npos) {
      line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      return true;
    }
    char chunk[4096];
    const auto n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n == 0) {
      if (buffer.empty()) return false;
      throw Error(ErrorCode::Transport, "connection closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("recv");
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string UnreachableTransport::roundtrip(const std::string&) {
  throw Error(ErrorCode::Transport, "agent " + name_ + " is unreachable");
}

TcpTransport::TcpTransport(std::string host, std::uint16_t port) : host_(std::move(host)), port_(port) {}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpTransport::connect_locked() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto port = std::to_string(port_);
  if (const int rc = ::getaddrinfo(host_.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw Error(ErrorCode::Transport, "resolve " + host_ + ": " + ::gai_strerror(rc));
  int fd = -1;
  for (auto* p = res; p; p = p->ai_next) {
    fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) fail("connect " + host_ + ":" + port);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  fd_ = fd;
  buffer_.clear();
}

std::string TcpTransport::roundtrip(const std::string& line) {
  std::lock_guard lock(mu_);
  if (fd_ < 0) connect_locked();
  try {
    write_all(fd_, line + "\n");
    std::string reply;
    if (!read_line(fd_, buffer_, reply)) throw Error(ErrorCode::Transport, "connection closed by agent");
    return reply;
  } catch (const Error&) {
    ::close(fd_);
    fd_ = -1;
    throw;
  }
}

AgentServer::AgentServer(Agent& agent, std::uint16_t port) : agent_(agent) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) fail("socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    ::close(listen_fd_);
    fail("bind port " + std::to_string(port));
  }
  if (::listen(listen_fd_, 16) < 0) {
    ::close(listen_fd_);
    fail("listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

AgentServer::~AgentServer() { stop(); }

void AgentServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::list<std::thread> workers;
  {
    std::lock_guard lock(conn_mu_);
    for (int fd : conns_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void AgentServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    std::lock_guard lock(conn_mu_);
    if (!running_) {
      ::close(fd);
      return;
    }
    conns_.push_back(fd);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

void AgentServer::serve(int fd) {
  std::string buffer;
  std::string line;
  try {
    while (read_line(fd, buffer, line)) write_all(fd, agent_.handle_line(line) + "\n");
  } catch (const Error&) {
    // Peer went away; nothing to reply to.
  }
  std::lock_guard lock(conn_mu_);
  conns_.remove(fd);
  ::close(fd);
}

nlohmann::json AgentClient::call(const std::string& method, nlohmann::json params) {
  const auto req = ProtocolMessage::request(next_id_++, method, std::move(params));
  const std::string reply_line = transport_->roundtrip(encode(req));
  ProtocolMessage reply;
  try {
    reply = decode(reply_line);
  } catch (const Error& e) {
    throw Error(ErrorCode::Transport, "bad reply to " + method + ": " + e.detail());
  }
  if (reply.id != req.id)
    throw Error(ErrorCode::Transport, "reply id " + std::to_string(reply.id) + " does not match request " +
                                          std::to_string(req.id));
  if (reply.kind == MessageKind::Error) throw to_error(reply);
  if (reply.kind != MessageKind::Response) throw Error(ErrorCode::Transport, "agent sent a request frame");
  return reply.body;
}

TrxCharacteristics AgentClient::characteristics() { return characteristics_from_json(call("get_characteristics", nlohmann::json::object())); }

void AgentClient::configure(int trx, double freq_thz, const std::string& mode_id) {
  call("configure", {{"trx", trx}, {"freq_thz", freq_thz}, {"mode_id", mode_id}});
}

void AgentClient::admin_set(int trx, AdminState state) {
  call("admin_set", {{"trx", trx}, {"state", std::string(to_string(state))}});
}

BerReading AgentClient::get_ber(int trx, double window_s) {
  const auto r = call("get_ber", {{"trx", trx}, {"window_s", window_s}});
  BerReading out;
  out.ber = r.at("ber").get<double>();
  out.window_s = r.at("window_s").get<double>();
  out.mode_id = r.at("mode_id").get<std::string>();
  out.freq_thz = r.at("freq_thz").get<double>();
  out.timestamp = r.at("timestamp").get<double>();
  return out;
}

nlohmann::json AgentClient::telemetry(int trx) { return call("get_telemetry", {{"trx", trx}}); }

}  // namespace fastwdm
