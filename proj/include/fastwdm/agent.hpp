#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fastwdm/protocol.hpp"
#include "fastwdm/world.hpp"

namespace fastwdm {

/// Muxponder agent. Serves get_characteristics, configure, admin_set,
/// get_ber and get_telemetry for one muxponder of the world. Requests for
/// the same transceiver are handled one at a time in arrival order.
class Agent {
 public:
  Agent(World& world, std::string mux_id);

  const std::string& mux_id() const noexcept { return mux_id_; }

  ProtocolMessage handle(const ProtocolMessage& request);
  /// Decodes, handles and encodes. Undecodable frames get an error reply
  /// with id 0 (or the id if it could be read).
  std::string handle_line(std::string_view line);

 private:
  // FIFO ticket lock, one per transceiver.
  struct TicketLock {
    std::mutex mu;
    std::condition_variable cv;
    std::uint64_t next = 0;
    std::uint64_t serving = 0;
  };
  class Turn;

  nlohmann::json dispatch(const std::string& method, const nlohmann::json& params);
  TicketLock& lock_for(int trx);
  int trx_param(const nlohmann::json& params) const;

  World& world_;
  std::string mux_id_;
  std::vector<std::unique_ptr<TicketLock>> locks_;
};

}  // namespace fastwdm
