#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semcoop/knowledge.hpp"

namespace semcoop {

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  std::uint16_t expected_pairs = 0;
  std::uint32_t rounds = 1;
  std::uint16_t num_classes = 0;
  std::uint16_t dimension = 0;
  int timeout_ms = 30000;
};

// Aggregation server for the cooperative update protocol. Accepts exactly
// expected_pairs clients, then per round: collects one upload batch from
// every pair, aggregates the global SKB, broadcasts it, and waits for every
// pair's round barrier. Any dropout aborts the round for everyone.
class SkbServer {
 public:
  explicit SkbServer(ServerOptions opts);
  ~SkbServer();

  SkbServer(const SkbServer&) = delete;
  SkbServer& operator=(const SkbServer&) = delete;

  std::uint16_t port() const { return bound_port_; }

  struct RoundRecord {
    std::uint32_t round_id = 0;
    GlobalSkb global;
    std::map<PairId, std::uint32_t> uploads_per_pair;
  };

  // Blocks until all rounds complete (or throws RoundAbortedError).
  std::vector<RoundRecord> run();

 private:
  ServerOptions opts_;
  int listen_fd_ = -1;
  std::uint16_t bound_port_ = 0;
};

}  // namespace semcoop
