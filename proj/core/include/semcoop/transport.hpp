#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semcoop/wire.hpp"

namespace semcoop {

// A transport failure that can be retried with a fresh round.
class RoundAbortedError : public std::runtime_error {
 public:
  RoundAbortedError(std::uint32_t round_id, const std::string& what)
      : std::runtime_error("round " + std::to_string(round_id) +
                           " aborted: " + what),
        round_id_(round_id) {}

  std::uint32_t round_id() const { return round_id_; }

 private:
  std::uint32_t round_id_;
};

enum class WireFormat { binary, json };

// One TCP connection speaking the round protocol. The server side detects
// the framing from the first bytes (binary frames never start with '{').
class Connection {
 public:
  Connection(int fd, WireFormat format);
  ~Connection();

  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  void send(const RoundMessage& msg);
  // nullopt on orderly peer shutdown
  std::optional<RoundMessage> receive();

  void enable_format_detection() { detect_format_ = true; }
  void close();

 private:
  bool fill_buffer(std::size_t min_bytes);

  int fd_ = -1;
  WireFormat format_ = WireFormat::binary;
  bool detect_format_ = false;
  std::vector<std::uint8_t> buffer_;
};

// Blocking TCP connect, throws on failure.
Connection connect_to(const std::string& host, std::uint16_t port,
                      WireFormat format, int timeout_ms = 30000);

// Moves upload batches to the aggregation point and the global SKB back.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual GlobalSkb exchange(std::uint32_t round_id,
                             const std::vector<UploadBatchMsg>& batches) = 0;
  virtual std::string name() const = 0;
};

// In-process transport. Batches and the broadcast still pass through the
// binary codec so results match the socket transport bit for bit.
class SimTransport : public Transport {
 public:
  GlobalSkb exchange(std::uint32_t round_id,
                     const std::vector<UploadBatchMsg>& batches) override;
  std::string name() const override { return "sim"; }
};

// Real TCP on the loopback interface: each exchange spins up an aggregation
// server session on an ephemeral port and one client connection per pair.
class SocketLoopbackTransport : public Transport {
 public:
  SocketLoopbackTransport(std::uint16_t num_classes, std::uint16_t dimension);

  GlobalSkb exchange(std::uint32_t round_id,
                     const std::vector<UploadBatchMsg>& batches) override;
  std::string name() const override { return "socket"; }

 private:
  std::uint16_t num_classes_;
  std::uint16_t dimension_;
};

std::unique_ptr<Transport> make_transport(const std::string& kind,
                                          std::uint16_t num_classes,
                                          std::uint16_t dimension);

}  // namespace semcoop
