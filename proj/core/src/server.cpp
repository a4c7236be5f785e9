#include "semcoop/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

#include "semcoop/transport.hpp"

namespace semcoop {

namespace {

struct ClientSlot {
  Connection conn;
  PairId pair_id = 0;
};

void broadcast_error(std::vector<ClientSlot>& clients, std::uint32_t round_id,
                     const std::string& message) {
  for (auto& c : clients) {
    try {
      c.conn.send(RoundMessage{round_id, ErrorMsg{message}});
    } catch (const std::exception&) {
      // peer already gone
    }
  }
}

}  // namespace

SkbServer::SkbServer(ServerOptions opts) : opts_(std::move(opts)) {
  if (opts_.expected_pairs == 0) {
    throw std::invalid_argument("server needs at least one pair");
  }
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw std::runtime_error(std::string("socket failed: ") +
                             std::strerror(errno));
  }
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(opts_.port);
  if (::inet_pton(AF_INET, opts_.host.c_str(), &addr.sin_addr) != 1) {
    throw std::runtime_error("bad listen address '" + opts_.host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) !=
      0) {
    throw std::runtime_error("bind to " + opts_.host + ":" +
                             std::to_string(opts_.port) +
                             " failed: " + std::strerror(errno));
  }
  if (::listen(listen_fd_, opts_.expected_pairs) != 0) {
    throw std::runtime_error(std::string("listen failed: ") +
                             std::strerror(errno));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  bound_port_ = ntohs(bound.sin_port);
}

SkbServer::~SkbServer() {
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
  }
}

std::vector<SkbServer::RoundRecord> SkbServer::run() {
  std::vector<ClientSlot> clients;
  clients.reserve(opts_.expected_pairs);

  for (std::uint16_t i = 0; i < opts_.expected_pairs; ++i) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      throw std::runtime_error(std::string("accept failed: ") +
                               std::strerror(errno));
    }
    timeval tv{};
    tv.tv_sec = opts_.timeout_ms / 1000;
    tv.tv_usec = (opts_.timeout_ms % 1000) * 1000;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

    Connection conn(fd, WireFormat::binary);
    conn.enable_format_detection();
    auto hello = conn.receive();
    if (!hello) {
      throw std::runtime_error("client closed before hello");
    }
    auto* h = std::get_if<HelloMsg>(&hello->body);
    if (h == nullptr) {
      throw std::runtime_error("expected hello as first message");
    }
    if (h->num_classes != opts_.num_classes ||
        h->dimension != opts_.dimension) {
      conn.send(RoundMessage{
          0, ErrorMsg{"scenario mismatch: server expects M=" +
                      std::to_string(opts_.num_classes) +
                      " d=" + std::to_string(opts_.dimension)}});
      throw std::runtime_error("client scenario mismatch");
    }
    for (const auto& c : clients) {
      if (c.pair_id == h->pair_id) {
        throw std::runtime_error("duplicate pair id " +
                                 std::to_string(h->pair_id));
      }
    }
    clients.push_back(ClientSlot{std::move(conn), h->pair_id});
  }

  std::vector<RoundRecord> records;
  records.reserve(opts_.rounds);
  for (std::uint32_t round = 1; round <= opts_.rounds; ++round) {
    RoundRecord record;
    record.round_id = round;

    // collect phase: one batch from every pair, any arrival order
    std::vector<KnowledgeUpload> uploads;
    for (auto& c : clients) {
      std::optional<RoundMessage> msg;
      try {
        msg = c.conn.receive();
      } catch (const std::exception& e) {
        broadcast_error(clients, round, e.what());
        throw RoundAbortedError(round, std::string("pair ") +
                                           std::to_string(c.pair_id) + ": " +
                                           e.what());
      }
      if (!msg) {
        broadcast_error(clients, round, "pair dropout");
        throw RoundAbortedError(round, "pair " + std::to_string(c.pair_id) +
                                           " dropped out");
      }
      auto* batch = std::get_if<UploadBatchMsg>(&msg->body);
      if (batch == nullptr) {
        broadcast_error(clients, round, "protocol violation");
        throw RoundAbortedError(round, "expected upload batch from pair " +
                                           std::to_string(c.pair_id));
      }
      if (msg->round_id != round) {
        // stale-round traffic is rejected, not aggregated
        broadcast_error(clients, round, "stale round id");
        throw RoundAbortedError(
            round, "pair " + std::to_string(batch->pair_id) +
                       " sent round " + std::to_string(msg->round_id));
      }
      record.uploads_per_pair[batch->pair_id] =
          static_cast<std::uint32_t>(batch->uploads.size());
      uploads.insert(uploads.end(), batch->uploads.begin(),
                     batch->uploads.end());
    }

    record.global = aggregate_global(uploads);

    for (auto& c : clients) {
      c.conn.send(RoundMessage{round, GlobalBroadcastMsg{record.global}});
    }

    for (auto& c : clients) {
      std::optional<RoundMessage> msg;
      try {
        msg = c.conn.receive();
      } catch (const std::exception& e) {
        throw RoundAbortedError(round, std::string("barrier: ") + e.what());
      }
      if (!msg || !std::holds_alternative<RoundBarrierMsg>(msg->body) ||
          msg->round_id != round) {
        throw RoundAbortedError(round, "missing round barrier from pair " +
                                           std::to_string(c.pair_id));
      }
    }

    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace semcoop
