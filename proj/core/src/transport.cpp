#include "semcoop/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <future>
#include <thread>

#include "semcoop/server.hpp"

namespace semcoop {

namespace {

constexpr std::size_t kMaxFrameBytes = 64u << 20;

void set_timeout(int fd, int timeout_ms) {
  timeval tv{};
  tv.tv_sec = timeout_ms / 1000;
  tv.tv_usec = (timeout_ms % 1000) * 1000;
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void send_all(int fd, const std::uint8_t* data, std::size_t size) {
  std::size_t sent = 0;
  while (sent < size) {
    const ssize_t n = ::send(fd, data + sent, size - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      throw std::runtime_error(std::string("send failed: ") +
                               std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

}  // namespace

Connection::Connection(int fd, WireFormat format) : fd_(fd), format_(format) {}

Connection::~Connection() { close(); }

Connection::Connection(Connection&& other) noexcept
    : fd_(other.fd_),
      format_(other.format_),
      detect_format_(other.detect_format_),
      buffer_(std::move(other.buffer_)) {
  other.fd_ = -1;
}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    format_ = other.format_;
    detect_format_ = other.detect_format_;
    buffer_ = std::move(other.buffer_);
    other.fd_ = -1;
  }
  return *this;
}

void Connection::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

bool Connection::fill_buffer(std::size_t min_bytes) {
  while (buffer_.size() < min_bytes) {
    std::uint8_t chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n == 0) {
      return false;  // orderly shutdown
    }
    if (n < 0) {
      throw std::runtime_error(std::string("recv failed: ") +
                               std::strerror(errno));
    }
    buffer_.insert(buffer_.end(), chunk, chunk + n);
  }
  return true;
}

void Connection::send(const RoundMessage& msg) {
  if (fd_ < 0) {
    throw std::runtime_error("connection closed");
  }
  if (format_ == WireFormat::binary) {
    const auto payload = encode_payload(msg);
    std::uint8_t prefix[4];
    const auto len = static_cast<std::uint32_t>(payload.size());
    for (int i = 0; i < 4; ++i) {
      prefix[i] = static_cast<std::uint8_t>((len >> (8 * i)) & 0xff);
    }
    send_all(fd_, prefix, 4);
    send_all(fd_, payload.data(), payload.size());
  } else {
    std::string line = encode_json_line(msg);
    line.push_back('\n');
    send_all(fd_, reinterpret_cast<const std::uint8_t*>(line.data()),
             line.size());
  }
}

std::optional<RoundMessage> Connection::receive() {
  if (fd_ < 0) {
    throw std::runtime_error("connection closed");
  }
  if (detect_format_) {
    if (!fill_buffer(2)) {
      return std::nullopt;
    }
    // a JSON line opens with '{' followed by printable text; a binary frame
    // starts with a little-endian length whose second byte is rarely
    // printable for sane frame sizes
    if (buffer_[0] == '{' && buffer_[1] >= 0x20) {
      format_ = WireFormat::json;
    }
    detect_format_ = false;
  }
  if (format_ == WireFormat::binary) {
    if (!fill_buffer(4)) {
      return std::nullopt;
    }
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) {
      len |= static_cast<std::uint32_t>(buffer_[i]) << (8 * i);
    }
    if (len > kMaxFrameBytes) {
      throw std::runtime_error("oversized frame (" + std::to_string(len) +
                               " bytes)");
    }
    if (!fill_buffer(4 + static_cast<std::size_t>(len))) {
      throw std::runtime_error("peer closed mid-frame");
    }
    std::vector<std::uint8_t> payload(buffer_.begin() + 4,
                                      buffer_.begin() + 4 + len);
    buffer_.erase(buffer_.begin(), buffer_.begin() + 4 + len);
    return decode_payload(payload);
  }
  // JSON line mode
  for (;;) {
    auto nl = std::find(buffer_.begin(), buffer_.end(), '\n');
    if (nl != buffer_.end()) {
      std::string line(buffer_.begin(), nl);
      buffer_.erase(buffer_.begin(), nl + 1);
      if (line.empty()) {
        continue;
      }
      return decode_json_line(line);
    }
    if (buffer_.size() > kMaxFrameBytes) {
      throw std::runtime_error("oversized JSON line");
    }
    const std::size_t want = buffer_.size() + 1;
    if (!fill_buffer(want)) {
      if (buffer_.empty()) {
        return std::nullopt;
      }
      throw std::runtime_error("peer closed mid-line");
    }
  }
}

Connection connect_to(const std::string& host, std::uint16_t port,
                      WireFormat format, int timeout_ms) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) {
    throw std::runtime_error(std::string("socket failed: ") +
                             std::strerror(errno));
  }
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw std::runtime_error("bad address '" + host + "'");
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw std::runtime_error("connect to " + host + ":" +
                             std::to_string(port) + " failed: " + err);
  }
  set_timeout(fd, timeout_ms);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return Connection(fd, format);
}

GlobalSkb SimTransport::exchange(std::uint32_t round_id,
                                 const std::vector<UploadBatchMsg>& batches) {
  std::vector<KnowledgeUpload> received;
  for (const auto& batch : batches) {
    // through the codec, as on the socket path
    const auto payload =
        encode_payload(RoundMessage{round_id, UploadBatchMsg{batch}});
    const auto decoded = decode_payload(payload);
    const auto& decoded_batch = std::get<UploadBatchMsg>(decoded.body);
    received.insert(received.end(), decoded_batch.uploads.begin(),
                    decoded_batch.uploads.end());
  }
  const GlobalSkb global = aggregate_global(received);
  const auto payload =
      encode_payload(RoundMessage{round_id, GlobalBroadcastMsg{global}});
  const auto decoded = decode_payload(payload);
  return std::get<GlobalBroadcastMsg>(decoded.body).global;
}

SocketLoopbackTransport::SocketLoopbackTransport(std::uint16_t num_classes,
                                                 std::uint16_t dimension)
    : num_classes_(num_classes), dimension_(dimension) {}

GlobalSkb SocketLoopbackTransport::exchange(
    std::uint32_t round_id, const std::vector<UploadBatchMsg>& batches) {
  ServerOptions opts;
  opts.expected_pairs = static_cast<std::uint16_t>(batches.size());
  opts.rounds = 1;
  opts.num_classes = num_classes_;
  opts.dimension = dimension_;
  SkbServer server(opts);
  const std::uint16_t port = server.port();

  auto server_result = std::async(std::launch::async, [&server] {
    return server.run();
  });

  // Small enough batches fit the socket buffers, so the upload phase can
  // run before any broadcast is consumed.
  std::vector<Connection> conns;
  conns.reserve(batches.size());
  for (const auto& batch : batches) {
    Connection conn = connect_to("127.0.0.1", port, WireFormat::binary);
    conn.send(RoundMessage{
        0, HelloMsg{batch.pair_id, num_classes_, dimension_}});
    conn.send(RoundMessage{round_id, UploadBatchMsg{batch}});
    conns.push_back(std::move(conn));
  }

  std::optional<GlobalSkb> global;
  for (auto& conn : conns) {
    auto msg = conn.receive();
    if (!msg) {
      throw RoundAbortedError(round_id, "server closed before broadcast");
    }
    if (auto* err = std::get_if<ErrorMsg>(&msg->body)) {
      throw RoundAbortedError(round_id, err->message);
    }
    auto* bcast = std::get_if<GlobalBroadcastMsg>(&msg->body);
    if (bcast == nullptr || msg->round_id != round_id) {
      throw RoundAbortedError(round_id, "unexpected message from server");
    }
    if (!global) {
      global = bcast->global;
    }
    conn.send(RoundMessage{round_id, RoundBarrierMsg{}});
  }
  for (auto& conn : conns) {
    conn.close();
  }
  server_result.get();  // propagate server-side failures
  if (!global) {
    throw RoundAbortedError(round_id, "no pairs participated");
  }
  return *global;
}

std::unique_ptr<Transport> make_transport(const std::string& kind,
                                          std::uint16_t num_classes,
                                          std::uint16_t dimension) {
  if (kind == "sim") {
    return std::make_unique<SimTransport>();
  }
  if (kind == "socket") {
    return std::make_unique<SocketLoopbackTransport>(num_classes, dimension);
  }
  throw std::invalid_argument("unknown transport '" + kind +
                              "' (expected sim or socket)");
}

}  // namespace semcoop
