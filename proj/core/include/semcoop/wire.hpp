#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semcoop/knowledge.hpp"

namespace semcoop {

// Round-protocol messages. Binary frames are length-prefixed:
//   u32 LE payload length | u8 tag | u32 LE round id | body
// Scalars inside bodies are little-endian; attribute values and F1 scores
// travel as f32. A knowledge upload is encoded as
//   u16 pair id | u16 class id | f32 f1 | dim x f32 values
// both inside upload batches and (with the winning source pair) inside the
// global broadcast. A line-delimited JSON framing of the same messages is
// accepted for debugging; decoded values pass through f32 so both framings
// quantize identically.

struct HelloMsg {
  PairId pair_id = 0;
  std::uint16_t num_classes = 0;
  std::uint16_t dimension = 0;
};

struct UploadBatchMsg {
  PairId pair_id = 0;
  std::vector<KnowledgeUpload> uploads;
};

struct GlobalBroadcastMsg {
  GlobalSkb global;
};

struct RoundBarrierMsg {};

struct ErrorMsg {
  std::string message;
};

struct RoundMessage {
  std::uint32_t round_id = 0;
  std::variant<HelloMsg, UploadBatchMsg, GlobalBroadcastMsg, RoundBarrierMsg,
               ErrorMsg>
      body;
};

namespace wire_tag {
inline constexpr std::uint8_t kHello = 0x01;
inline constexpr std::uint8_t kUploadBatch = 0x02;
inline constexpr std::uint8_t kGlobalBroadcast = 0x03;
inline constexpr std::uint8_t kRoundBarrier = 0x04;
inline constexpr std::uint8_t kError = 0x05;
}  // namespace wire_tag

// Payload only; the 4-byte length prefix is added by the connection layer.
std::vector<std::uint8_t> encode_payload(const RoundMessage& msg);
RoundMessage decode_payload(const std::vector<std::uint8_t>& payload);

// JSON text framing, one message per line (no trailing newline included).
std::string encode_json_line(const RoundMessage& msg);
RoundMessage decode_json_line(const std::string& line);

// f32 round trip applied to every scalar that would cross the wire.
// The simulated transport uses this so that simulated and socket rounds
// produce identical results.
KnowledgeUpload quantize_for_wire(const KnowledgeUpload& upload);

}  // namespace semcoop
