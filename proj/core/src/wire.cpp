#include "semcoop/wire.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "semcoop/bytes.hpp"

namespace semcoop {

namespace {

using nlohmann::json;

void encode_upload(ByteWriter& w, const KnowledgeUpload& u) {
  w.u16(u.pair_id);
  w.u16(u.class_id);
  w.f32(static_cast<float>(u.f1));
  for (double v : u.vector.values()) {
    w.f32(static_cast<float>(v));
  }
}

KnowledgeUpload decode_upload(ByteReader& r, std::uint16_t dim) {
  KnowledgeUpload u;
  u.pair_id = r.u16();
  u.class_id = r.u16();
  u.f1 = static_cast<double>(r.f32());
  std::vector<double> vals(dim);
  for (std::uint16_t i = 0; i < dim; ++i) {
    vals[i] = static_cast<double>(r.f32());
  }
  u.vector = AttributeVector(std::move(vals));
  return u;
}

std::uint16_t batch_dimension(const std::vector<KnowledgeUpload>& uploads) {
  return uploads.empty()
             ? 0
             : static_cast<std::uint16_t>(uploads.front().vector.dimension());
}

json upload_to_json(const KnowledgeUpload& u) {
  json values = json::array();
  for (double v : u.vector.values()) {
    values.push_back(static_cast<float>(v));
  }
  return json{{"pair", u.pair_id},
              {"class", u.class_id},
              {"f1", static_cast<float>(u.f1)},
              {"values", std::move(values)}};
}

KnowledgeUpload upload_from_json(const json& j) {
  KnowledgeUpload u;
  u.pair_id = j.at("pair").get<PairId>();
  u.class_id = j.at("class").get<ClassId>();
  u.f1 = static_cast<double>(j.at("f1").get<float>());
  std::vector<double> vals;
  for (const auto& v : j.at("values")) {
    vals.push_back(static_cast<double>(v.get<float>()));
  }
  u.vector = AttributeVector(std::move(vals));
  return u;
}

}  // namespace

std::vector<std::uint8_t> encode_payload(const RoundMessage& msg) {
  ByteWriter w;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, HelloMsg>) {
          w.u8(wire_tag::kHello);
          w.u32(msg.round_id);
          w.u16(body.pair_id);
          w.u16(body.num_classes);
          w.u16(body.dimension);
        } else if constexpr (std::is_same_v<T, UploadBatchMsg>) {
          w.u8(wire_tag::kUploadBatch);
          w.u32(msg.round_id);
          w.u16(body.pair_id);
          w.u16(static_cast<std::uint16_t>(body.uploads.size()));
          w.u16(batch_dimension(body.uploads));
          for (const auto& u : body.uploads) {
            encode_upload(w, u);
          }
        } else if constexpr (std::is_same_v<T, GlobalBroadcastMsg>) {
          w.u8(wire_tag::kGlobalBroadcast);
          w.u32(msg.round_id);
          const auto uploads = body.global.to_uploads();
          w.u16(static_cast<std::uint16_t>(uploads.size()));
          w.u16(batch_dimension(uploads));
          for (const auto& u : uploads) {
            encode_upload(w, u);
          }
        } else if constexpr (std::is_same_v<T, RoundBarrierMsg>) {
          w.u8(wire_tag::kRoundBarrier);
          w.u32(msg.round_id);
        } else if constexpr (std::is_same_v<T, ErrorMsg>) {
          w.u8(wire_tag::kError);
          w.u32(msg.round_id);
          w.u32(static_cast<std::uint32_t>(body.message.size()));
          for (char c : body.message) {
            w.u8(static_cast<std::uint8_t>(c));
          }
        }
      },
      msg.body);
  return w.take();
}

RoundMessage decode_payload(const std::vector<std::uint8_t>& payload) {
  ByteReader r(payload.data(), payload.size());
  const std::uint8_t tag = r.u8();
  RoundMessage msg;
  msg.round_id = r.u32();
  switch (tag) {
    case wire_tag::kHello: {
      HelloMsg body;
      body.pair_id = r.u16();
      body.num_classes = r.u16();
      body.dimension = r.u16();
      msg.body = body;
      break;
    }
    case wire_tag::kUploadBatch: {
      UploadBatchMsg body;
      body.pair_id = r.u16();
      const std::uint16_t count = r.u16();
      const std::uint16_t dim = r.u16();
      body.uploads.reserve(count);
      for (std::uint16_t i = 0; i < count; ++i) {
        body.uploads.push_back(decode_upload(r, dim));
      }
      msg.body = std::move(body);
      break;
    }
    case wire_tag::kGlobalBroadcast: {
      const std::uint16_t count = r.u16();
      const std::uint16_t dim = r.u16();
      GlobalBroadcastMsg body;
      for (std::uint16_t i = 0; i < count; ++i) {
        body.global.offer(decode_upload(r, dim));
      }
      msg.body = std::move(body);
      break;
    }
    case wire_tag::kRoundBarrier:
      msg.body = RoundBarrierMsg{};
      break;
    case wire_tag::kError: {
      const std::uint32_t len = r.u32();
      std::string text;
      text.reserve(len);
      for (std::uint32_t i = 0; i < len; ++i) {
        text.push_back(static_cast<char>(r.u8()));
      }
      msg.body = ErrorMsg{std::move(text)};
      break;
    }
    default:
      throw std::runtime_error("unknown wire tag " + std::to_string(tag));
  }
  if (!r.done()) {
    throw std::runtime_error("trailing bytes in wire payload");
  }
  return msg;
}

std::string encode_json_line(const RoundMessage& msg) {
  json j;
  j["round"] = msg.round_id;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, HelloMsg>) {
          j["type"] = "hello";
          j["pair"] = body.pair_id;
          j["classes"] = body.num_classes;
          j["dim"] = body.dimension;
        } else if constexpr (std::is_same_v<T, UploadBatchMsg>) {
          j["type"] = "upload_batch";
          j["pair"] = body.pair_id;
          json uploads = json::array();
          for (const auto& u : body.uploads) {
            uploads.push_back(upload_to_json(u));
          }
          j["uploads"] = std::move(uploads);
        } else if constexpr (std::is_same_v<T, GlobalBroadcastMsg>) {
          j["type"] = "global_broadcast";
          json entries = json::array();
          for (const auto& u : body.global.to_uploads()) {
            entries.push_back(upload_to_json(u));
          }
          j["entries"] = std::move(entries);
        } else if constexpr (std::is_same_v<T, RoundBarrierMsg>) {
          j["type"] = "round_barrier";
        } else if constexpr (std::is_same_v<T, ErrorMsg>) {
          j["type"] = "error";
          j["message"] = body.message;
        }
      },
      msg.body);
  return j.dump();
}

RoundMessage decode_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("bad JSON frame: ") + e.what());
  }
  RoundMessage msg;
  msg.round_id = j.at("round").get<std::uint32_t>();
  const std::string type = j.at("type").get<std::string>();
  if (type == "hello") {
    HelloMsg body;
    body.pair_id = j.at("pair").get<PairId>();
    body.num_classes = j.at("classes").get<std::uint16_t>();
    body.dimension = j.at("dim").get<std::uint16_t>();
    msg.body = body;
  } else if (type == "upload_batch") {
    UploadBatchMsg body;
    body.pair_id = j.at("pair").get<PairId>();
    for (const auto& u : j.at("uploads")) {
      body.uploads.push_back(upload_from_json(u));
    }
    msg.body = std::move(body);
  } else if (type == "global_broadcast") {
    GlobalBroadcastMsg body;
    for (const auto& u : j.at("entries")) {
      body.global.offer(upload_from_json(u));
    }
    msg.body = std::move(body);
  } else if (type == "round_barrier") {
    msg.body = RoundBarrierMsg{};
  } else if (type == "error") {
    msg.body = ErrorMsg{j.at("message").get<std::string>()};
  } else {
    throw std::runtime_error("unknown JSON message type '" + type + "'");
  }
  return msg;
}

KnowledgeUpload quantize_for_wire(const KnowledgeUpload& upload) {
  KnowledgeUpload q = upload;
  q.f1 = static_cast<double>(static_cast<float>(upload.f1));
  std::vector<double> vals;
  vals.reserve(upload.vector.dimension());
  for (double v : upload.vector.values()) {
    vals.push_back(static_cast<double>(static_cast<float>(v)));
  }
  q.vector = AttributeVector(std::move(vals));
  return q;
}

}  // namespace semcoop
