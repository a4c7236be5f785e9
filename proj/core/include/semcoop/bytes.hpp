#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace semcoop {

// Little-endian byte packing shared by the SKB binary file form and the
// coordination wire protocol.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v & 0xff));
    buf_.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      buf_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    u32(bits);
  }
  const std::vector<std::uint8_t>& bytes() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {}

  std::uint8_t u8() { return data_[need(1)]; }
  std::uint16_t u16() {
    const std::size_t o = need(2);
    return static_cast<std::uint16_t>(data_[o]) |
           (static_cast<std::uint16_t>(data_[o + 1]) << 8);
  }
  std::uint32_t u32() {
    const std::size_t o = need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(data_[o + i]) << (8 * i);
    }
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::size_t remaining() const { return size_ - pos_; }
  bool done() const { return pos_ == size_; }

 private:
  std::size_t need(std::size_t n) {
    if (pos_ + n > size_) {
      throw std::runtime_error("truncated binary payload");
    }
    const std::size_t o = pos_;
    pos_ += n;
    return o;
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace semcoop
