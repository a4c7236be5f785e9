#pragma once

#include <iosfwd>
#include <string>

#include "semcoop/skb.hpp"

namespace semcoop {

// CSV matrix form: M rows x d columns, row m holds the entry of class m.
// Only complete SKBs (all classes present) can be written this way.
void write_skb_csv(std::ostream& out, const Skb& skb);
void save_skb_csv(const std::string& path, const Skb& skb);
Skb load_skb_csv(const std::string& path, SkbRole role);

// Framed binary form, little-endian:
//   header: u16 entry count, u16 dimension
//   per entry: u16 class id, d x f32 attribute values
// The per-entry layout is the one knowledge uploads use on the wire.
std::vector<std::uint8_t> encode_skb_binary(const Skb& skb);
Skb decode_skb_binary(const std::vector<std::uint8_t>& bytes, SkbRole role,
                      std::uint16_t num_classes);
void save_skb_binary(const std::string& path, const Skb& skb);
Skb load_skb_binary(const std::string& path, SkbRole role,
                    std::uint16_t num_classes);

}  // namespace semcoop
