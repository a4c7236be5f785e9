#include "semcoop/skb_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "semcoop/bytes.hpp"

namespace semcoop {

namespace {

void require_complete(const Skb& skb) {
  if (skb.size() != skb.num_classes()) {
    throw std::invalid_argument("cannot serialize partial SKB as CSV matrix");
  }
}

}  // namespace

void write_skb_csv(std::ostream& out, const Skb& skb) {
  require_complete(skb);
  char buf[32];
  for (const auto& [m, vec] : skb.entries()) {
    const auto vals = vec.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", vals[i]);
      if (i != 0) {
        out << ',';
      }
      out << buf;
    }
    out << '\n';
  }
}

void save_skb_csv(const std::string& path, const Skb& skb) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  write_skb_csv(out, skb);
}

Skb load_skb_csv(const std::string& path, SkbRole role) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::map<ClassId, AttributeVector> entries;
  std::string line;
  std::size_t dim = 0;
  ClassId m = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    ++m;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": bad numeric cell '" + cell +
                                 "' in row " + std::to_string(m));
      }
    }
    if (dim == 0) {
      dim = vals.size();
    } else if (vals.size() != dim) {
      throw std::runtime_error(path + ": row " + std::to_string(m) +
                               " has " + std::to_string(vals.size()) +
                               " columns, expected " + std::to_string(dim));
    }
    entries.emplace(m, AttributeVector(std::move(vals)));
  }
  if (entries.empty()) {
    throw std::runtime_error(path + ": empty SKB file");
  }
  return Skb(role, m, std::move(entries));
}

std::vector<std::uint8_t> encode_skb_binary(const Skb& skb) {
  ByteWriter w;
  w.u16(static_cast<std::uint16_t>(skb.size()));
  w.u16(static_cast<std::uint16_t>(skb.dimension()));
  for (const auto& [m, vec] : skb.entries()) {
    w.u16(m);
    for (double v : vec.values()) {
      w.f32(static_cast<float>(v));
    }
  }
  return w.take();
}

Skb decode_skb_binary(const std::vector<std::uint8_t>& bytes, SkbRole role,
                      std::uint16_t num_classes) {
  ByteReader r(bytes.data(), bytes.size());
  const std::uint16_t count = r.u16();
  const std::uint16_t dim = r.u16();
  std::map<ClassId, AttributeVector> entries;
  for (std::uint16_t i = 0; i < count; ++i) {
    const ClassId m = r.u16();
    std::vector<double> vals(dim);
    for (std::uint16_t j = 0; j < dim; ++j) {
      vals[j] = static_cast<double>(r.f32());
    }
    entries.emplace(m, AttributeVector(std::move(vals)));
  }
  if (!r.done()) {
    throw std::runtime_error("trailing bytes after SKB payload");
  }
  return Skb(role, num_classes, std::move(entries));
}

void save_skb_binary(const std::string& path, const Skb& skb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  const auto bytes = encode_skb_binary(skb);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Skb load_skb_binary(const std::string& path, SkbRole role,
                    std::uint16_t num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_skb_binary(bytes, role, num_classes);
}

}  // namespace semcoop
