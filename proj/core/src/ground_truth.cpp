#include "semcoop/ground_truth.hpp"

#include <stdexcept>

#include "semcoop/rng.hpp"
#include "semcoop/skb_io.hpp"

namespace semcoop {

GroundTruthTable::GroundTruthTable(std::uint16_t num_classes,
                                   std::size_t dimension,
                                   std::vector<AttributeVector> entries)
    : num_classes_(num_classes),
      dimension_(dimension),
      entries_(std::move(entries)) {
  if (entries_.size() != num_classes_) {
    throw std::invalid_argument("ground truth table must have one entry per class");
  }
  for (const auto& e : entries_) {
    if (e.dimension() != dimension_) {
      throw std::invalid_argument("ground truth entries have mixed dimensions");
    }
  }
}

Skb GroundTruthTable::as_skb(SkbRole role) const {
  std::map<ClassId, AttributeVector> entries;
  for (ClassId m = 1; m <= num_classes_; ++m) {
    entries.emplace(m, of(m));
  }
  return Skb(role, num_classes_, std::move(entries));
}

GroundTruthTable synthetic_ground_truth(std::uint16_t num_classes,
                                        std::size_t dimension,
                                        std::uint64_t seed) {
  std::vector<AttributeVector> entries;
  entries.reserve(num_classes);
  for (ClassId m = 1; m <= num_classes; ++m) {
    RngStream rng(derive_seed(seed, streams::kGroundTruth, {m}));
    std::vector<double> vals(dimension);
    for (double& v : vals) {
      v = rng.next_double();
    }
    entries.emplace_back(std::move(vals));
  }
  return GroundTruthTable(num_classes, dimension, std::move(entries));
}

GroundTruthTable ground_truth_from_csv(const std::string& path) {
  const Skb skb = load_skb_csv(path, SkbRole::initial);
  std::vector<AttributeVector> entries;
  entries.reserve(skb.size());
  for (const auto& [m, vec] : skb.entries()) {
    entries.push_back(vec);
  }
  return GroundTruthTable(skb.num_classes(), skb.dimension(),
                          std::move(entries));
}

}  // namespace semcoop
