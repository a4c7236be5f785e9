#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semcoop/skb.hpp"

namespace semcoop {

// The dataset's default attribute table: one reference vector per class.
class GroundTruthTable {
 public:
  GroundTruthTable(std::uint16_t num_classes, std::size_t dimension,
                   std::vector<AttributeVector> entries);

  std::uint16_t num_classes() const { return num_classes_; }
  std::size_t dimension() const { return dimension_; }
  const AttributeVector& of(ClassId m) const { return entries_[m - 1]; }

  Skb as_skb(SkbRole role) const;

 private:
  std::uint16_t num_classes_;
  std::size_t dimension_;
  std::vector<AttributeVector> entries_;
};

// Synthetic table with i.i.d. uniform [0,1] entries, reproducible from seed.
GroundTruthTable synthetic_ground_truth(std::uint16_t num_classes,
                                        std::size_t dimension,
                                        std::uint64_t seed);

// Load a real attribute table (M rows x d columns CSV).
GroundTruthTable ground_truth_from_csv(const std::string& path);

}  // namespace semcoop
