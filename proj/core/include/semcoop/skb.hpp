#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace semcoop {

using ClassId = std::uint16_t;  // classes are numbered 1..M
using PairId = std::uint16_t;

// Length-d vector of attribute intensities. Elements are clipped to [0,1]
// at construction; instances are immutable afterwards.
class AttributeVector {
 public:
  AttributeVector() = default;
  explicit AttributeVector(std::vector<double> values);

  std::size_t dimension() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const AttributeVector& other) const = default;

 private:
  std::vector<double> values_;
};

double squared_distance(const AttributeVector& a, const AttributeVector& b);

enum class SkbRole { initial, updated, global, enhanced };

std::string to_string(SkbRole role);

// Semantic knowledge base: ordered map class-id -> attribute vector.
// Roles initial/updated/enhanced must cover all M classes; a global-role
// SKB may be partial (classes can be missing).
class Skb {
 public:
  Skb() = default;
  Skb(SkbRole role, std::uint16_t num_classes,
      std::map<ClassId, AttributeVector> entries);

  SkbRole role() const { return role_; }
  std::uint16_t num_classes() const { return num_classes_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool contains(ClassId m) const { return entries_.count(m) != 0; }
  const AttributeVector& at(ClassId m) const;
  const std::map<ClassId, AttributeVector>& entries() const { return entries_; }

  // Same entries under a different role tag (validated again).
  Skb with_role(SkbRole role) const;

 private:
  SkbRole role_ = SkbRole::initial;
  std::uint16_t num_classes_ = 0;
  std::size_t dimension_ = 0;
  std::map<ClassId, AttributeVector> entries_;
};

// Entry of `skb` nearest to `query` in Euclidean distance, together with its
// class index. Ties break to the lowest class id.
std::pair<ClassId, const AttributeVector*> nearest_match(
    const AttributeVector& query, const Skb& skb);

// Element-wise mean of the predicted vectors of each class (the updated-SKB
// rule). Keys of `predictions` must be exactly 1..num_classes.
Skb update_skb(
    const std::map<ClassId, std::vector<AttributeVector>>& predictions,
    std::uint16_t num_classes);

}  // namespace semcoop
