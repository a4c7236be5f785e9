#include "semcoop/skb.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace semcoop {

AttributeVector::AttributeVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (double& v : values_) {
    v = std::clamp(v, 0.0, 1.0);
  }
}

double squared_distance(const AttributeVector& a, const AttributeVector& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("attribute vector dimension mismatch");
  }
  double acc = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double diff = av[i] - bv[i];
    acc += diff * diff;
  }
  return acc;
}

std::string to_string(SkbRole role) {
  switch (role) {
    case SkbRole::initial:
      return "initial";
    case SkbRole::updated:
      return "updated";
    case SkbRole::global:
      return "global";
    case SkbRole::enhanced:
      return "enhanced";
  }
  return "unknown";
}

Skb::Skb(SkbRole role, std::uint16_t num_classes,
         std::map<ClassId, AttributeVector> entries)
    : role_(role), num_classes_(num_classes), entries_(std::move(entries)) {
  if (role_ != SkbRole::global && entries_.size() != num_classes_) {
    throw std::invalid_argument("SKB with role " + to_string(role_) +
                                " must have exactly " +
                                std::to_string(num_classes_) + " entries, got " +
                                std::to_string(entries_.size()));
  }
  for (const auto& [m, vec] : entries_) {
    if (m < 1 || m > num_classes_) {
      throw std::invalid_argument("class id " + std::to_string(m) +
                                  " outside 1.." + std::to_string(num_classes_));
    }
    if (dimension_ == 0) {
      dimension_ = vec.dimension();
    } else if (vec.dimension() != dimension_) {
      throw std::invalid_argument("SKB entries have mixed dimensions");
    }
  }
}

const AttributeVector& Skb::at(ClassId m) const {
  auto it = entries_.find(m);
  if (it == entries_.end()) {
    throw std::out_of_range("class " + std::to_string(m) + " not in SKB");
  }
  return it->second;
}

Skb Skb::with_role(SkbRole role) const {
  return Skb(role, num_classes_, entries_);
}

std::pair<ClassId, const AttributeVector*> nearest_match(
    const AttributeVector& query, const Skb& skb) {
  if (skb.empty()) {
    throw std::invalid_argument("empty knowledge base");
  }
  if (skb.dimension() != query.dimension()) {
    throw std::invalid_argument("query dimension " +
                                std::to_string(query.dimension()) +
                                " does not match SKB dimension " +
                                std::to_string(skb.dimension()));
  }
  ClassId best = 0;
  const AttributeVector* best_vec = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  // map iteration is ascending in class id, so strict < keeps the lowest id
  // on ties
  for (const auto& [m, vec] : skb.entries()) {
    const double dist = squared_distance(query, vec);
    if (dist < best_dist) {
      best_dist = dist;
      best = m;
      best_vec = &vec;
    }
  }
  return {best, best_vec};
}

Skb update_skb(
    const std::map<ClassId, std::vector<AttributeVector>>& predictions,
    std::uint16_t num_classes) {
  std::map<ClassId, AttributeVector> means;
  for (ClassId m = 1; m <= num_classes; ++m) {
    auto it = predictions.find(m);
    if (it == predictions.end() || it->second.empty()) {
      throw std::invalid_argument("no samples for class " + std::to_string(m));
    }
    const auto& samples = it->second;
    const std::size_t d = samples.front().dimension();
    std::vector<double> mean(d, 0.0);
    for (const auto& s : samples) {
      if (s.dimension() != d) {
        throw std::invalid_argument("sample dimension mismatch in class " +
                                    std::to_string(m));
      }
      for (std::size_t i = 0; i < d; ++i) {
        mean[i] += s[i];
      }
    }
    const double n = static_cast<double>(samples.size());
    for (double& v : mean) {
      v /= n;
    }
    means.emplace(m, AttributeVector(std::move(mean)));
  }
  if (predictions.size() != num_classes) {
    throw std::invalid_argument("predictions for unknown classes present");
  }
  return Skb(SkbRole::updated, num_classes, std::move(means));
}

}  // namespace semcoop
