#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "semcoop/metrics.hpp"
#include "semcoop/skb.hpp"

namespace semcoop {

// Wire unit of the score-based selection scheme: one class entry a pair
// considers well understood, with the F1 score that justified it.
struct KnowledgeUpload {
  PairId pair_id = 0;
  ClassId class_id = 0;
  double f1 = 0.0;
  AttributeVector vector;
};

// Classes whose F1 strictly exceeds gamma, with their updated-SKB entries.
std::vector<KnowledgeUpload> select_knowledge(const Skb& local_skb,
                                              const ClassScores& scores,
                                              double gamma, PairId pair_id);

struct GlobalEntry {
  AttributeVector vector;
  double f1 = 0.0;
  PairId source_pair = 0;
};

// Server-side aggregate: per class, the upload with the maximum F1 score
// (ties break to the lowest pair id). Classes nobody uploaded are absent.
class GlobalSkb {
 public:
  GlobalSkb() = default;

  bool contains(ClassId m) const { return entries_.count(m) != 0; }
  const GlobalEntry& at(ClassId m) const { return entries_.at(m); }
  const std::map<ClassId, GlobalEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool complete(std::uint16_t num_classes) const {
    return entries_.size() == num_classes;
  }

  void offer(const KnowledgeUpload& upload);

  std::vector<KnowledgeUpload> to_uploads() const;

 private:
  std::map<ClassId, GlobalEntry> entries_;
};

GlobalSkb aggregate_global(std::span<const KnowledgeUpload> uploads);

// Training reference for the finetune step: global entries where present,
// the pair's own current local entry otherwise.
Skb merge_reference(const GlobalSkb& global, const Skb& fallback);

}  // namespace semcoop
