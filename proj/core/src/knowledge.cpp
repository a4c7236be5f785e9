#include "semcoop/knowledge.hpp"

#include <stdexcept>

namespace semcoop {

std::vector<KnowledgeUpload> select_knowledge(const Skb& local_skb,
                                              const ClassScores& scores,
                                              double gamma, PairId pair_id) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("gamma must lie in [0,1]");
  }
  if (scores.num_classes() != local_skb.num_classes() ||
      local_skb.size() != local_skb.num_classes()) {
    throw std::invalid_argument(
        "scores and local SKB must cover all classes");
  }
  std::vector<KnowledgeUpload> selected;
  for (ClassId m = 1; m <= scores.num_classes(); ++m) {
    const double f1 = scores.of(m).f1;
    if (f1 > gamma) {
      selected.push_back(KnowledgeUpload{pair_id, m, f1, local_skb.at(m)});
    }
  }
  return selected;
}

void GlobalSkb::offer(const KnowledgeUpload& upload) {
  auto it = entries_.find(upload.class_id);
  if (it == entries_.end()) {
    entries_.emplace(upload.class_id,
                     GlobalEntry{upload.vector, upload.f1, upload.pair_id});
    return;
  }
  GlobalEntry& cur = it->second;
  const bool better =
      upload.f1 > cur.f1 ||
      (upload.f1 == cur.f1 && upload.pair_id < cur.source_pair);
  if (better) {
    cur = GlobalEntry{upload.vector, upload.f1, upload.pair_id};
  }
}

std::vector<KnowledgeUpload> GlobalSkb::to_uploads() const {
  std::vector<KnowledgeUpload> uploads;
  uploads.reserve(entries_.size());
  for (const auto& [m, e] : entries_) {
    uploads.push_back(KnowledgeUpload{e.source_pair, m, e.f1, e.vector});
  }
  return uploads;
}

GlobalSkb aggregate_global(std::span<const KnowledgeUpload> uploads) {
  GlobalSkb global;
  for (const auto& u : uploads) {
    global.offer(u);
  }
  return global;
}

Skb merge_reference(const GlobalSkb& global, const Skb& fallback) {
  if (fallback.size() != fallback.num_classes()) {
    throw std::invalid_argument("fallback SKB must cover all classes");
  }
  std::map<ClassId, AttributeVector> entries;
  for (ClassId m = 1; m <= fallback.num_classes(); ++m) {
    if (global.contains(m)) {
      entries.emplace(m, global.at(m).vector);
    } else {
      entries.emplace(m, fallback.at(m));
    }
  }
  return Skb(SkbRole::global, fallback.num_classes(), std::move(entries));
}

}  // namespace semcoop
