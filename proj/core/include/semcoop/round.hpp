#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "semcoop/agent.hpp"
#include "semcoop/channel.hpp"
#include "semcoop/knowledge.hpp"
#include "semcoop/transport.hpp"

namespace semcoop {

struct RoundOptions {
  double gamma = 0.85;
  std::size_t samples_per_class = 80;
  std::uint32_t round_id = 1;
  LinkParams link;
  std::map<PairId, double> distances_m;
};

struct PairRoundRecord {
  PairId pair_id = 0;
  ClassScores pre;   // scores entering the round
  ClassScores post;  // scores after finetuning with the merged global SKB
  UplinkStats uplink;
};

struct CooperationResult {
  GlobalSkb global;
  std::vector<PairRoundRecord> pairs;
};

// One cooperation round: score-based selection, upload, server aggregation,
// broadcast, per-pair finetune against merged(global, own local), and
// re-evaluation. `states` enter with local = K^U and leave with local = K^E
// and reference = the merged training SKB; `pre_scores[i]` belongs to
// `states[i]`.
CooperationResult run_cooperation_round(std::vector<PairState>& states,
                                        const std::vector<ClassScores>& pre_scores,
                                        const GroundTruthTable& truth,
                                        const RoundOptions& opts,
                                        Transport& transport);

// Client side of the socket protocol for one standalone pair: sends its
// selected knowledge, waits for the broadcast, finetunes, and acknowledges
// the round barrier. Returns the record for each completed round.
struct PairClientOptions {
  double gamma = 0.85;
  std::size_t samples_per_class = 80;
  std::uint32_t rounds = 1;
  LinkParams link;
  double distance_m = 0.0;
  WireFormat wire = WireFormat::binary;
};

std::vector<PairRoundRecord> run_pair_client(Connection& conn,
                                             PairState& state,
                                             const ClassScores& initial_scores,
                                             const GroundTruthTable& truth,
                                             const PairClientOptions& opts);

}  // namespace semcoop
