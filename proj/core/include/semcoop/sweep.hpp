#pragma once

#include <vector>

#include "semcoop/round.hpp"
#include "semcoop/scenario.hpp"

namespace semcoop {

// Pairs after Alg. 1 lines 2-3: trained on their initial SKBs and locally
// updated once. Sweeps branch from this snapshot so that only the selection
// threshold varies across gamma values.
struct PreparedScenario {
  GroundTruthTable truth;
  std::vector<PairState> states;
  std::vector<ClassScores> pre_scores;
};

PreparedScenario prepare_pairs(const ScenarioConfig& cfg);

struct SweepRow {
  double gamma = 0.0;
  PairId pair = 0;
  std::uint32_t uploaded_classes = 0;
  std::uint64_t payload_bits = 0;
  double gain = 0.0;
  double rate_bps = 0.0;
  double latency_s = 0.0;
  double macro_f1_pre = 0.0;
  double macro_f1_post = 0.0;
  bool global_complete = false;
  ClassScores pre;
  ClassScores post;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (gamma, pair)
};

// Runs the configured cooperation rounds once per gamma value, all branches
// starting from the same prepared snapshot.
SweepResult sweep_gamma(const ScenarioConfig& cfg);
SweepResult sweep_gamma(const ScenarioConfig& cfg,
                        const PreparedScenario& prepared, Transport& transport);

}  // namespace semcoop
