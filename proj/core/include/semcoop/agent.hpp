#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "semcoop/ground_truth.hpp"
#include "semcoop/metrics.hpp"
#include "semcoop/skb.hpp"

namespace semcoop {

// Per-class initialization directive for a pair's initial local SKB.
enum class InitDirective : std::uint8_t {
  uninformative,   // constant 0.5 entry
  truth_plus_noise // ground truth entry + N(0, sigma_init^2), clipped
};

class InitPattern {
 public:
  InitPattern(std::uint16_t num_classes, InitDirective fill,
              double noise_std = 0.0);

  std::uint16_t num_classes() const {
    return static_cast<std::uint16_t>(directives_.size());
  }
  double noise_std() const { return noise_std_; }
  InitDirective of(ClassId m) const { return directives_[m - 1]; }
  void set(ClassId m, InitDirective d) { directives_[m - 1] = d; }
  void set_range(ClassId first, ClassId last, InitDirective d);

 private:
  std::vector<InitDirective> directives_;
  double noise_std_;
};

// Calibrated so the bundled paper scenario lands in the published regime:
// the all-uninformative pair scores near zero before cooperation and above
// 0.8 after it, and the upload counts thin out once gamma passes 0.85.
struct SurrogateParams {
  double leakage = 0.68;   // weight of the training-reference entry
  double noise_std = 0.38; // per-element prediction noise
};

// One SemCom pair, modeled without a neural encoder: predictions are a
// convex combination of the ground-truth entry and the entry of the SKB the
// pair was last trained with, plus Gaussian noise, clipped to [0,1].
struct PairState {
  PairId pair_id = 0;
  SurrogateParams surrogate;
  std::uint64_t seed = 0;           // experiment master seed
  Skb local;                        // current local SKB (K^I, then K^U / K^E)
  std::optional<Skb> reference;     // SKB the surrogate was trained with
  std::uint32_t training_round = 0; // 0 = untrained
};

Skb build_initial_skb(const InitPattern& pattern,
                      const GroundTruthTable& truth, std::uint64_t seed,
                      PairId pair_id);

PairState make_pair(PairId pair_id, const InitPattern& pattern,
                    const GroundTruthTable& truth, SurrogateParams params,
                    std::uint64_t master_seed);

// (Re)train the surrogate against `reference` (all M classes required).
PairState train_surrogate(PairState state, const Skb& reference);

// n_samples synthetic encoder outputs for class m, deterministic in
// (seed, pair, class, training round).
std::vector<AttributeVector> predict(const PairState& state,
                                     const GroundTruthTable& truth,
                                     ClassId class_id, std::size_t n_samples);

struct EvalOutcome {
  Skb updated;  // per-class mean of this round's predictions
  ConfusionMatrix confusion;
  ClassScores scores;
};

// Runs the local update: predicts samples_per_class vectors for every class,
// averages them into the updated SKB, classifies every prediction against
// that updated SKB via nearest match, and scores the result. The caller
// installs `updated` as the pair's local SKB.
EvalOutcome evaluate_and_update(const PairState& state,
                                const GroundTruthTable& truth,
                                std::size_t samples_per_class);

}  // namespace semcoop
