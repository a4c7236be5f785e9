#include "semcoop/agent.hpp"

#include <stdexcept>
#include <utility>

#include "semcoop/rng.hpp"

namespace semcoop {

InitPattern::InitPattern(std::uint16_t num_classes, InitDirective fill,
                         double noise_std)
    : directives_(num_classes, fill), noise_std_(noise_std) {
  if (noise_std < 0.0) {
    throw std::invalid_argument("init noise std must be non-negative");
  }
}

void InitPattern::set_range(ClassId first, ClassId last, InitDirective d) {
  if (first < 1 || last > num_classes() || first > last) {
    throw std::invalid_argument("init pattern range outside 1..M");
  }
  for (ClassId m = first; m <= last; ++m) {
    set(m, d);
  }
}

Skb build_initial_skb(const InitPattern& pattern,
                      const GroundTruthTable& truth, std::uint64_t seed,
                      PairId pair_id) {
  if (pattern.num_classes() != truth.num_classes()) {
    throw std::invalid_argument("init pattern does not cover all classes");
  }
  const std::size_t d = truth.dimension();
  std::map<ClassId, AttributeVector> entries;
  for (ClassId m = 1; m <= truth.num_classes(); ++m) {
    std::vector<double> vals(d);
    if (pattern.of(m) == InitDirective::uninformative) {
      vals.assign(d, 0.5);
    } else {
      RngStream rng(derive_seed(seed, streams::kInitSkb, {pair_id, m}));
      const auto& t = truth.of(m);
      for (std::size_t i = 0; i < d; ++i) {
        vals[i] = t[i] + pattern.noise_std() * rng.next_gaussian();
      }
    }
    entries.emplace(m, AttributeVector(std::move(vals)));
  }
  return Skb(SkbRole::initial, truth.num_classes(), std::move(entries));
}

PairState make_pair(PairId pair_id, const InitPattern& pattern,
                    const GroundTruthTable& truth, SurrogateParams params,
                    std::uint64_t master_seed) {
  if (params.leakage < 0.0 || params.leakage > 1.0) {
    throw std::invalid_argument("surrogate leakage must lie in [0,1]");
  }
  if (params.noise_std < 0.0) {
    throw std::invalid_argument("surrogate noise std must be non-negative");
  }
  PairState state;
  state.pair_id = pair_id;
  state.surrogate = params;
  state.seed = master_seed;
  state.local = build_initial_skb(pattern, truth, master_seed, pair_id);
  return state;
}

PairState train_surrogate(PairState state, const Skb& reference) {
  if (reference.size() != reference.num_classes()) {
    throw std::invalid_argument(
        "training reference is partial; merge the global SKB with a local "
        "fallback first");
  }
  if (!state.local.empty() &&
      reference.dimension() != state.local.dimension()) {
    throw std::invalid_argument("reference dimension mismatch");
  }
  state.reference = reference;
  state.training_round += 1;
  return state;
}

std::vector<AttributeVector> predict(const PairState& state,
                                     const GroundTruthTable& truth,
                                     ClassId class_id, std::size_t n_samples) {
  if (!state.reference) {
    throw std::logic_error("pair " + std::to_string(state.pair_id) +
                           " is untrained");
  }
  const auto& ref = state.reference->at(class_id);
  const auto& t = truth.of(class_id);
  const double lambda = state.surrogate.leakage;
  const double sigma = state.surrogate.noise_std;
  const std::size_t d = truth.dimension();

  RngStream rng(derive_seed(state.seed, streams::kPredict,
                            {state.pair_id, class_id, state.training_round}));
  std::vector<AttributeVector> samples;
  samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::vector<double> vals(d);
    for (std::size_t j = 0; j < d; ++j) {
      vals[j] = (1.0 - lambda) * t[j] + lambda * ref[j] +
                sigma * rng.next_gaussian();
    }
    samples.emplace_back(std::move(vals));  // clips to [0,1]
  }
  return samples;
}

EvalOutcome evaluate_and_update(const PairState& state,
                                const GroundTruthTable& truth,
                                std::size_t samples_per_class) {
  if (samples_per_class == 0) {
    throw std::invalid_argument("need at least one sample per class");
  }
  if (!state.reference) {
    throw std::logic_error("pair " + std::to_string(state.pair_id) +
                           " is untrained");
  }
  const std::uint16_t num_classes = truth.num_classes();

  std::map<ClassId, std::vector<AttributeVector>> predictions;
  for (ClassId m = 1; m <= num_classes; ++m) {
    predictions.emplace(m, predict(state, truth, m, samples_per_class));
  }

  // classification runs against the SKB the encoder currently operates
  // with (the training reference); the averaged SKB replaces it afterwards
  const Skb& current = *state.reference;
  std::vector<ClassId> actual;
  std::vector<ClassId> predicted;
  actual.reserve(static_cast<std::size_t>(num_classes) * samples_per_class);
  predicted.reserve(actual.capacity());
  for (const auto& [m, samples] : predictions) {
    for (const auto& s : samples) {
      actual.push_back(m);
      predicted.push_back(nearest_match(s, current).first);
    }
  }

  Skb updated = update_skb(predictions, num_classes);
  ConfusionMatrix cm = confusion_from_labels(actual, predicted, num_classes);
  ClassScores scores = compute_scores(cm);
  return EvalOutcome{std::move(updated), std::move(cm), std::move(scores)};
}

}  // namespace semcoop
