#include "semcoop/sweep.hpp"

namespace semcoop {

PreparedScenario prepare_pairs(const ScenarioConfig& cfg) {
  GroundTruthTable truth = load_ground_truth(cfg);

  std::vector<PairState> states;
  std::vector<ClassScores> pre_scores;
  states.reserve(cfg.pairs.size());
  pre_scores.reserve(cfg.pairs.size());

  for (const auto& pair_cfg : cfg.pairs) {
    PairState state =
        make_pair(pair_cfg.id, cfg.init_pattern_for(pair_cfg), truth,
                  cfg.surrogate_for(pair_cfg), cfg.master_seed);
    const Skb initial = state.local;
    state = train_surrogate(std::move(state), initial);
    EvalOutcome outcome =
        evaluate_and_update(state, truth, cfg.samples_per_class);
    state.local = std::move(outcome.updated);
    states.push_back(std::move(state));
    pre_scores.push_back(std::move(outcome.scores));
  }
  return PreparedScenario{std::move(truth), std::move(states),
                          std::move(pre_scores)};
}

SweepResult sweep_gamma(const ScenarioConfig& cfg,
                        const PreparedScenario& prepared,
                        Transport& transport) {
  SweepResult result;
  const LinkParams link = cfg.link.to_params();
  const auto distances = cfg.distances();

  for (const double gamma : cfg.gamma_values()) {
    // branch from the snapshot: only the threshold differs across gammas
    std::vector<PairState> states = prepared.states;
    std::vector<ClassScores> scores = prepared.pre_scores;

    CooperationResult last;
    std::vector<UplinkStats> accumulated(states.size());
    bool complete = false;
    for (std::uint32_t round = 1; round <= cfg.rounds; ++round) {
      RoundOptions opts;
      opts.gamma = gamma;
      opts.samples_per_class = cfg.samples_per_class;
      opts.round_id = round;
      opts.link = link;
      opts.distances_m = distances;
      last = run_cooperation_round(states, scores, prepared.truth, opts,
                                   transport);
      for (std::size_t i = 0; i < states.size(); ++i) {
        scores[i] = last.pairs[i].post;
        if (round == 1) {
          accumulated[i] = last.pairs[i].uplink;
        } else {
          // multi-round runs report summed payload and latency
          accumulated[i].uploaded_classes +=
              last.pairs[i].uplink.uploaded_classes;
          accumulated[i].payload += last.pairs[i].uplink.payload;
          accumulated[i].latency_s += last.pairs[i].uplink.latency_s;
        }
      }
      complete = last.global.complete(cfg.num_classes);
    }

    for (std::size_t i = 0; i < states.size(); ++i) {
      SweepRow row;
      row.gamma = gamma;
      row.pair = last.pairs[i].pair_id;
      row.uploaded_classes = accumulated[i].uploaded_classes;
      row.payload_bits = accumulated[i].payload;
      row.gain = accumulated[i].gain;
      row.rate_bps = accumulated[i].rate_bps;
      row.latency_s = accumulated[i].latency_s;
      row.pre = prepared.pre_scores[i];
      row.post = last.pairs[i].post;
      row.macro_f1_pre = row.pre.macro_f1;
      row.macro_f1_post = row.post.macro_f1;
      row.global_complete = complete;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

SweepResult sweep_gamma(const ScenarioConfig& cfg) {
  const PreparedScenario prepared = prepare_pairs(cfg);
  auto transport =
      make_transport(cfg.transport, cfg.num_classes, cfg.dimension);
  return sweep_gamma(cfg, prepared, *transport);
}

}  // namespace semcoop
