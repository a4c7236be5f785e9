#include "semcoop/round.hpp"

#include <stdexcept>

namespace semcoop {

namespace {

UplinkStats stats_for(PairId pair, std::uint32_t uploaded,
                      std::size_t dimension, const RoundOptions& opts) {
  auto it = opts.distances_m.find(pair);
  if (it == opts.distances_m.end()) {
    throw std::invalid_argument("no distance configured for pair " +
                                std::to_string(pair));
  }
  return compute_uplink_stats(pair, uploaded,
                              static_cast<std::uint32_t>(dimension),
                              it->second, opts.link);
}

}  // namespace

CooperationResult run_cooperation_round(
    std::vector<PairState>& states, const std::vector<ClassScores>& pre_scores,
    const GroundTruthTable& truth, const RoundOptions& opts,
    Transport& transport) {
  if (states.size() != pre_scores.size()) {
    throw std::invalid_argument("one score set per pair required");
  }
  for (const auto& s : states) {
    if (s.training_round == 0) {
      throw std::logic_error("pair " + std::to_string(s.pair_id) +
                             " must be trained and locally updated before "
                             "cooperation");
    }
  }

  std::vector<UploadBatchMsg> batches;
  batches.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    UploadBatchMsg batch;
    batch.pair_id = states[i].pair_id;
    batch.uploads = select_knowledge(states[i].local, pre_scores[i],
                                     opts.gamma, states[i].pair_id);
    batches.push_back(std::move(batch));
  }

  CooperationResult result;
  result.global = transport.exchange(opts.round_id, batches);

  result.pairs.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    PairState& state = states[i];
    const Skb merged = merge_reference(result.global, state.local);
    state = train_surrogate(std::move(state), merged);
    EvalOutcome outcome =
        evaluate_and_update(state, truth, opts.samples_per_class);
    state.local = outcome.updated.with_role(SkbRole::enhanced);

    PairRoundRecord record;
    record.pair_id = state.pair_id;
    record.pre = pre_scores[i];
    record.post = std::move(outcome.scores);
    record.uplink =
        stats_for(state.pair_id,
                  static_cast<std::uint32_t>(batches[i].uploads.size()),
                  truth.dimension(), opts);
    result.pairs.push_back(std::move(record));
  }
  return result;
}

std::vector<PairRoundRecord> run_pair_client(Connection& conn,
                                             PairState& state,
                                             const ClassScores& initial_scores,
                                             const GroundTruthTable& truth,
                                             const PairClientOptions& opts) {
  conn.send(RoundMessage{
      0, HelloMsg{state.pair_id, truth.num_classes(),
                  static_cast<std::uint16_t>(truth.dimension())}});

  std::vector<PairRoundRecord> records;
  ClassScores scores = initial_scores;
  for (std::uint32_t round = 1; round <= opts.rounds; ++round) {
    UploadBatchMsg batch;
    batch.pair_id = state.pair_id;
    batch.uploads =
        select_knowledge(state.local, scores, opts.gamma, state.pair_id);
    const auto uploaded = static_cast<std::uint32_t>(batch.uploads.size());
    conn.send(RoundMessage{round, std::move(batch)});

    auto msg = conn.receive();
    if (!msg) {
      throw RoundAbortedError(round, "server closed before broadcast");
    }
    if (auto* err = std::get_if<ErrorMsg>(&msg->body)) {
      throw RoundAbortedError(round, err->message);
    }
    auto* bcast = std::get_if<GlobalBroadcastMsg>(&msg->body);
    if (bcast == nullptr || msg->round_id != round) {
      throw RoundAbortedError(round, "unexpected message from server");
    }

    const Skb merged = merge_reference(bcast->global, state.local);
    state = train_surrogate(std::move(state), merged);
    EvalOutcome outcome =
        evaluate_and_update(state, truth, opts.samples_per_class);
    state.local = outcome.updated.with_role(SkbRole::enhanced);

    conn.send(RoundMessage{round, RoundBarrierMsg{}});

    PairRoundRecord record;
    record.pair_id = state.pair_id;
    record.pre = scores;
    record.post = outcome.scores;
    record.uplink = compute_uplink_stats(
        state.pair_id, uploaded, static_cast<std::uint32_t>(truth.dimension()),
        opts.distance_m, opts.link);
    scores = outcome.scores;
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace semcoop
