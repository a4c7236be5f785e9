// semcoop: cooperative semantic-knowledge-base update simulator.
//
// Subcommands:
//   run    execute the scenario at a single selection threshold
//   sweep  execute the scenario across the configured gamma grid
//   serve  stand up the aggregation server (socket mode)
//   join   run one pair as a socket client against a server

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "semcoop/report.hpp"
#include "semcoop/round.hpp"
#include "semcoop/scenario.hpp"
#include "semcoop/server.hpp"
#include "semcoop/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::optional<std::string> transport;
  std::optional<std::string> noise_preset;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_gamma = true) {
  cmd->add_option("--config", flags.config_path, "Scenario config file")
      ->required();
  if (with_gamma) {
    cmd->add_option("--gamma", flags.gamma,
                    "Selection threshold override (single value)");
  }
  cmd->add_option("--seed", flags.seed, "Master seed override");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--transport", flags.transport,
                  "Transport override: sim or socket");
  cmd->add_option("--noise-preset", flags.noise_preset,
                  "Noise preset override: paper-text or paper-results");
}

semcoop::ScenarioConfig load_with_overrides(const CommonFlags& flags) {
  semcoop::ScenarioConfig cfg = semcoop::load_scenario(flags.config_path);
  if (flags.gamma) {
    if (*flags.gamma < 0.0 || *flags.gamma > 1.0) {
      throw semcoop::ConfigError("--gamma must lie in [0,1]");
    }
    cfg.gamma = *flags.gamma;
  }
  if (flags.seed) {
    cfg.master_seed = *flags.seed;
  }
  if (flags.transport) {
    cfg.transport = *flags.transport;
  }
  if (flags.noise_preset) {
    cfg.link.noise_preset = *flags.noise_preset;
    cfg.link.noise_dbm.reset();
  }
  cfg.validate();
  return cfg;
}

int cmd_run(const CommonFlags& flags) {
  semcoop::ScenarioConfig cfg = load_with_overrides(flags);
  cfg.gamma_grid.reset();  // single-threshold run
  const auto paths = semcoop::run_report(cfg, flags.out_dir);
  std::cout << "wrote " << paths.manifest << ", " << paths.sweep_csv << ", "
            << paths.class_f1_csv << ", " << paths.summary_csv << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonFlags& flags) {
  semcoop::ScenarioConfig cfg = load_with_overrides(flags);
  if (!cfg.gamma_grid) {
    cfg.gamma_grid = semcoop::GammaGrid{};  // 0.50..1.00 step 0.05
    cfg.defaults_applied.push_back(
        "gamma_grid (0.50..1.00 step 0.05, grid not stated in source)");
  }
  const auto paths = semcoop::run_report(cfg, flags.out_dir);
  std::cout << "wrote " << paths.manifest << ", " << paths.sweep_csv << ", "
            << paths.class_f1_csv << ", " << paths.summary_csv << "\n";
  return kExitOk;
}

int cmd_serve(const CommonFlags& flags, std::optional<std::uint16_t> port) {
  semcoop::ScenarioConfig cfg = load_with_overrides(flags);

  semcoop::ServerOptions opts;
  opts.host = cfg.socket.host;
  opts.port = port.value_or(cfg.socket.port);
  opts.expected_pairs = static_cast<std::uint16_t>(cfg.pairs.size());
  opts.rounds = cfg.rounds;
  opts.num_classes = cfg.num_classes;
  opts.dimension = cfg.dimension;

  semcoop::SkbServer server(opts);
  std::cout << "listening on " << opts.host << ":" << server.port()
            << ", waiting for " << opts.expected_pairs << " pairs\n";
  const auto records = server.run();

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(flags.out_dir, ec);
  const std::string path =
      (fs::path(flags.out_dir) / "server_rounds.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  out << "round,pair,m_l,payload_bits,rate_bps,latency_s,global_complete\n";
  const semcoop::LinkParams link = cfg.link.to_params();
  const auto distances = cfg.distances();
  char buf[64];
  for (const auto& rec : records) {
    for (const auto& [pair, m_l] : rec.uploads_per_pair) {
      const auto stats = semcoop::compute_uplink_stats(
          pair, m_l, cfg.dimension, distances.at(pair), link);
      out << rec.round_id << ',' << pair << ',' << m_l << ',' << stats.payload
          << ',';
      std::snprintf(buf, sizeof(buf), "%.12g", stats.rate_bps);
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.12g", stats.latency_s);
      out << buf << ',' << (rec.global.complete(cfg.num_classes) ? 1 : 0)
          << '\n';
    }
    std::cout << "round " << rec.round_id << ": global SKB has "
              << rec.global.size() << "/" << cfg.num_classes << " classes\n";
  }
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_join(const CommonFlags& flags, std::uint16_t pair_id,
             const std::string& server_addr, const std::string& wire) {
  semcoop::ScenarioConfig cfg = load_with_overrides(flags);

  const semcoop::PairConfig* pair_cfg = nullptr;
  for (const auto& p : cfg.pairs) {
    if (p.id == pair_id) {
      pair_cfg = &p;
    }
  }
  if (pair_cfg == nullptr) {
    throw semcoop::ConfigError("pair " + std::to_string(pair_id) +
                               " not present in scenario");
  }

  std::string host = cfg.socket.host;
  std::uint16_t port = cfg.socket.port;
  if (!server_addr.empty()) {
    const auto colon = server_addr.rfind(':');
    if (colon == std::string::npos) {
      throw semcoop::ConfigError("--server expects host:port");
    }
    host = server_addr.substr(0, colon);
    port = static_cast<std::uint16_t>(
        std::stoi(server_addr.substr(colon + 1)));
  }
  semcoop::WireFormat format = semcoop::WireFormat::binary;
  if (wire == "json") {
    format = semcoop::WireFormat::json;
  } else if (wire != "binary") {
    throw semcoop::ConfigError("--wire expects binary or json");
  }

  const semcoop::GroundTruthTable truth = semcoop::load_ground_truth(cfg);
  semcoop::PairState state =
      semcoop::make_pair(pair_cfg->id, cfg.init_pattern_for(*pair_cfg), truth,
                         cfg.surrogate_for(*pair_cfg), cfg.master_seed);
  const semcoop::Skb initial = state.local;
  state = semcoop::train_surrogate(std::move(state), initial);
  semcoop::EvalOutcome pre =
      semcoop::evaluate_and_update(state, truth, cfg.samples_per_class);
  state.local = std::move(pre.updated);
  std::cout << "pair " << pair_id
            << " pre-cooperation macro F1: " << pre.scores.macro_f1 << "\n";

  semcoop::PairClientOptions opts;
  opts.gamma = cfg.gamma;
  opts.samples_per_class = cfg.samples_per_class;
  opts.rounds = cfg.rounds;
  opts.link = cfg.link.to_params();
  opts.distance_m = pair_cfg->distance_m;
  opts.wire = format;

  semcoop::Connection conn = semcoop::connect_to(host, port, format);
  const auto records =
      semcoop::run_pair_client(conn, state, pre.scores, truth, opts);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(flags.out_dir, ec);
  const std::string path =
      (fs::path(flags.out_dir) /
       ("pair_" + std::to_string(pair_id) + "_rounds.csv"))
          .string();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  out << "round,pair,m_l,payload_bits,latency_s,macro_f1_pre,macro_f1_post\n";
  char buf[64];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << (i + 1) << ',' << r.pair_id << ',' << r.uplink.uploaded_classes
        << ',' << r.uplink.payload << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", r.uplink.latency_s);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.9g", r.pre.macro_f1);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.9g", r.post.macro_f1);
    out << buf << '\n';
    std::cout << "pair " << pair_id << " round " << (i + 1)
              << " post-cooperation macro F1: " << r.post.macro_f1 << "\n";
  }
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative SKB update simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Single-threshold run");
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Gamma-grid sweep");
  add_common(sweep, sweep_flags, /*with_gamma=*/false);

  CommonFlags serve_flags;
  std::optional<std::uint16_t> serve_port;
  CLI::App* serve = app.add_subcommand("serve", "Aggregation server");
  add_common(serve, serve_flags);
  serve->add_option("--port", serve_port, "Listen port override");

  CommonFlags join_flags;
  std::uint16_t join_pair = 0;
  std::string join_server;
  std::string join_wire = "binary";
  CLI::App* join = app.add_subcommand("join", "Run one pair as a client");
  add_common(join, join_flags);
  join->add_option("--pair", join_pair, "Pair id to run")->required();
  join->add_option("--server", join_server, "Server address host:port");
  join->add_option("--wire", join_wire, "Wire framing: binary or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_flags);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_flags);
    }
    if (serve->parsed()) {
      return cmd_serve(serve_flags, serve_port);
    }
    if (join->parsed()) {
      return cmd_join(join_flags, join_pair, join_server, join_wire);
    }
  } catch (const semcoop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
