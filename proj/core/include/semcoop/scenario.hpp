#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "semcoop/agent.hpp"
#include "semcoop/channel.hpp"

namespace semcoop {

// Invalid or malformed scenario input; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GammaGrid {
  double start = 0.5;
  double stop = 1.0;
  double step = 0.05;

  std::vector<double> values() const;
};

struct GroundTruthConfig {
  std::string source = "synthetic";  // or "csv"
  std::uint64_t seed = 1;
  std::string csv_path;
};

struct LinkConfig {
  double beta0_db = -30.0;
  double reference_distance_m = 10.0;
  double path_loss_exponent = 3.0;
  double bandwidth_hz = 1e6;
  double tx_power_dbm = 10.0;
  std::string noise_preset = "paper-results";
  std::optional<double> noise_dbm;  // explicit value wins over the preset
  std::uint32_t quantization_bits = 10;

  double resolved_noise_dbm() const;
  LinkParams to_params() const;
};

struct SocketConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7850;
};

struct InitSpec {
  std::string fill = "uninformative";  // or "noisy"
  double noise_std = 0.8;
  // ranges flipping individual classes away from the fill directive
  std::vector<std::pair<ClassId, ClassId>> uninformative_ranges;
  std::vector<std::pair<ClassId, ClassId>> noisy_ranges;
};

struct PairConfig {
  PairId id = 0;
  double distance_m = 0.0;
  InitSpec init;
  std::optional<SurrogateParams> surrogate;  // overrides scenario default
};

// Recorded for documentation only: the generation task the compression
// ratios belong to is not simulated.
struct CompressionRatios {
  std::optional<double> theta;
  std::optional<double> b;
};

struct ScenarioConfig {
  std::string name = "unnamed";
  std::uint16_t num_classes = 0;
  std::uint16_t dimension = 0;
  std::size_t samples_per_class = 80;
  std::uint64_t master_seed = 0;
  std::uint32_t rounds = 1;
  std::string transport = "sim";
  double gamma = 0.85;
  std::optional<GammaGrid> gamma_grid;
  GroundTruthConfig ground_truth;
  SurrogateParams surrogate;
  LinkConfig link;
  SocketConfig socket;
  CompressionRatios compression_ratios;
  std::vector<PairConfig> pairs;

  std::vector<std::string> defaults_applied;  // provenance for the manifest

  std::vector<double> gamma_values() const;
  std::map<PairId, double> distances() const;
  SurrogateParams surrogate_for(const PairConfig& pair) const;
  InitPattern init_pattern_for(const PairConfig& pair) const;

  void validate() const;
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_json(const nlohmann::json& j,
                                  const std::string& origin);

// Fully resolved configuration (defaults filled in); loading it back yields
// the same scenario.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

GroundTruthTable load_ground_truth(const ScenarioConfig& cfg);

}  // namespace semcoop
