#include "semcoop/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace semcoop {

namespace {

using nlohmann::json;

void check_known_fields(const json& obj, const std::string& path,
                        const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown field '" + path + key + "'");
    }
  }
}

template <typename T>
T get_field(const json& obj, const std::string& path, const std::string& key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("field '" + path + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const std::string& path, const std::string& key,
         T fallback, std::vector<std::string>* defaults,
         const std::string& note) {
  if (obj.contains(key)) {
    return get_field<T>(obj, path, key);
  }
  if (defaults != nullptr) {
    defaults->push_back(path + key + " (" + note + ")");
  }
  return fallback;
}

std::pair<ClassId, ClassId> parse_range(const std::string& text,
                                        const std::string& path) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) {
      const int v = std::stoi(text);
      return {static_cast<ClassId>(v), static_cast<ClassId>(v)};
    }
    const int a = std::stoi(text.substr(0, dash));
    const int b = std::stoi(text.substr(dash + 1));
    return {static_cast<ClassId>(a), static_cast<ClassId>(b)};
  } catch (const std::exception&) {
    throw ConfigError("field '" + path + "': bad class range '" + text + "'");
  }
}

std::vector<std::pair<ClassId, ClassId>> parse_ranges(const json& value,
                                                      const std::string& path) {
  std::vector<std::pair<ClassId, ClassId>> ranges;
  if (value.is_string()) {
    ranges.push_back(parse_range(value.get<std::string>(), path));
  } else if (value.is_array()) {
    for (const auto& item : value) {
      if (!item.is_string()) {
        throw ConfigError("field '" + path + "': ranges must be strings");
      }
      ranges.push_back(parse_range(item.get<std::string>(), path));
    }
  } else {
    throw ConfigError("field '" + path +
                      "': expected a range string or list of ranges");
  }
  return ranges;
}

json ranges_to_json(const std::vector<std::pair<ClassId, ClassId>>& ranges) {
  json out = json::array();
  for (const auto& [a, b] : ranges) {
    out.push_back(a == b ? std::to_string(a)
                         : std::to_string(a) + "-" + std::to_string(b));
  }
  return out;
}

InitSpec parse_init(const json& obj, const std::string& path,
                    std::vector<std::string>* defaults) {
  check_known_fields(obj, path,
                     {"fill", "noise_std", "uninformative", "noisy"});
  InitSpec init;
  init.fill = get_or<std::string>(obj, path, "fill", "uninformative", nullptr,
                                  "");
  if (init.fill != "uninformative" && init.fill != "noisy") {
    throw ConfigError("field '" + path +
                      "fill': expected 'uninformative' or 'noisy'");
  }
  init.noise_std = get_or<double>(obj, path, "noise_std", 0.8, defaults,
                                  "paper init noise, variance 0.64");
  if (obj.contains("uninformative")) {
    init.uninformative_ranges =
        parse_ranges(obj.at("uninformative"), path + "uninformative");
  }
  if (obj.contains("noisy")) {
    init.noisy_ranges = parse_ranges(obj.at("noisy"), path + "noisy");
  }
  return init;
}

SurrogateParams parse_surrogate(const json& obj, const std::string& path,
                                SurrogateParams base,
                                std::vector<std::string>* defaults) {
  check_known_fields(obj, path, {"leakage", "noise_std"});
  SurrogateParams params = base;
  params.leakage =
      get_or<double>(obj, path, "leakage", base.leakage, defaults,
                     "calibrated surrogate default");
  params.noise_std =
      get_or<double>(obj, path, "noise_std", base.noise_std, defaults,
                     "calibrated surrogate default");
  return params;
}

}  // namespace

std::vector<double> GammaGrid::values() const {
  std::vector<double> vals;
  for (int i = 0;; ++i) {
    const double g = start + step * i;
    if (g > stop + step * 0.5) {
      break;
    }
    vals.push_back(std::min(g, stop));
  }
  return vals;
}

double LinkConfig::resolved_noise_dbm() const {
  if (noise_dbm) {
    return *noise_dbm;
  }
  if (noise_preset == "paper-results") {
    return kNoiseDbmPaperResults;
  }
  if (noise_preset == "paper-text") {
    return kNoiseDbmPaperText;
  }
  throw ConfigError("unknown noise preset '" + noise_preset +
                    "' (expected paper-results or paper-text)");
}

LinkParams LinkConfig::to_params() const {
  try {
    return make_link_params(beta0_db, reference_distance_m, path_loss_exponent,
                            bandwidth_hz, tx_power_dbm, resolved_noise_dbm(),
                            quantization_bits);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("link: ") + e.what());
  }
}

std::vector<double> ScenarioConfig::gamma_values() const {
  if (gamma_grid) {
    return gamma_grid->values();
  }
  return {gamma};
}

std::map<PairId, double> ScenarioConfig::distances() const {
  std::map<PairId, double> out;
  for (const auto& p : pairs) {
    out[p.id] = p.distance_m;
  }
  return out;
}

SurrogateParams ScenarioConfig::surrogate_for(const PairConfig& pair) const {
  return pair.surrogate.value_or(surrogate);
}

InitPattern ScenarioConfig::init_pattern_for(const PairConfig& pair) const {
  const InitSpec& spec = pair.init;
  const InitDirective fill = spec.fill == "noisy"
                                 ? InitDirective::truth_plus_noise
                                 : InitDirective::uninformative;
  InitPattern pattern(num_classes, fill, spec.noise_std);
  for (const auto& [a, b] : spec.uninformative_ranges) {
    pattern.set_range(a, b, InitDirective::uninformative);
  }
  for (const auto& [a, b] : spec.noisy_ranges) {
    pattern.set_range(a, b, InitDirective::truth_plus_noise);
  }
  return pattern;
}

void ScenarioConfig::validate() const {
  if (num_classes < 1) {
    throw ConfigError("'classes' must be >= 1");
  }
  if (dimension < 1) {
    throw ConfigError("'attributes' must be >= 1");
  }
  if (samples_per_class < 1) {
    throw ConfigError("'samples_per_class' must be >= 1");
  }
  if (rounds < 1) {
    throw ConfigError("'rounds' must be >= 1");
  }
  if (transport != "sim" && transport != "socket") {
    throw ConfigError("'transport' must be 'sim' or 'socket'");
  }
  if (gamma < 0.0 || gamma > 1.0) {
    throw ConfigError("'gamma' must lie in [0,1], got " +
                      std::to_string(gamma));
  }
  if (gamma_grid) {
    if (gamma_grid->step <= 0.0) {
      throw ConfigError("'gamma_grid.step' must be positive");
    }
    if (gamma_grid->start > gamma_grid->stop) {
      throw ConfigError("'gamma_grid.start' must not exceed stop");
    }
    if (gamma_grid->start < 0.0 || gamma_grid->stop > 1.0) {
      throw ConfigError("'gamma_grid' must lie within [0,1]");
    }
  }
  if (ground_truth.source != "synthetic" && ground_truth.source != "csv") {
    throw ConfigError("'ground_truth.source' must be 'synthetic' or 'csv'");
  }
  if (ground_truth.source == "csv" && ground_truth.csv_path.empty()) {
    throw ConfigError("'ground_truth.path' required for csv source");
  }
  if (pairs.empty()) {
    throw ConfigError("'pairs' must list at least one pair");
  }
  std::set<PairId> ids;
  for (const auto& p : pairs) {
    if (p.id < 1 || p.id > pairs.size()) {
      throw ConfigError("pair id " + std::to_string(p.id) +
                        " outside 1..L (L=" + std::to_string(pairs.size()) +
                        ")");
    }
    if (!ids.insert(p.id).second) {
      throw ConfigError("duplicate pair id " + std::to_string(p.id));
    }
    if (p.distance_m <= 0.0) {
      throw ConfigError("pair " + std::to_string(p.id) +
                        ": distance must be positive");
    }
    const SurrogateParams sp = surrogate_for(p);
    if (sp.leakage < 0.0 || sp.leakage > 1.0) {
      throw ConfigError("pair " + std::to_string(p.id) +
                        ": surrogate leakage must lie in [0,1]");
    }
    if (sp.noise_std < 0.0) {
      throw ConfigError("pair " + std::to_string(p.id) +
                        ": surrogate noise_std must be >= 0");
    }
    if (p.init.noise_std < 0.0) {
      throw ConfigError("pair " + std::to_string(p.id) +
                        ": init noise_std must be >= 0");
    }
    for (const auto& ranges :
         {p.init.uninformative_ranges, p.init.noisy_ranges}) {
      for (const auto& [a, b] : ranges) {
        if (a < 1 || b > num_classes || a > b) {
          throw ConfigError("pair " + std::to_string(p.id) +
                            ": class range " + std::to_string(a) + "-" +
                            std::to_string(b) + " outside 1.." +
                            std::to_string(num_classes));
        }
      }
    }
  }
  link.to_params();  // throws ConfigError on bad link values
}

ScenarioConfig scenario_from_json(const json& j, const std::string& origin) {
  if (!j.is_object()) {
    throw ConfigError(origin + ": scenario must be a JSON object");
  }
  check_known_fields(
      j, "",
      {"name", "classes", "attributes", "samples_per_class", "master_seed",
       "rounds", "transport", "gamma", "gamma_grid", "ground_truth",
       "surrogate", "link", "socket", "compression_ratios", "pairs"});

  for (const char* required : {"classes", "attributes", "master_seed",
                               "pairs"}) {
    if (!j.contains(required)) {
      throw ConfigError(origin + ": required field '" +
                        std::string(required) + "' missing");
    }
  }

  ScenarioConfig cfg;
  auto* defaults = &cfg.defaults_applied;
  cfg.name = get_or<std::string>(j, "", "name", "unnamed", nullptr, "");
  cfg.num_classes = get_field<std::uint16_t>(j, "", "classes");
  cfg.dimension = get_field<std::uint16_t>(j, "", "attributes");
  cfg.samples_per_class =
      get_or<std::size_t>(j, "", "samples_per_class", 80, defaults,
                          "paper shared test set: 80 samples per class");
  cfg.master_seed = get_field<std::uint64_t>(j, "", "master_seed");
  cfg.rounds = get_or<std::uint32_t>(j, "", "rounds", 1, defaults,
                                     "single cooperation round");
  cfg.transport = get_or<std::string>(j, "", "transport", "sim", defaults,
                                      "in-process simulated transport");
  cfg.gamma = get_or<double>(j, "", "gamma", 0.85, defaults,
                             "paper operating threshold");

  if (j.contains("gamma_grid")) {
    const json& g = j.at("gamma_grid");
    check_known_fields(g, "gamma_grid.", {"start", "stop", "step"});
    GammaGrid grid;
    grid.start = get_field<double>(g, "gamma_grid.", "start");
    grid.stop = get_field<double>(g, "gamma_grid.", "stop");
    grid.step = get_field<double>(g, "gamma_grid.", "step");
    cfg.gamma_grid = grid;
  }

  if (j.contains("ground_truth")) {
    const json& g = j.at("ground_truth");
    check_known_fields(g, "ground_truth.", {"source", "seed", "path"});
    cfg.ground_truth.source =
        get_or<std::string>(g, "ground_truth.", "source", "synthetic",
                            nullptr, "");
    cfg.ground_truth.seed =
        get_or<std::uint64_t>(g, "ground_truth.", "seed", 1, defaults,
                              "fixed synthetic-table seed");
    cfg.ground_truth.csv_path =
        get_or<std::string>(g, "ground_truth.", "path", "", nullptr, "");
  } else {
    defaults->push_back("ground_truth (synthetic uniform table, seed 1)");
  }

  SurrogateParams base;  // calibrated defaults from agent.hpp
  if (j.contains("surrogate")) {
    cfg.surrogate =
        parse_surrogate(j.at("surrogate"), "surrogate.", base, defaults);
  } else {
    cfg.surrogate = base;
    defaults->push_back("surrogate (calibrated defaults)");
  }

  if (j.contains("link")) {
    const json& l = j.at("link");
    check_known_fields(
        l, "link.",
        {"beta0_db", "reference_distance_m", "path_loss_exponent",
         "bandwidth_hz", "tx_power_dbm", "noise_preset", "noise_dbm",
         "quantization_bits"});
    cfg.link.beta0_db = get_or<double>(l, "link.", "beta0_db", -30.0, defaults,
                                       "paper reference path loss");
    cfg.link.reference_distance_m =
        get_or<double>(l, "link.", "reference_distance_m", 10.0, defaults,
                       "paper reference distance");
    cfg.link.path_loss_exponent =
        get_or<double>(l, "link.", "path_loss_exponent", 3.0, defaults,
                       "paper path loss exponent");
    cfg.link.bandwidth_hz = get_or<double>(l, "link.", "bandwidth_hz", 1e6,
                                           defaults, "paper uplink bandwidth");
    cfg.link.tx_power_dbm = get_or<double>(l, "link.", "tx_power_dbm", 10.0,
                                           defaults, "paper uplink power");
    cfg.link.noise_preset =
        get_or<std::string>(l, "link.", "noise_preset", "paper-results",
                            defaults, "noise preset consistent with latencies");
    if (l.contains("noise_dbm")) {
      cfg.link.noise_dbm = get_field<double>(l, "link.", "noise_dbm");
    }
    cfg.link.quantization_bits =
        get_or<std::uint32_t>(l, "link.", "quantization_bits", 10, defaults,
                              "paper quantization level");
  } else {
    defaults->push_back("link (paper uplink constants, paper-results noise)");
  }

  if (j.contains("socket")) {
    const json& s = j.at("socket");
    check_known_fields(s, "socket.", {"host", "port"});
    cfg.socket.host =
        get_or<std::string>(s, "socket.", "host", "127.0.0.1", nullptr, "");
    cfg.socket.port =
        get_or<std::uint16_t>(s, "socket.", "port", 7850, nullptr, "");
  }

  if (j.contains("compression_ratios")) {
    const json& c = j.at("compression_ratios");
    check_known_fields(c, "compression_ratios.", {"theta", "b"});
    if (c.contains("theta")) {
      cfg.compression_ratios.theta =
          get_field<double>(c, "compression_ratios.", "theta");
    }
    if (c.contains("b")) {
      cfg.compression_ratios.b =
          get_field<double>(c, "compression_ratios.", "b");
    }
  }

  const json& pairs = j.at("pairs");
  if (!pairs.is_array()) {
    throw ConfigError("'pairs' must be an array");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string path = "pairs[" + std::to_string(i) + "].";
    const json& p = pairs.at(i);
    check_known_fields(p, path, {"id", "distance_m", "init", "surrogate"});
    PairConfig pc;
    pc.id = get_field<PairId>(p, path, "id");
    pc.distance_m = get_field<double>(p, path, "distance_m");
    if (p.contains("init")) {
      pc.init = parse_init(p.at("init"), path + "init.", defaults);
    } else {
      defaults->push_back(path + "init (all classes uninformative)");
    }
    if (p.contains("surrogate")) {
      pc.surrogate = parse_surrogate(p.at("surrogate"), path + "surrogate.",
                                     cfg.surrogate, nullptr);
    }
    cfg.pairs.push_back(std::move(pc));
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open scenario file '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports byte offsets; recover the line for the message
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)),
                     std::istreambuf_iterator<char>());
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) +
                      ": JSON parse error: " + e.what());
  }
  return scenario_from_json(j, path);
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["classes"] = cfg.num_classes;
  j["attributes"] = cfg.dimension;
  j["samples_per_class"] = cfg.samples_per_class;
  j["master_seed"] = cfg.master_seed;
  j["rounds"] = cfg.rounds;
  j["transport"] = cfg.transport;
  j["gamma"] = cfg.gamma;
  if (cfg.gamma_grid) {
    j["gamma_grid"] = {{"start", cfg.gamma_grid->start},
                       {"stop", cfg.gamma_grid->stop},
                       {"step", cfg.gamma_grid->step}};
  }
  j["ground_truth"] = {{"source", cfg.ground_truth.source},
                       {"seed", cfg.ground_truth.seed}};
  if (!cfg.ground_truth.csv_path.empty()) {
    j["ground_truth"]["path"] = cfg.ground_truth.csv_path;
  }
  j["surrogate"] = {{"leakage", cfg.surrogate.leakage},
                    {"noise_std", cfg.surrogate.noise_std}};
  j["link"] = {{"beta0_db", cfg.link.beta0_db},
               {"reference_distance_m", cfg.link.reference_distance_m},
               {"path_loss_exponent", cfg.link.path_loss_exponent},
               {"bandwidth_hz", cfg.link.bandwidth_hz},
               {"tx_power_dbm", cfg.link.tx_power_dbm},
               {"noise_preset", cfg.link.noise_preset},
               {"quantization_bits", cfg.link.quantization_bits}};
  if (cfg.link.noise_dbm) {
    j["link"]["noise_dbm"] = *cfg.link.noise_dbm;
  }
  j["socket"] = {{"host", cfg.socket.host}, {"port", cfg.socket.port}};
  if (cfg.compression_ratios.theta || cfg.compression_ratios.b) {
    json c = json::object();
    if (cfg.compression_ratios.theta) {
      c["theta"] = *cfg.compression_ratios.theta;
    }
    if (cfg.compression_ratios.b) {
      c["b"] = *cfg.compression_ratios.b;
    }
    j["compression_ratios"] = std::move(c);
  }
  json pairs = json::array();
  for (const auto& p : cfg.pairs) {
    json pj;
    pj["id"] = p.id;
    pj["distance_m"] = p.distance_m;
    json init;
    init["fill"] = p.init.fill;
    init["noise_std"] = p.init.noise_std;
    if (!p.init.uninformative_ranges.empty()) {
      init["uninformative"] = ranges_to_json(p.init.uninformative_ranges);
    }
    if (!p.init.noisy_ranges.empty()) {
      init["noisy"] = ranges_to_json(p.init.noisy_ranges);
    }
    pj["init"] = std::move(init);
    if (p.surrogate) {
      pj["surrogate"] = {{"leakage", p.surrogate->leakage},
                         {"noise_std", p.surrogate->noise_std}};
    }
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

GroundTruthTable load_ground_truth(const ScenarioConfig& cfg) {
  if (cfg.ground_truth.source == "csv") {
    GroundTruthTable table = ground_truth_from_csv(cfg.ground_truth.csv_path);
    if (table.num_classes() != cfg.num_classes ||
        table.dimension() != cfg.dimension) {
      throw ConfigError("ground truth CSV shape " +
                        std::to_string(table.num_classes()) + "x" +
                        std::to_string(table.dimension()) +
                        " does not match scenario " +
                        std::to_string(cfg.num_classes) + "x" +
                        std::to_string(cfg.dimension));
    }
    return table;
  }
  return synthetic_ground_truth(cfg.num_classes, cfg.dimension,
                                cfg.ground_truth.seed);
}

}  // namespace semcoop
