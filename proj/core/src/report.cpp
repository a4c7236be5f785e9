#include "semcoop/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace semcoop {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // \n endings on all platforms
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  return out;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "gamma,pair,m_l,payload_bits,gain,rate_bps,latency_s,"
         "macro_f1_pre,macro_f1_post,global_complete\n";
  for (const auto& row : result.rows) {
    out << fmt("%.6g", row.gamma) << ',' << row.pair << ','
        << row.uploaded_classes << ',' << row.payload_bits << ','
        << fmt("%.12g", row.gain) << ',' << fmt("%.12g", row.rate_bps) << ','
        << fmt("%.12g", row.latency_s) << ',' << fmt("%.9g", row.macro_f1_pre)
        << ',' << fmt("%.9g", row.macro_f1_post) << ','
        << (row.global_complete ? 1 : 0) << '\n';
  }
}

void write_class_f1_csv(std::ostream& out, const SweepResult& result) {
  out << "gamma,pair,phase,class,precision,recall,f1\n";
  for (const auto& row : result.rows) {
    const struct {
      const char* phase;
      const ClassScores* scores;
    } phases[] = {{"pre", &row.pre}, {"post", &row.post}};
    for (const auto& [phase, scores] : phases) {
      for (ClassId m = 1; m <= scores->num_classes(); ++m) {
        const auto& s = scores->of(m);
        out << fmt("%.6g", row.gamma) << ',' << row.pair << ',' << phase << ','
            << m << ',' << fmt("%.9g", s.precision) << ','
            << fmt("%.9g", s.recall) << ',' << fmt("%.9g", s.f1) << '\n';
      }
    }
  }
}

void write_summary_csv(std::ostream& out, const SweepResult& result) {
  out << "gamma,pair,macro_f1_pre,macro_f1_post\n";
  for (const auto& row : result.rows) {
    out << fmt("%.6g", row.gamma) << ',' << row.pair << ','
        << fmt("%.9g", row.macro_f1_pre) << ','
        << fmt("%.9g", row.macro_f1_post) << '\n';
  }
}

void write_manifest(std::ostream& out, const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["tool"] = "semcoop";
  j["version"] = kVersion;
  j["config"] = scenario_to_json(cfg);
  j["defaults_applied"] = cfg.defaults_applied;
  j["outputs"] = {"sweep.csv", "class_f1.csv", "summary.csv"};
  out << j.dump(2) << '\n';
}

ReportPaths run_report(const ScenarioConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw std::runtime_error("cannot create output directory '" + out_dir +
                             "'");
  }

  const SweepResult result = sweep_gamma(cfg);

  ReportPaths paths;
  paths.manifest = (fs::path(out_dir) / "manifest.json").string();
  paths.sweep_csv = (fs::path(out_dir) / "sweep.csv").string();
  paths.class_f1_csv = (fs::path(out_dir) / "class_f1.csv").string();
  paths.summary_csv = (fs::path(out_dir) / "summary.csv").string();

  {
    auto out = open_out(paths.manifest);
    write_manifest(out, cfg);
  }
  {
    auto out = open_out(paths.sweep_csv);
    write_sweep_csv(out, result);
  }
  {
    auto out = open_out(paths.class_f1_csv);
    write_class_f1_csv(out, result);
  }
  {
    auto out = open_out(paths.summary_csv);
    write_summary_csv(out, result);
  }
  return paths;
}

}  // namespace semcoop
