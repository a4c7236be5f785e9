#pragma once

#include <iosfwd>
#include <string>

#include "semcoop/scenario.hpp"
#include "semcoop/sweep.hpp"

namespace semcoop {

inline constexpr const char* kVersion = "0.1.0";

struct ReportPaths {
  std::string manifest;
  std::string sweep_csv;
  std::string class_f1_csv;
  std::string summary_csv;
};

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_class_f1_csv(std::ostream& out, const SweepResult& result);
void write_summary_csv(std::ostream& out, const SweepResult& result);
void write_manifest(std::ostream& out, const ScenarioConfig& cfg);

// Executes the configured run (single gamma or sweep) and writes
// manifest.json, sweep.csv, class_f1.csv and summary.csv into out_dir.
ReportPaths run_report(const ScenarioConfig& cfg, const std::string& out_dir);

}  // namespace semcoop
