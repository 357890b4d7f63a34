// Run configuration: one root seed plus per-stage parameters, loaded from
// a JSON file whose keys mirror the struct fields. All stage randomness is
// derived from the root seed through named substreams.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sbw/linkpred.hpp"
#include "sbw/simulator.hpp"

namespace sbw {

struct ClassifierParams {
  int tree_count = 50;
  TreeParams tree;
  std::size_t training_pairs = 20000;
  std::size_t folds = 10;
};

struct ProbeParams {
  std::size_t rounds = 15;
  std::uint64_t interval_ticks = 1;
};

struct CampaignParams {
  std::size_t min_books = 10;
  double frac_model = 0.5;
  double frac_reciprocal = 0.25;
  std::optional<std::string> eligible_tag;
};

struct AnalysisParams {
  double damping = 0.85;
  double tol = 1e-10;
  int max_iters = 200;
  std::size_t window = 50;
  std::size_t null_runs = 50;
  std::size_t fccv_runs = 100;
};

struct InputPaths {
  std::string graph;
  std::string profiles;
  std::string messages;
  std::string factions;
  std::string events;  // probe event log, consumed by the campaign stage
  std::string model;   // classifier model file
  std::string out_dir = ".";
};

struct RunConfig {
  std::uint64_t seed = 0;  // mandatory in config files
  GeneratorConfig generator;
  ResponseModel response;
  ClassifierParams classifier;
  ProbeParams probe;
  CampaignParams campaign;
  AnalysisParams analysis;
  InputPaths paths;
};

RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& cfg, const std::string& path);
RunConfig parse_run_config(const std::string& text, std::string_view origin = "<string>");
std::string run_config_to_json(const RunConfig& cfg);

// Stable hex digest of the canonical serialization; embedded in every
// report so outputs can be traced to their configuration.
std::string config_digest(const RunConfig& cfg);

// "# seed <seed>\n# config <digest>\n"
std::string report_header(const RunConfig& cfg);

}  // namespace sbw
