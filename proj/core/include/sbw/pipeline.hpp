// Stage drivers behind the command line: generate, probe, train, campaign,
// analyze, and the end-to-end pipeline. Every stage writes tab-separated
// report files into the output directory and returns the paths it wrote.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sbw/config.hpp"
#include "sbw/polarization.hpp"

namespace sbw {

// Aborts carry the stage name; files written by completed stages persist.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error("stage " + stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

std::vector<std::string> cmd_generate(const RunConfig& cfg, const std::string& out_dir);
std::vector<std::string> cmd_probe(const RunConfig& cfg, const std::string& out_dir);
std::vector<std::string> cmd_train(const RunConfig& cfg, const std::string& out_dir);
std::vector<std::string> cmd_campaign(const RunConfig& cfg, const std::string& out_dir);
std::vector<std::string> cmd_pipeline(const RunConfig& cfg, const std::string& out_dir);

struct AnalyzeRequest {
  std::vector<std::string> ccdf_metrics;  // in-degree, out-degree, msg-in, msg-out
  bool pagerank = false;
  bool hits = false;
  bool percentile = false;
  std::optional<UserId> node;  // required by percentile
  bool correlation = false;
  bool intra_inter = false;
  bool fccv = false;
  bool timeline = false;
  std::optional<std::string> keyword;
  Layer layer = Layer::social;
};

std::vector<std::string> cmd_analyze(const RunConfig& cfg, const AnalyzeRequest& request,
                                     const std::string& out_dir);

}  // namespace sbw
