// sbw command line: generate / probe / train / campaign / analyze /
// pipeline / recommend over seeded configs with file-based handoff.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sbw/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> graph;
  std::optional<std::string> profiles;
  std::optional<std::string> messages;
  std::optional<std::string> factions;
  std::optional<std::string> events;
  std::optional<std::string> model;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "run configuration (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed, "override the root seed");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--graph", args.graph, "edge-list file");
  cmd->add_option("--profiles", args.profiles, "profile file");
  cmd->add_option("--messages", args.messages, "message file");
  cmd->add_option("--factions", args.factions, "faction file");
  cmd->add_option("--events", args.events, "event log file");
  cmd->add_option("--model", args.model, "classifier model file");
}

sbw::RunConfig resolve_config(const CommonArgs& args, bool seed_required = true) {
  sbw::RunConfig cfg;
  if (!args.config_path.empty()) {
    cfg = sbw::load_run_config(args.config_path);
  } else if (args.seed) {
    cfg.seed = *args.seed;
    cfg.generator.seed = *args.seed;
  } else if (seed_required) {
    throw std::runtime_error("either --config or --seed is required");
  }
  if (args.seed) {
    cfg.seed = *args.seed;
    cfg.generator.seed = *args.seed;
  }
  if (args.out_dir) cfg.paths.out_dir = *args.out_dir;
  if (args.graph) cfg.paths.graph = *args.graph;
  if (args.profiles) cfg.paths.profiles = *args.profiles;
  if (args.messages) cfg.paths.messages = *args.messages;
  if (args.factions) cfg.paths.factions = *args.factions;
  if (args.events) cfg.paths.events = *args.events;
  if (args.model) cfg.paths.model = *args.model;
  return cfg;
}

void report_written(const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << "wrote " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"social-bot influence workbench"};
  app.require_subcommand(1);

  CommonArgs generate_args, probe_args, train_args, campaign_args, pipeline_args,
      analyze_args, recommend_args;

  auto* generate = app.add_subcommand("generate", "grow a synthetic two-layer network");
  add_common(generate, generate_args, false);

  auto* probe = app.add_subcommand("probe", "run the bot's visit rounds over a network");
  add_common(probe, probe_args, false);

  auto* train_cmd = app.add_subcommand("train", "build a training set and fit the classifier");
  add_common(train_cmd, train_args, false);

  auto* campaign = app.add_subcommand("campaign", "assign and simulate recommendations");
  add_common(campaign, campaign_args, false);

  auto* pipeline = app.add_subcommand("pipeline", "generate, probe, train, campaign, report");
  add_common(pipeline, pipeline_args, false);

  auto* analyze = app.add_subcommand("analyze", "compute reports over ingested files");
  add_common(analyze, analyze_args, false);
  sbw::AnalyzeRequest request;
  std::string layer_name = "social";
  std::optional<std::uint32_t> node_arg;
  std::optional<std::string> keyword_arg;
  std::optional<std::size_t> window_arg, null_runs_arg, fccv_runs_arg;
  analyze->add_option("--ccdf", request.ccdf_metrics,
                      "degree ccdf: in-degree, out-degree, msg-in, msg-out");
  analyze->add_flag("--pagerank", request.pagerank, "pagerank scores and their ccdf");
  analyze->add_flag("--hits", request.hits, "hub and authority scores");
  analyze->add_flag("--percentile", request.percentile, "percentile report for --node");
  analyze->add_option("--node", node_arg, "node for the percentile report");
  analyze->add_flag("--correlation", request.correlation, "books/messages by inbox size");
  analyze->add_flag("--intra-inter", request.intra_inter,
                    "faction intra/inter ratios vs the rewired null model");
  analyze->add_flag("--fccv", request.fccv, "community detection faction recovery");
  analyze->add_flag("--timeline", request.timeline, "sentiment timeline over messages");
  analyze->add_option("--keyword-subgraph", keyword_arg, "communication subgraph of a keyword");
  analyze->add_option("--layer", layer_name, "social or comm (default social)");
  analyze->add_option("--window", window_arg, "timeline window size");
  analyze->add_option("--null-runs", null_runs_arg, "rewiring realizations");
  analyze->add_option("--fccv-runs", fccv_runs_arg, "detection realizations");

  auto* recommend_cmd =
      app.add_subcommand("recommend", "print the top suggestion for a user");
  add_common(recommend_cmd, recommend_args, false);
  std::uint32_t recommend_user = 0;
  bool recommend_all = false;
  recommend_cmd->add_option("--user", recommend_user, "user to recommend a contact to");
  recommend_cmd->add_flag("--all", recommend_all, "print a suggestion for every user");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      const auto cfg = resolve_config(generate_args);
      report_written(sbw::cmd_generate(cfg, cfg.paths.out_dir));
    } else if (probe->parsed()) {
      const auto cfg = resolve_config(probe_args);
      report_written(sbw::cmd_probe(cfg, cfg.paths.out_dir));
    } else if (train_cmd->parsed()) {
      const auto cfg = resolve_config(train_args);
      report_written(sbw::cmd_train(cfg, cfg.paths.out_dir));
    } else if (campaign->parsed()) {
      const auto cfg = resolve_config(campaign_args);
      report_written(sbw::cmd_campaign(cfg, cfg.paths.out_dir));
    } else if (pipeline->parsed()) {
      const auto cfg = resolve_config(pipeline_args);
      report_written(sbw::cmd_pipeline(cfg, cfg.paths.out_dir));
    } else if (analyze->parsed()) {
      auto cfg = resolve_config(analyze_args);
      if (auto layer = sbw::layer_from_string(layer_name)) {
        request.layer = *layer;
      } else {
        throw std::runtime_error("unknown layer '" + layer_name + "'");
      }
      if (node_arg) request.node = *node_arg;
      if (keyword_arg) request.keyword = *keyword_arg;
      if (window_arg) cfg.analysis.window = *window_arg;
      if (null_runs_arg) cfg.analysis.null_runs = *null_runs_arg;
      if (fccv_runs_arg) cfg.analysis.fccv_runs = *fccv_runs_arg;
      report_written(sbw::cmd_analyze(cfg, request, cfg.paths.out_dir));
    } else if (recommend_cmd->parsed()) {
      const auto cfg = resolve_config(recommend_args, /*seed_required=*/false);
      if (cfg.paths.graph.empty()) throw std::runtime_error("recommend needs --graph");
      if (cfg.paths.model.empty()) throw std::runtime_error("recommend needs --model");
      const sbw::SocialGraph g = sbw::load_edge_list(cfg.paths.graph);
      const sbw::ProfileStore profiles = cfg.paths.profiles.empty()
                                             ? sbw::ProfileStore{}
                                             : sbw::load_profiles(cfg.paths.profiles);
      const auto model = sbw::ClassifierModel::load(cfg.paths.model);
      auto print_one = [&](sbw::UserId u) {
        if (auto rec = sbw::recommend(model, g, profiles, u)) {
          std::printf("%u\t%u\t%.6f\n", u, rec->suggestion, rec->confidence);
        }
      };
      if (recommend_all) {
        for (sbw::UserId u : g.nodes()) print_one(u);
      } else {
        print_one(recommend_user);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
