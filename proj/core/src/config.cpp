#include "sbw/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sbw/rng.hpp"

namespace sbw {

namespace {

using nlohmann::json;

json to_json(const GeneratorConfig& g) {
  return json{{"n_nodes", g.n_nodes},
              {"attachment_exponent", g.attachment_exponent},
              {"reciprocation_prob", g.reciprocation_prob},
              {"homophily_strength", g.homophily_strength},
              {"arcs_per_node", g.arcs_per_node},
              {"catalog_size", g.catalog_size},
              {"genre_count", g.genre_count},
              {"books_mean", g.books_mean},
              {"min_books", g.min_books},
              {"activity_bias", g.activity_bias},
              {"group_count", g.group_count},
              {"groups_mean", g.groups_mean},
              {"comm_arc_prob", g.comm_arc_prob},
              {"messages_mean", g.messages_mean},
              {"candidate_pool", g.candidate_pool},
              {"densify_fraction", g.densify_fraction}};
}

void from_json_into(const json& j, GeneratorConfig& g) {
  g.n_nodes = j.value("n_nodes", g.n_nodes);
  g.attachment_exponent = j.value("attachment_exponent", g.attachment_exponent);
  g.reciprocation_prob = j.value("reciprocation_prob", g.reciprocation_prob);
  g.homophily_strength = j.value("homophily_strength", g.homophily_strength);
  g.arcs_per_node = j.value("arcs_per_node", g.arcs_per_node);
  g.catalog_size = j.value("catalog_size", g.catalog_size);
  g.genre_count = j.value("genre_count", g.genre_count);
  g.books_mean = j.value("books_mean", g.books_mean);
  g.min_books = j.value("min_books", g.min_books);
  g.activity_bias = j.value("activity_bias", g.activity_bias);
  g.group_count = j.value("group_count", g.group_count);
  g.groups_mean = j.value("groups_mean", g.groups_mean);
  g.comm_arc_prob = j.value("comm_arc_prob", g.comm_arc_prob);
  g.messages_mean = j.value("messages_mean", g.messages_mean);
  g.candidate_pool = j.value("candidate_pool", g.candidate_pool);
  g.densify_fraction = j.value("densify_fraction", g.densify_fraction);
}

json to_json(const ResponseModel& r) {
  return json{{"p_shout_per_visit", r.p_shout_per_visit},
              {"shout_decay", r.shout_decay},
              {"p_follow_bot_per_visit", r.p_follow_bot_per_visit},
              {"p_offtarget_link", r.p_offtarget_link},
              {"p_follower_rec", r.p_follower_rec},
              {"p_follower_rand", r.p_follower_rand},
              {"p_nonfollower_rec", r.p_nonfollower_rec},
              {"p_nonfollower_rand", r.p_nonfollower_rand},
              {"reciprocal_boost", r.reciprocal_boost}};
}

void from_json_into(const json& j, ResponseModel& r) {
  r.p_shout_per_visit = j.value("p_shout_per_visit", r.p_shout_per_visit);
  r.shout_decay = j.value("shout_decay", r.shout_decay);
  r.p_follow_bot_per_visit = j.value("p_follow_bot_per_visit", r.p_follow_bot_per_visit);
  r.p_offtarget_link = j.value("p_offtarget_link", r.p_offtarget_link);
  r.p_follower_rec = j.value("p_follower_rec", r.p_follower_rec);
  r.p_follower_rand = j.value("p_follower_rand", r.p_follower_rand);
  r.p_nonfollower_rec = j.value("p_nonfollower_rec", r.p_nonfollower_rec);
  r.p_nonfollower_rand = j.value("p_nonfollower_rand", r.p_nonfollower_rand);
  r.reciprocal_boost = j.value("reciprocal_boost", r.reciprocal_boost);
}

}  // namespace

RunConfig parse_run_config(const std::string& text, std::string_view origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string(origin) + ": " + e.what());
  }
  RunConfig cfg;
  if (!j.contains("seed"))
    throw std::runtime_error(std::string(origin) + ": config must name a seed");
  cfg.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("generator")) from_json_into(j.at("generator"), cfg.generator);
  cfg.generator.seed = cfg.seed;
  if (j.contains("response")) from_json_into(j.at("response"), cfg.response);

  if (j.contains("classifier")) {
    const json& c = j.at("classifier");
    cfg.classifier.tree_count = c.value("tree_count", cfg.classifier.tree_count);
    cfg.classifier.tree.max_depth = c.value("max_depth", cfg.classifier.tree.max_depth);
    cfg.classifier.tree.min_leaf = c.value("min_leaf", cfg.classifier.tree.min_leaf);
    cfg.classifier.training_pairs = c.value("training_pairs", cfg.classifier.training_pairs);
    cfg.classifier.folds = c.value("folds", cfg.classifier.folds);
  }
  if (j.contains("probe")) {
    const json& p = j.at("probe");
    cfg.probe.rounds = p.value("rounds", cfg.probe.rounds);
    cfg.probe.interval_ticks = p.value("interval_ticks", cfg.probe.interval_ticks);
  }
  if (j.contains("campaign")) {
    const json& c = j.at("campaign");
    cfg.campaign.min_books = c.value("min_books", cfg.campaign.min_books);
    cfg.campaign.frac_model = c.value("frac_model", cfg.campaign.frac_model);
    cfg.campaign.frac_reciprocal = c.value("frac_reciprocal", cfg.campaign.frac_reciprocal);
    if (c.contains("eligible_tag") && !c.at("eligible_tag").is_null())
      cfg.campaign.eligible_tag = c.at("eligible_tag").get<std::string>();
  }
  if (j.contains("analysis")) {
    const json& a = j.at("analysis");
    cfg.analysis.damping = a.value("damping", cfg.analysis.damping);
    cfg.analysis.tol = a.value("tol", cfg.analysis.tol);
    cfg.analysis.max_iters = a.value("max_iters", cfg.analysis.max_iters);
    cfg.analysis.window = a.value("window", cfg.analysis.window);
    cfg.analysis.null_runs = a.value("null_runs", cfg.analysis.null_runs);
    cfg.analysis.fccv_runs = a.value("fccv_runs", cfg.analysis.fccv_runs);
  }
  if (j.contains("paths")) {
    const json& p = j.at("paths");
    cfg.paths.graph = p.value("graph", cfg.paths.graph);
    cfg.paths.profiles = p.value("profiles", cfg.paths.profiles);
    cfg.paths.messages = p.value("messages", cfg.paths.messages);
    cfg.paths.factions = p.value("factions", cfg.paths.factions);
    cfg.paths.events = p.value("events", cfg.paths.events);
    cfg.paths.model = p.value("model", cfg.paths.model);
    cfg.paths.out_dir = p.value("out_dir", cfg.paths.out_dir);
  }
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["generator"] = to_json(cfg.generator);
  j["response"] = to_json(cfg.response);
  j["classifier"] = json{{"tree_count", cfg.classifier.tree_count},
                         {"max_depth", cfg.classifier.tree.max_depth},
                         {"min_leaf", cfg.classifier.tree.min_leaf},
                         {"training_pairs", cfg.classifier.training_pairs},
                         {"folds", cfg.classifier.folds}};
  j["probe"] = json{{"rounds", cfg.probe.rounds},
                    {"interval_ticks", cfg.probe.interval_ticks}};
  j["campaign"] = json{{"min_books", cfg.campaign.min_books},
                       {"frac_model", cfg.campaign.frac_model},
                       {"frac_reciprocal", cfg.campaign.frac_reciprocal},
                       {"eligible_tag", cfg.campaign.eligible_tag
                                            ? json(*cfg.campaign.eligible_tag)
                                            : json(nullptr)}};
  j["analysis"] = json{{"damping", cfg.analysis.damping},
                       {"tol", cfg.analysis.tol},
                       {"max_iters", cfg.analysis.max_iters},
                       {"window", cfg.analysis.window},
                       {"null_runs", cfg.analysis.null_runs},
                       {"fccv_runs", cfg.analysis.fccv_runs}};
  j["paths"] = json{{"graph", cfg.paths.graph},
                    {"profiles", cfg.paths.profiles},
                    {"messages", cfg.paths.messages},
                    {"factions", cfg.paths.factions},
                    {"events", cfg.paths.events},
                    {"model", cfg.paths.model},
                    {"out_dir", cfg.paths.out_dir}};
  return j.dump(2) + "\n";
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path);
}

void save_run_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config " + path);
  out << run_config_to_json(cfg);
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string config_digest(const RunConfig& cfg) {
  const std::uint64_t h = fnv1a64(run_config_to_json(cfg));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string report_header(const RunConfig& cfg) {
  return "# seed " + std::to_string(cfg.seed) + "\n# config " + config_digest(cfg) + "\n";
}

}  // namespace sbw
