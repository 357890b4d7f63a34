#include "sbw/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sbw/metrics.hpp"
#include "sbw/rng.hpp"

namespace sbw {

namespace {

namespace fs = std::filesystem;

std::string joined(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_stats_report(const RunConfig& cfg, const SocialGraph& g, const std::string& path) {
  const GraphStats social = g.compute_stats(Layer::social);
  const GraphStats comm = g.compute_stats(Layer::comm);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_header(cfg);
  out << "stat\tsocial\tcomm\n";
  out << "nodes\t" << social.node_count << '\t' << comm.node_count << '\n';
  out << "arcs\t" << social.arc_count << '\t' << comm.arc_count << '\n';
  out << "mean_out_degree\t" << fmt(social.mean_out_degree) << '\t' << fmt(comm.mean_out_degree)
      << '\n';
  out << "reciprocation\t" << fmt(social.reciprocation) << '\t' << fmt(comm.reciprocation)
      << '\n';
  out << "gscc_size\t" << social.gscc_size << '\t' << comm.gscc_size << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_shout_histogram(const RunConfig& cfg, const EventLog& log, const std::string& path) {
  std::map<std::uint64_t, std::size_t> shouts;
  std::uint64_t max_tick = 0;
  for (const Event& e : log.events) {
    max_tick = std::max(max_tick, e.tick);
    if (e.kind == EventKind::shout) ++shouts[e.tick];
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_header(cfg);
  out << "tick\tshouts\n";
  for (std::uint64_t t = 0; t <= max_tick; ++t) {
    auto it = shouts.find(t);
    out << t << '\t' << (it == shouts.end() ? 0 : it->second) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<UserId> shouters_of(const EventLog& log) {
  std::set<UserId> actors;
  for (const Event& e : log.events) {
    if (e.kind == EventKind::shout) actors.insert(e.actor);
  }
  return {actors.begin(), actors.end()};
}

void write_percentile_report(const RunConfig& cfg, const SocialGraph& g, UserId bot,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_header(cfg);
  out << "metric\tlayer\tscore\tpercentile\n";
  for (Layer layer : {Layer::social, Layer::comm}) {
    if (g.arc_count(layer) == 0) continue;  // nothing to score on this layer
    const auto pr =
        pagerank(g, layer, cfg.analysis.damping, cfg.analysis.tol, cfg.analysis.max_iters);
    const auto ha = hits(g, layer, cfg.analysis.tol, cfg.analysis.max_iters);
    if (!pr.scores.find(bot)) continue;  // node not part of this layer's population
    out << "pagerank\t" << to_string(layer) << '\t' << fmt(pr.scores.at(bot)) << '\t'
        << fmt(percentile_of(pr.scores, bot)) << '\n';
    out << "authority\t" << to_string(layer) << '\t' << fmt(ha.authority.at(bot)) << '\t'
        << fmt(percentile_of(ha.authority, bot)) << '\n';
  }
  std::vector<std::pair<UserId, double>> in_degree;
  for (UserId u : g.nodes())
    in_degree.emplace_back(u, static_cast<double>(g.in_neighbors(u, Layer::social).size()));
  out << "in_degree\tsocial\t"
      << fmt(static_cast<double>(g.in_neighbors(bot, Layer::social).size())) << '\t'
      << fmt(percentile_of(in_degree, bot)) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_correlation_report(const RunConfig& cfg, const SocialGraph& g,
                              const ProfileStore& profiles, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_header(cfg);
  out << "msg_in\tmean_books\tmean_sent\n";
  for (const auto& bucket : books_messages_by_inbox(g, profiles)) {
    out << bucket.msg_in << '\t' << fmt(bucket.mean_books) << '\t' << fmt(bucket.mean_sent)
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_polarization_report(const RunConfig& cfg, const SocialGraph& g,
                               const FactionLabeling& labels, const std::string& path) {
  std::vector<UserId> labeled;
  labeled.reserve(labels.size());
  for (const auto& [u, f] : labels)
    if (g.has_node(u)) labeled.push_back(u);
  const SocialGraph induced = g.induced_subgraph(labeled);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_header(cfg);
  out << "layer\tintra_actual\tinter_actual\tintra_randomized\tinter_randomized\n";
  for (Layer layer : {Layer::social, Layer::comm}) {
    const IntraInter actual = intra_inter_ratio(induced, layer, labels);
    double intra_sum = 0.0;
    const std::size_t runs = std::max<std::size_t>(1, cfg.analysis.null_runs);
    for (std::size_t i = 0; i < runs; ++i) {
      const SocialGraph rewired = rewire_preserve_outdegree(
          induced, layer, derive_seed(cfg.seed, "rewire#" + std::to_string(i)));
      intra_sum += intra_inter_ratio(rewired, layer, labels).intra;
    }
    const double intra_rand = intra_sum / static_cast<double>(runs);
    out << to_string(layer) << '\t' << fmt(actual.intra) << '\t' << fmt(actual.inter) << '\t'
        << fmt(intra_rand) << '\t' << fmt(1.0 - intra_rand) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

FactionLabeling factions_from_campaign(const std::vector<RecommendationAssignment>& assignments) {
  // users that followed at least one suggestion versus the rest of the
  // recommended pool; stands in for the pro/contra groups when no faction
  // file is supplied
  FactionLabeling labels;
  for (const auto& a : assignments) {
    auto [it, inserted] = labels.emplace(a.target, Faction::contra);
    if (a.accepted) it->second = Faction::pro;
  }
  return labels;
}

struct PipelineState {
  Snapshots snapshots;
  SocialGraph current;  // t1, then mutated by probe and campaign
  UserId bot = 0;
  EventLog probe_log;
  ClassifierModel model;
  CampaignResult campaign;
};

template <typename Fn>
void stage(const char* name, Fn&& fn) {
  try {
    fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

std::vector<std::string> cmd_generate(const RunConfig& cfg, const std::string& out_dir) {
  std::vector<std::string> written;
  stage("generate", [&] {
    ensure_dir(out_dir);
    GeneratorConfig gen = cfg.generator;
    gen.seed = cfg.seed;
    const GeneratedNetwork net = generate_network(gen);

    const std::string graph_path = joined(out_dir, "graph.tsv");
    save_edge_list(net.graph, graph_path);
    written.push_back(graph_path);

    const std::string profiles_path = joined(out_dir, "profiles.tsv");
    save_profiles(net.profiles, profiles_path);
    written.push_back(profiles_path);

    const std::string stats_path = joined(out_dir, "stats.tsv");
    write_stats_report(cfg, net.graph, stats_path);
    written.push_back(stats_path);
  });
  return written;
}

std::vector<std::string> cmd_probe(const RunConfig& cfg, const std::string& out_dir) {
  std::vector<std::string> written;
  stage("probe", [&] {
    if (cfg.paths.graph.empty())
      throw std::runtime_error("probe requires a graph file (paths.graph)");
    if (cfg.paths.profiles.empty())
      throw std::runtime_error("probe requires a profile file (paths.profiles)");
    ensure_dir(out_dir);
    SocialGraph g = load_edge_list(cfg.paths.graph);
    const ProfileStore profiles = load_profiles(cfg.paths.profiles);
    const ProbeResult probe = run_probe_rounds(g, profiles, cfg.response, cfg.probe.rounds,
                                               cfg.probe.interval_ticks, cfg.seed);

    const std::string events_path = joined(out_dir, "probe_events.tsv");
    save_event_log(probe.log, events_path, report_header(cfg));
    written.push_back(events_path);

    const std::string histogram_path = joined(out_dir, "shout_histogram.tsv");
    write_shout_histogram(cfg, probe.log, histogram_path);
    written.push_back(histogram_path);

    const std::string graph_path = joined(out_dir, "graph_after_probe.tsv");
    save_edge_list(g, graph_path);
    written.push_back(graph_path);
  });
  return written;
}

namespace {

void run_train_stage(const RunConfig& cfg, const Snapshots& snapshots,
                     const std::string& out_dir, ClassifierModel& model,
                     std::vector<std::string>& written) {
  const TrainingSet set =
      build_training_set(snapshots.t0, snapshots.t1, snapshots.profiles,
                         cfg.classifier.training_pairs, derive_seed(cfg.seed, "training"));
  if (set.degenerate) throw std::runtime_error("no positive training pairs between snapshots");

  model = train(set.pairs, cfg.classifier.tree_count, derive_seed(cfg.seed, "train"),
                cfg.classifier.tree);

  const std::string model_path = joined(out_dir, "model.txt");
  model.save(model_path);
  written.push_back(model_path);

  const std::string rank_path = joined(out_dir, "feature_rank.tsv");
  {
    std::ofstream out(rank_path);
    if (!out) throw std::runtime_error("cannot write " + rank_path);
    out << report_header(cfg);
    out << "feature\tchi_squared\n";
    for (const auto& fs_entry : chi_squared_rank(set.pairs))
      out << fs_entry.feature << '\t' << fmt(fs_entry.statistic) << '\n';
  }
  written.push_back(rank_path);

  double cv_auc = -1.0;
  if (cfg.classifier.folds >= 2) {
    cv_auc = evaluate_auc(
        [&](const std::vector<LabeledPair>& fold_pairs) {
          return train(fold_pairs, cfg.classifier.tree_count, derive_seed(cfg.seed, "train"),
                       cfg.classifier.tree);
        },
        set.pairs, cfg.classifier.folds, derive_seed(cfg.seed, "cv"));
  }

  const std::string report_path = joined(out_dir, "training_report.txt");
  {
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write " + report_path);
    out << report_header(cfg);
    out << "pairs\t" << set.pairs.size() << '\n';
    out << "positives_available\t" << set.positives_available << '\n';
    out << "shrunk\t" << (set.shrunk ? 1 : 0) << '\n';
    out << "cv_folds\t" << cfg.classifier.folds << '\n';
    out << "cv_auc\t" << (cv_auc < 0.0 ? std::string("-") : fmt(cv_auc)) << '\n';
  }
  written.push_back(report_path);
}

}  // namespace

std::vector<std::string> cmd_train(const RunConfig& cfg, const std::string& out_dir) {
  std::vector<std::string> written;
  stage("train", [&] {
    ensure_dir(out_dir);
    GeneratorConfig gen = cfg.generator;
    gen.seed = cfg.seed;
    const Snapshots snapshots = grow_snapshots(gen);
    ClassifierModel model;
    run_train_stage(cfg, snapshots, out_dir, model, written);
  });
  return written;
}

namespace {

void run_campaign_stage(const RunConfig& cfg, SocialGraph& g, const ProfileStore& profiles,
                        const EventLog& probe_log, const ClassifierModel& model,
                        const std::string& out_dir, CampaignResult& result,
                        std::vector<std::string>& written) {
  const std::vector<UserId> shouters = shouters_of(probe_log);
  const CampaignPlan plan = assign_recommendations(
      g, profiles, shouters, model, cfg.campaign.min_books, cfg.campaign.frac_model,
      cfg.campaign.frac_reciprocal, cfg.seed, cfg.campaign.eligible_tag);
  result = simulate_responses(g, plan.assignments, cfg.response, probe_log.last_tick() + 1,
                              cfg.seed);

  const std::string assignments_path = joined(out_dir, "assignments.tsv");
  save_assignments(result.assignments, assignments_path, report_header(cfg));
  written.push_back(assignments_path);

  const std::string events_path = joined(out_dir, "campaign_events.tsv");
  save_event_log(result.log, events_path, report_header(cfg));
  written.push_back(events_path);

  const std::string summary_path = joined(out_dir, "campaign_summary.tsv");
  save_campaign_summary(result.summary, summary_path, report_header(cfg));
  written.push_back(summary_path);
}

}  // namespace

std::vector<std::string> cmd_campaign(const RunConfig& cfg, const std::string& out_dir) {
  std::vector<std::string> written;
  stage("campaign", [&] {
    if (cfg.paths.graph.empty())
      throw std::runtime_error("campaign requires a graph file (paths.graph)");
    if (cfg.paths.profiles.empty())
      throw std::runtime_error("campaign requires a profile file (paths.profiles)");
    if (cfg.paths.events.empty())
      throw std::runtime_error("campaign requires a probe event log (paths.events)");
    if (cfg.paths.model.empty())
      throw std::runtime_error("campaign requires a model file (paths.model)");
    ensure_dir(out_dir);
    SocialGraph g = load_edge_list(cfg.paths.graph);
    const ProfileStore profiles = load_profiles(cfg.paths.profiles);
    const EventLog probe_log = load_event_log(cfg.paths.events);
    const ClassifierModel model = ClassifierModel::load(cfg.paths.model);

    CampaignResult result;
    run_campaign_stage(cfg, g, profiles, probe_log, model, out_dir, result, written);

    const std::string graph_path = joined(out_dir, "graph_after_campaign.tsv");
    save_edge_list(g, graph_path);
    written.push_back(graph_path);
  });
  return written;
}

std::vector<std::string> cmd_pipeline(const RunConfig& cfg, const std::string& out_dir) {
  std::vector<std::string> written;
  PipelineState state;

  stage("generate", [&] {
    ensure_dir(out_dir);
    GeneratorConfig gen = cfg.generator;
    gen.seed = cfg.seed;
    state.snapshots = grow_snapshots(gen);
    state.current = state.snapshots.t1;

    const std::string t0_path = joined(out_dir, "graph_t0.tsv");
    save_edge_list(state.snapshots.t0, t0_path);
    written.push_back(t0_path);

    const std::string graph_path = joined(out_dir, "graph.tsv");
    save_edge_list(state.current, graph_path);
    written.push_back(graph_path);

    const std::string profiles_path = joined(out_dir, "profiles.tsv");
    save_profiles(state.snapshots.profiles, profiles_path);
    written.push_back(profiles_path);

    const std::string stats_path = joined(out_dir, "stats.tsv");
    write_stats_report(cfg, state.current, stats_path);
    written.push_back(stats_path);
  });

  stage("probe", [&] {
    const ProbeResult probe =
        run_probe_rounds(state.current, state.snapshots.profiles, cfg.response,
                         cfg.probe.rounds, cfg.probe.interval_ticks, cfg.seed);
    state.bot = probe.bot;
    state.probe_log = probe.log;

    const std::string events_path = joined(out_dir, "probe_events.tsv");
    save_event_log(state.probe_log, events_path, report_header(cfg));
    written.push_back(events_path);

    const std::string histogram_path = joined(out_dir, "shout_histogram.tsv");
    write_shout_histogram(cfg, state.probe_log, histogram_path);
    written.push_back(histogram_path);

    const std::string graph_path = joined(out_dir, "graph_after_probe.tsv");
    save_edge_list(state.current, graph_path);
    written.push_back(graph_path);
  });

  stage("train", [&] {
    run_train_stage(cfg, state.snapshots, out_dir, state.model, written);
  });

  stage("campaign", [&] {
    run_campaign_stage(cfg, state.current, state.snapshots.profiles, state.probe_log,
                       state.model, out_dir, state.campaign, written);

    EventLog merged = state.probe_log;
    for (const Event& e : state.campaign.log.events) merged.append(e);
    const std::string events_path = joined(out_dir, "events.tsv");
    save_event_log(merged, events_path, report_header(cfg));
    written.push_back(events_path);

    const std::string graph_path = joined(out_dir, "graph_final.tsv");
    save_edge_list(state.current, graph_path);
    written.push_back(graph_path);
  });

  stage("report", [&] {
    const std::string percentile_path = joined(out_dir, "percentiles.tsv");
    write_percentile_report(cfg, state.current, state.bot, percentile_path);
    written.push_back(percentile_path);

    const std::string correlation_path = joined(out_dir, "correlation.tsv");
    write_correlation_report(cfg, state.current, state.snapshots.profiles, correlation_path);
    written.push_back(correlation_path);

    FactionLabeling labels = cfg.paths.factions.empty()
                                 ? factions_from_campaign(state.campaign.assignments)
                                 : load_factions(cfg.paths.factions);
    const std::string polarization_path = joined(out_dir, "polarization_report.tsv");
    write_polarization_report(cfg, state.current, labels, polarization_path);
    written.push_back(polarization_path);
  });

  return written;
}

std::vector<std::string> cmd_analyze(const RunConfig& cfg, const AnalyzeRequest& request,
                                     const std::string& out_dir) {
  std::vector<std::string> written;
  stage("analyze", [&] {
    ensure_dir(out_dir);
    const bool needs_graph = !request.ccdf_metrics.empty() || request.pagerank ||
                             request.hits || request.percentile || request.correlation ||
                             request.intra_inter || request.fccv;
    std::optional<SocialGraph> graph;
    if (needs_graph) {
      if (cfg.paths.graph.empty())
        throw std::runtime_error("requested analyses need a graph file (paths.graph)");
      graph = load_edge_list(cfg.paths.graph);
    }

    auto messages = [&]() {
      if (cfg.paths.messages.empty())
        throw std::runtime_error("requested analyses need a message file (paths.messages)");
      auto records = load_messages(cfg.paths.messages);
      std::stable_sort(records.begin(), records.end(),
                       [](const MessageRecord& a, const MessageRecord& b) {
                         return a.time < b.time;
                       });
      return records;
    };
    auto factions = [&]() {
      if (cfg.paths.factions.empty())
        throw std::runtime_error("requested analyses need a faction file (paths.factions)");
      return load_factions(cfg.paths.factions);
    };

    const std::string layer_name(to_string(request.layer));

    for (const std::string& metric : request.ccdf_metrics) {
      std::vector<double> values;
      const Layer layer = metric.starts_with("msg") ? Layer::comm : request.layer;
      for (UserId u : graph->nodes()) {
        if (graph->out_neighbors(u, layer).empty() && graph->in_neighbors(u, layer).empty())
          continue;
        if (metric == "in-degree") {
          values.push_back(static_cast<double>(graph->in_neighbors(u, layer).size()));
        } else if (metric == "out-degree") {
          values.push_back(static_cast<double>(graph->out_neighbors(u, layer).size()));
        } else if (metric == "msg-in") {
          values.push_back(static_cast<double>(graph->msg_in(u)));
        } else if (metric == "msg-out") {
          values.push_back(static_cast<double>(graph->msg_out(u)));
        } else {
          throw std::runtime_error("unknown ccdf metric '" + metric +
                                   "' (in-degree, out-degree, msg-in, msg-out)");
        }
      }
      std::string name = "ccdf_" + metric;
      std::replace(name.begin(), name.end(), '-', '_');
      const std::string path = joined(out_dir, name + ".tsv");
      save_ccdf(ccdf(std::move(values)), path, report_header(cfg));
      written.push_back(path);
    }

    if (request.pagerank) {
      const auto pr = pagerank(*graph, request.layer, cfg.analysis.damping, cfg.analysis.tol,
                               cfg.analysis.max_iters);
      const std::string path = joined(out_dir, "pagerank_" + layer_name + ".tsv");
      save_scores(pr.scores, path, report_header(cfg));
      written.push_back(path);
      std::vector<double> values;
      for (const auto& [u, s] : pr.scores.entries) values.push_back(s);
      const std::string ccdf_path = joined(out_dir, "pagerank_" + layer_name + "_ccdf.tsv");
      save_ccdf(ccdf(std::move(values)), ccdf_path, report_header(cfg));
      written.push_back(ccdf_path);
    }

    if (request.hits) {
      const auto ha = hits(*graph, request.layer, cfg.analysis.tol, cfg.analysis.max_iters);
      const std::string hub_path = joined(out_dir, "hits_hub_" + layer_name + ".tsv");
      save_scores(ha.hub, hub_path, report_header(cfg));
      written.push_back(hub_path);
      const std::string auth_path = joined(out_dir, "hits_authority_" + layer_name + ".tsv");
      save_scores(ha.authority, auth_path, report_header(cfg));
      written.push_back(auth_path);
    }

    if (request.percentile) {
      if (!request.node) throw std::runtime_error("percentile needs a node (--node)");
      const std::string path = joined(out_dir, "percentile.tsv");
      write_percentile_report(cfg, *graph, *request.node, path);
      written.push_back(path);
    }

    if (request.correlation) {
      if (cfg.paths.profiles.empty())
        throw std::runtime_error("correlation needs a profile file (paths.profiles)");
      const ProfileStore profiles = load_profiles(cfg.paths.profiles);
      const std::string path = joined(out_dir, "correlation.tsv");
      write_correlation_report(cfg, *graph, profiles, path);
      written.push_back(path);
    }

    if (request.intra_inter) {
      const FactionLabeling labels = factions();
      std::vector<UserId> labeled;
      for (const auto& [u, f] : labels)
        if (graph->has_node(u)) labeled.push_back(u);
      const SocialGraph induced = graph->induced_subgraph(labeled);
      const IntraInter actual = intra_inter_ratio(induced, request.layer, labels);
      double intra_sum = 0.0;
      const std::size_t runs = std::max<std::size_t>(1, cfg.analysis.null_runs);
      for (std::size_t i = 0; i < runs; ++i) {
        const SocialGraph rewired = rewire_preserve_outdegree(
            induced, request.layer, derive_seed(cfg.seed, "rewire#" + std::to_string(i)));
        intra_sum += intra_inter_ratio(rewired, request.layer, labels).intra;
      }
      const double intra_rand = intra_sum / static_cast<double>(runs);
      const std::string path = joined(out_dir, "intra_inter.tsv");
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << report_header(cfg);
      out << "layer\tintra_actual\tinter_actual\tintra_randomized\tinter_randomized\n";
      out << layer_name << '\t' << fmt(actual.intra) << '\t' << fmt(actual.inter) << '\t'
          << fmt(intra_rand) << '\t' << fmt(1.0 - intra_rand) << '\n';
      if (!out) throw std::runtime_error("write failed for " + path);
      written.push_back(path);
    }

    if (request.fccv) {
      const FactionLabeling labels = factions();
      std::vector<UserId> labeled;
      for (const auto& [u, f] : labels)
        if (graph->has_node(u)) labeled.push_back(u);
      const SocialGraph induced = graph->induced_subgraph(labeled);
      std::vector<std::uint64_t> seeds;
      for (std::size_t i = 0; i < std::max<std::size_t>(1, cfg.analysis.fccv_runs); ++i)
        seeds.push_back(derive_seed(cfg.seed, "detect#" + std::to_string(i)));
      const double score = mean_fccv(induced, request.layer, labels, seeds);
      const std::string path = joined(out_dir, "fccv.tsv");
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << report_header(cfg);
      out << "layer\truns\tmean_fccv\n";
      out << layer_name << '\t' << seeds.size() << '\t' << fmt(score) << '\n';
      if (!out) throw std::runtime_error("write failed for " + path);
      written.push_back(path);
    }

    if (request.timeline) {
      const auto records = messages();
      const TimelineResult timeline = sentiment_timeline(records, cfg.analysis.window);
      const std::string path = joined(out_dir, "timeline.tsv");
      save_timeline(timeline, path, report_header(cfg));
      written.push_back(path);
    }

    if (request.keyword) {
      const auto records = messages();
      const SocialGraph sub = keyword_subgraph(records, *request.keyword);
      const std::string path = joined(out_dir, "keyword_subgraph.tsv");
      save_edge_list(sub, path);
      written.push_back(path);
    }
  });
  return written;
}

}  // namespace sbw
