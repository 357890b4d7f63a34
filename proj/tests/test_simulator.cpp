#include <doctest.h>

#include <stdexcept>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sbw/metrics.hpp"
#include "sbw/simulator.hpp"

using namespace sbw;

namespace {

GeneratorConfig small_config(std::uint64_t seed, std::size_t n = 600) {
  GeneratorConfig cfg;
  cfg.n_nodes = n;
  cfg.catalog_size = 3000;
  cfg.group_count = 50;
  cfg.seed = seed;
  return cfg;
}

double mean_arc_library_cosine(const SocialGraph& g, const ProfileStore& profiles) {
  double sum = 0.0;
  std::size_t arcs = 0;
  for (UserId u : g.nodes()) {
    const auto& lib_u = profiles.at_or_empty(u).library;
    for (UserId v : g.out_neighbors(u, Layer::social)) {
      const auto& lib_v = profiles.at_or_empty(v).library;
      std::size_t common = 0;
      for (ItemId b : lib_u)
        if (std::binary_search(lib_v.begin(), lib_v.end(), b)) ++common;
      if (!lib_u.empty() && !lib_v.empty())
        sum += static_cast<double>(common) /
               std::sqrt(static_cast<double>(lib_u.size()) * static_cast<double>(lib_v.size()));
      ++arcs;
    }
  }
  return arcs == 0 ? 0.0 : sum / static_cast<double>(arcs);
}

ClassifierModel constant_model(double positive_fraction) {
  std::vector<DecisionTree::Node> leaf(1);
  leaf[0].positive_fraction = positive_fraction;
  return ClassifierModel({DecisionTree::from_nodes(leaf)}, TreeParams{}, 0);
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("forced reciprocation measures exactly 1") {
  GeneratorConfig cfg = small_config(1, 200);
  cfg.reciprocation_prob = 1.0;
  const GeneratedNetwork net = generate_network(cfg);
  CHECK(net.graph.compute_stats(Layer::social).reciprocation == doctest::Approx(1.0));
}

TEST_CASE("default config reproduces the target reciprocation") {
  GeneratorConfig cfg;  // defaults: n=20000, target 0.57
  cfg.seed = 42;
  const GeneratedNetwork net = generate_network(cfg);
  const GraphStats stats = net.graph.compute_stats(Layer::social);
  CHECK(stats.node_count == 20000);
  CHECK(stats.reciprocation > 0.45);
  CHECK(stats.reciprocation < 0.65);
  CHECK(stats.gscc_size > 10000);
}

TEST_CASE("generation is deterministic per seed") {
  const GeneratedNetwork a = generate_network(small_config(7, 300));
  const GeneratedNetwork b = generate_network(small_config(7, 300));
  CHECK(a.graph == b.graph);
  CHECK(a.profiles == b.profiles);
  const GeneratedNetwork c = generate_network(small_config(8, 300));
  CHECK_FALSE(a.graph == c.graph);
}

TEST_CASE("homophily raises the mean library cosine over arcs") {
  double zero_sum = 0.0, high_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorConfig lo = small_config(seed, 400);
    lo.homophily_strength = 0.0;
    GeneratorConfig hi = small_config(seed, 400);
    hi.homophily_strength = 8.0;
    const GeneratedNetwork a = generate_network(lo);
    const GeneratedNetwork b = generate_network(hi);
    zero_sum += mean_arc_library_cosine(a.graph, a.profiles);
    high_sum += mean_arc_library_cosine(b.graph, b.profiles);
  }
  CHECK(high_sum / 10.0 > zero_sum / 10.0);
}

TEST_CASE("infeasible generator configs are rejected") {
  GeneratorConfig cfg = small_config(1, 5);
  CHECK_THROWS_AS(generate_network(cfg), std::invalid_argument);
  cfg = small_config(1, 20);
  cfg.arcs_per_node = 20;
  CHECK_THROWS_AS(generate_network(cfg), std::invalid_argument);
  cfg = small_config(1, 20);
  cfg.reciprocation_prob = 1.5;
  CHECK_THROWS_AS(generate_network(cfg), std::invalid_argument);
}

TEST_CASE("snapshots grow monotonically") {
  const Snapshots snaps = grow_snapshots(small_config(3, 300));
  CHECK(snaps.t0.node_count() == snaps.t1.node_count());
  std::size_t t0_arcs = snaps.t0.compute_stats(Layer::social).arc_count;
  std::size_t t1_arcs = snaps.t1.compute_stats(Layer::social).arc_count;
  CHECK(t1_arcs > t0_arcs);
  for (UserId u : snaps.t0.nodes()) {
    for (UserId v : snaps.t0.out_neighbors(u, Layer::social))
      CHECK(snaps.t1.has_social_arc(u, v));
  }
}

TEST_CASE("probing without shout probability produces no shouts") {
  GeneratedNetwork net = generate_network(small_config(5, 200));
  ResponseModel model;
  model.p_shout_per_visit = 0.0;
  model.p_follow_bot_per_visit = 0.0;
  const ProbeResult probe = run_probe_rounds(net.graph, net.profiles, model, 3, 1, 5);
  for (const Event& e : probe.log.events) CHECK(e.kind == EventKind::visit);
  CHECK(net.graph.msg_in(probe.bot) == 0);
}

TEST_CASE("certain shouting shouts once per visited user per round") {
  GeneratedNetwork net = generate_network(small_config(6, 150));
  ResponseModel model;
  model.p_shout_per_visit = 1.0;
  model.shout_decay = 1.0;
  model.p_follow_bot_per_visit = 0.0;
  const ProbeResult probe = run_probe_rounds(net.graph, net.profiles, model, 1, 1, 6);
  std::size_t visits = 0, shouts = 0;
  for (const Event& e : probe.log.events) {
    if (e.kind == EventKind::visit) ++visits;
    if (e.kind == EventKind::shout) ++shouts;
  }
  CHECK(visits > 0);
  CHECK(shouts == visits);
  CHECK(net.graph.msg_in(probe.bot) == shouts);
}

TEST_CASE("probe dynamics: spikes at round ticks, monotone distinct shouters") {
  GeneratedNetwork net = generate_network(small_config(7, 400));
  const ResponseModel model = ResponseModel::calibrated();
  const ProbeResult probe = run_probe_rounds(net.graph, net.profiles, model, 15, 3, 7);

  std::map<std::uint64_t, std::size_t> shout_ticks;
  std::set<UserId> shouters;
  std::size_t previous_distinct = 0;
  std::uint64_t previous_tick = 0;
  std::size_t total_shouts = 0;
  for (const Event& e : probe.log.events) {
    CHECK(e.tick >= previous_tick);
    previous_tick = e.tick;
    if (e.kind != EventKind::shout) continue;
    ++total_shouts;
    ++shout_ticks[e.tick];
    shouters.insert(e.actor);
    CHECK(shouters.size() >= previous_distinct);
    previous_distinct = shouters.size();
  }
  REQUIRE(total_shouts > 0);
  // every shout falls on a visit-round tick (interval 3)
  std::size_t on_round = 0;
  for (const auto& [tick, count] : shout_ticks) {
    if (tick % 3 == 0) on_round += count;
  }
  CHECK(static_cast<double>(on_round) >= 0.9 * static_cast<double>(total_shouts));

  // the bot only receives: no outgoing messages or arcs during probing
  CHECK(net.graph.msg_out(probe.bot) == 0);
  CHECK(net.graph.k_out(probe.bot) == 0);
  CHECK(net.graph.msg_in(probe.bot) == total_shouts);
}

TEST_CASE("probe event log is byte-identical per seed") {
  GeneratedNetwork a = generate_network(small_config(9, 250));
  GeneratedNetwork b = generate_network(small_config(9, 250));
  const ResponseModel model = ResponseModel::calibrated();
  const ProbeResult pa = run_probe_rounds(a.graph, a.profiles, model, 5, 1, 99);
  const ProbeResult pb = run_probe_rounds(b.graph, b.profiles, model, 5, 1, 99);
  std::ostringstream sa, sb;
  write_event_log(pa.log, sa);
  write_event_log(pb.log, sb);
  CHECK(sa.str() == sb.str());
  CHECK(a.graph == b.graph);
}

TEST_CASE("event log io round-trips and rejects bad input") {
  EventLog log;
  log.append({0, EventKind::visit, 9, 1, std::nullopt});
  log.append({2, EventKind::rec_sent, 1, 3, Category::follower_rec});
  std::ostringstream out;
  write_event_log(log, out);
  std::istringstream in(out.str());
  CHECK(read_event_log(in) == log);

  std::istringstream bad("0\tteleport\t1\t2\t-\n");
  CHECK_THROWS_AS(read_event_log(bad), std::runtime_error);
  CHECK_THROWS_AS(log.append({1, EventKind::visit, 1, 2, std::nullopt}), std::logic_error);
}

TEST_CASE("recommendation assignment protocol") {
  GeneratedNetwork net = generate_network(small_config(11, 500));
  ResponseModel model = ResponseModel::calibrated();
  ProbeResult probe = run_probe_rounds(net.graph, net.profiles, model, 6, 1, 11);
  std::set<UserId> shouter_set;
  for (const Event& e : probe.log.events)
    if (e.kind == EventKind::shout) shouter_set.insert(e.actor);
  const std::vector<UserId> shouters(shouter_set.begin(), shouter_set.end());
  REQUIRE(shouters.size() >= 10);
  const ClassifierModel yes = constant_model(0.9);

  SUBCASE("five equal categories with default fractions") {
    const CampaignPlan plan =
        assign_recommendations(net.graph, net.profiles, shouters, yes, 2, 0.5, 0.25, 11);
    std::map<Category, std::size_t> sizes;
    for (const auto& a : plan.assignments) ++sizes[a.category];
    CHECK(sizes.size() == 5);
    for (const auto& [cat, size] : sizes) CHECK(size == plan.category_size);
  }

  SUBCASE("no reciprocal fraction leaves four equal categories") {
    const CampaignPlan plan =
        assign_recommendations(net.graph, net.profiles, shouters, yes, 2, 0.5, 0.0, 11);
    std::map<Category, std::size_t> sizes;
    for (const auto& a : plan.assignments) ++sizes[a.category];
    CHECK(sizes.size() == 4);
    CHECK_FALSE(sizes.contains(Category::reciprocal));
    for (const auto& [cat, size] : sizes) CHECK(size == plan.category_size);
  }

  SUBCASE("suggestions never duplicate existing arcs or self") {
    const CampaignPlan plan =
        assign_recommendations(net.graph, net.profiles, shouters, yes, 2, 0.5, 0.25, 11);
    for (const auto& a : plan.assignments) {
      CHECK(a.target != a.suggestion);
      CHECK_FALSE(net.graph.has_social_arc(a.target, a.suggestion));
    }
  }

  SUBCASE("follower and non-follower pools are disjoint") {
    const CampaignPlan plan =
        assign_recommendations(net.graph, net.profiles, shouters, yes, 2, 0.5, 0.25, 11);
    std::set<UserId> follower_targets, nonfollower_targets;
    for (const auto& a : plan.assignments) {
      if (a.category == Category::follower_rec || a.category == Category::follower_rand)
        follower_targets.insert(a.target);
      if (a.category == Category::nonfollower_rec || a.category == Category::nonfollower_rand)
        nonfollower_targets.insert(a.target);
    }
    for (UserId u : follower_targets) CHECK_FALSE(nonfollower_targets.contains(u));
    for (UserId u : nonfollower_targets) CHECK_FALSE(shouter_set.contains(u));
  }

  SUBCASE("non-followers respect the book threshold") {
    const CampaignPlan plan =
        assign_recommendations(net.graph, net.profiles, shouters, yes, 10, 0.5, 0.25, 11);
    for (const auto& a : plan.assignments) {
      if (a.category == Category::nonfollower_rec || a.category == Category::nonfollower_rand)
        CHECK(net.profiles.at_or_empty(a.target).book_count() >= 10);
    }
  }

  SUBCASE("a modelless recommender falls back to random suggestions, flagged") {
    const ClassifierModel no = constant_model(0.1);
    const CampaignPlan plan =
        assign_recommendations(net.graph, net.profiles, shouters, no, 2, 0.5, 0.25, 11);
    CHECK(plan.fallbacks > 0);
    for (const auto& a : plan.assignments) {
      if (a.category == Category::follower_rec || a.category == Category::nonfollower_rec)
        CHECK(a.model_fallback);
    }
  }

  SUBCASE("demanding more non-followers than exist is an error") {
    std::vector<UserId> everyone = net.graph.nodes();
    CHECK_THROWS_AS(
        assign_recommendations(net.graph, net.profiles, everyone, yes, 2, 0.5, 0.25, 11),
        std::invalid_argument);
  }
}

TEST_CASE("response simulation extremes") {
  SocialGraph g;
  for (UserId u = 0; u < 40; ++u) g.add_node(u);
  std::vector<RecommendationAssignment> plan;
  for (UserId u = 0; u < 20; ++u) {
    RecommendationAssignment a;
    a.target = u;
    a.suggestion = u + 20;
    a.category = Category::follower_rec;
    a.origin = a.category;
    plan.push_back(a);
  }

  SUBCASE("zero probabilities create no links") {
    ResponseModel model{};
    model.p_follower_rec = 0.0;
    model.p_offtarget_link = 0.0;
    model.reciprocal_boost = 0.0;
    SocialGraph sandbox = g;
    const CampaignResult result = simulate_responses(sandbox, plan, model, 0, 3);
    CHECK(result.summary.links_created == 0);
    CHECK(result.summary.follow_rate == 0.0);
    for (const auto& a : result.assignments) CHECK_FALSE(a.accepted);
  }

  SUBCASE("certain acceptance links every assignment") {
    ResponseModel model{};
    model.p_follower_rec = 1.0;
    model.p_offtarget_link = 0.0;
    SocialGraph sandbox = g;
    const CampaignResult result = simulate_responses(sandbox, plan, model, 0, 3);
    CHECK(result.summary.links_created == plan.size());
    CHECK(result.summary.follow_rate == doctest::Approx(1.0));
    for (const auto& a : result.assignments) {
      CHECK(a.accepted);
      CHECK(sandbox.has_social_arc(a.target, a.suggestion));
    }
  }

  SUBCASE("created links are a subset of the assignments") {
    ResponseModel model = ResponseModel::calibrated();
    model.p_offtarget_link = 0.0;
    SocialGraph sandbox = g;
    const CampaignResult result = simulate_responses(sandbox, plan, model, 5, 3);
    std::set<std::pair<UserId, UserId>> assigned;
    for (const auto& a : plan) assigned.insert({a.target, a.suggestion});
    for (const Event& e : result.log.events) {
      if (e.kind != EventKind::link_created) continue;
      CHECK(assigned.contains({e.actor, e.subject}));
      CHECK(e.tick == 6);
    }
  }
}

TEST_CASE("acceptance counts per category are binomial") {
  // fixed plan, 100 response seeds, chi-squared goodness of fit per category
  SocialGraph base;
  for (UserId u = 0; u < 400; ++u) base.add_node(u);
  std::vector<RecommendationAssignment> plan;
  auto add_block = [&](Category cat, UserId offset) {
    for (UserId i = 0; i < 100; ++i) {
      RecommendationAssignment a;
      a.target = offset + i;
      a.suggestion = offset + ((i + 1) % 100);
      a.category = cat;
      a.origin = cat;
      plan.push_back(a);
    }
  };
  add_block(Category::follower_rec, 0);
  add_block(Category::nonfollower_rec, 100);

  ResponseModel model{};
  model.p_follower_rec = 0.3;
  model.p_nonfollower_rec = 0.1;
  model.p_offtarget_link = 0.0;
  model.reciprocal_boost = 0.0;

  std::map<Category, std::vector<std::size_t>> counts;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SocialGraph sandbox = base;
    const CampaignResult result = simulate_responses(sandbox, plan, model, 0, seed);
    for (const auto& o : result.summary.outcomes) counts[o.category].push_back(o.accepted);
  }

  for (const auto& [cat, observed] : counts) {
    const double p = cat == Category::follower_rec ? 0.3 : 0.1;
    const std::size_t n = 100;  // assignments per category
    // bin binomial outcomes so every expected cell holds >= 5 runs
    std::vector<double> cell_expected;
    std::vector<std::size_t> cell_observed;
    double acc_expected = 0.0;
    std::size_t acc_observed = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      acc_expected += 100.0 * oracle::binomial_pmf(n, p, k);
      for (std::size_t c : observed)
        if (c == k) ++acc_observed;
      if (acc_expected >= 5.0 && k < n) {
        cell_expected.push_back(acc_expected);
        cell_observed.push_back(acc_observed);
        acc_expected = 0.0;
        acc_observed = 0;
      }
    }
    cell_expected.push_back(acc_expected);
    cell_observed.push_back(acc_observed);
    if (cell_expected.size() >= 2 && cell_expected.back() < 5.0) {
      cell_expected[cell_expected.size() - 2] += cell_expected.back();
      cell_observed[cell_observed.size() - 2] += cell_observed.back();
      cell_expected.pop_back();
      cell_observed.pop_back();
    }
    REQUIRE(cell_expected.size() >= 3);
    double chi2 = 0.0;
    for (std::size_t c = 0; c < cell_expected.size(); ++c) {
      const double diff = static_cast<double>(cell_observed[c]) - cell_expected[c];
      if (cell_expected[c] > 0) chi2 += diff * diff / cell_expected[c];
    }
    const double p_value =
        oracle::chi2_survival(chi2, static_cast<int>(cell_expected.size()) - 1);
    CHECK(p_value > 0.001);
  }
}

TEST_CASE("sustained probing lifts the bot into the top in-degree percentiles") {
  GeneratorConfig cfg = small_config(41, 2000);
  cfg.catalog_size = 8000;
  cfg.group_count = 100;
  GeneratedNetwork net = generate_network(cfg);
  const ResponseModel model = ResponseModel::calibrated();
  const ProbeResult probe = run_probe_rounds(net.graph, net.profiles, model, 15, 1, 41);

  std::vector<std::pair<UserId, double>> in_degree;
  for (UserId u : net.graph.nodes())
    in_degree.emplace_back(u, static_cast<double>(net.graph.in_neighbors(u, Layer::social).size()));
  CHECK(percentile_of(in_degree, probe.bot) >= 95.0);
}

TEST_CASE("ordered category probabilities keep the acceptance ordering") {
  GeneratedNetwork net = generate_network(small_config(31, 500));
  ResponseModel model = ResponseModel::calibrated();
  ProbeResult probe = run_probe_rounds(net.graph, net.profiles, model, 6, 1, 31);
  std::set<UserId> shouter_set;
  for (const Event& e : probe.log.events)
    if (e.kind == EventKind::shout) shouter_set.insert(e.actor);
  const std::vector<UserId> shouters(shouter_set.begin(), shouter_set.end());
  const ClassifierModel yes = constant_model(0.9);

  int follower_wins = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SocialGraph sandbox = net.graph;
    const CampaignPlan plan =
        assign_recommendations(sandbox, net.profiles, shouters, yes, 2, 0.5, 0.25, seed);
    const CampaignResult result = simulate_responses(sandbox, plan.assignments, model, 0, seed);
    double frec = 0.0, nrec = 0.0;
    for (const auto& o : result.summary.outcomes) {
      if (o.category == Category::follower_rec)
        frec = static_cast<double>(o.accepted) / static_cast<double>(o.sent);
      if (o.category == Category::nonfollower_rec)
        nrec = static_cast<double>(o.accepted) / static_cast<double>(o.sent);
    }
    if (frec > nrec) ++follower_wins;
  }
  CHECK(follower_wins >= 4);
}

}  // TEST_SUITE
