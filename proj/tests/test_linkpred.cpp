#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "sbw/linkpred.hpp"
#include "sbw/simulator.hpp"
#include "test_support.hpp"

using namespace sbw;

namespace {

// pairs with hand-set features; train() only looks at features and labels
std::vector<LabeledPair> separable_pairs(std::size_t per_class) {
  std::vector<LabeledPair> pairs;
  Rng rng(77);
  for (std::size_t i = 0; i < per_class; ++i) {
    LabeledPair pos;
    pos.features.common_neighbors = 2.0 + static_cast<double>(rng.index(4));
    pos.features.sim_library = 0.5 + 0.4 * rng.next_real();
    pos.label = true;
    pairs.push_back(pos);
    LabeledPair neg;
    neg.features.common_neighbors = 0.0;
    neg.features.sim_library = 0.3 * rng.next_real();
    neg.label = false;
    pairs.push_back(neg);
  }
  return pairs;
}

}  // namespace

TEST_SUITE("linkpred") {

TEST_CASE("common neighbors and triangle overlap on a toy graph") {
  SocialGraph g;
  for (UserId u = 0; u < 7; ++u) g.add_node(u);
  // out(0) = {2,3,4}, in(1) = {3,4,5}
  for (UserId z : {2u, 3u, 4u}) g.add_social_arc(0, z, TieType::friendship);
  for (UserId z : {3u, 4u, 5u}) g.add_social_arc(z, 1, TieType::friendship);
  ProfileStore profiles;
  const FeatureVector f = extract_features(g, profiles, 0, 1);
  CHECK(f.common_neighbors == 2.0);
  CHECK(f.triangle_overlap == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("resource allocation distributes over intermediaries") {
  SocialGraph g;
  for (UserId u = 0; u < 4; ++u) g.add_node(u);
  // 0 -> z -> 1 for z in {2,3}; each z has out-degree 1
  g.add_social_arc(0, 2, TieType::friendship);
  g.add_social_arc(0, 3, TieType::friendship);
  g.add_social_arc(2, 1, TieType::friendship);
  g.add_social_arc(3, 1, TieType::friendship);
  ProfileStore profiles;
  const FeatureVector f = extract_features(g, profiles, 0, 1);
  // brute-force over the same arcs
  const FeatureVector expected =
      oracle::brute_features({{0, 2}, {0, 3}, {2, 1}, {3, 1}}, profiles, 0, 1);
  CHECK(f.resource_allocation == doctest::Approx(1.0));
  CHECK(f == expected);
}

TEST_CASE("similarity extremes") {
  SocialGraph g;
  g.add_node(1);
  g.add_node(2);
  ProfileStore profiles;
  SUBCASE("identical libraries give cosine 1") {
    for (ItemId b : {1u, 2u, 3u}) {
      profiles.ensure(1).add_book(b);
      profiles.ensure(2).add_book(b);
    }
    CHECK(extract_features(g, profiles, 1, 2).sim_library == doctest::Approx(1.0));
  }
  SUBCASE("disjoint libraries give cosine 0") {
    profiles.ensure(1).add_book(1);
    profiles.ensure(2).add_book(9);
    CHECK(extract_features(g, profiles, 1, 2).sim_library == 0.0);
  }
  SUBCASE("empty sets give cosine 0") {
    CHECK(extract_features(g, profiles, 1, 2).sim_library == 0.0);
    CHECK(extract_features(g, profiles, 1, 2).sim_groups == 0.0);
    CHECK(extract_features(g, profiles, 1, 2).sim_contacts == 0.0);
  }
}

TEST_CASE("zero out-degree defines overlap and allocation as zero") {
  SocialGraph g;
  g.add_node(1);
  g.add_node(2);
  g.add_social_arc(2, 1, TieType::friendship);
  ProfileStore profiles;
  const FeatureVector f = extract_features(g, profiles, 1, 2);
  CHECK(f.triangle_overlap == 0.0);
  CHECK(f.resource_allocation == 0.0);
  // the inverse arc (2,1) exists, so the pair (1,2) reads as reciprocated
  CHECK(f.reciprocation == 1.0);
  CHECK(extract_features(g, profiles, 2, 1).reciprocation == 0.0);
  g.add_social_arc(1, 2, TieType::friendship);
  CHECK(extract_features(g, profiles, 2, 1).reciprocation == 1.0);
}

TEST_CASE("smallest common group decides group size") {
  SocialGraph g;
  g.add_node(1);
  g.add_node(2);
  ProfileStore profiles;
  // group 5 has 3 members, group 6 has 2
  profiles.ensure(1).add_group(5);
  profiles.ensure(2).add_group(5);
  profiles.ensure(3).add_group(5);
  profiles.ensure(1).add_group(6);
  profiles.ensure(2).add_group(6);
  CHECK(extract_features(g, profiles, 1, 2).common_group_size == doctest::Approx(2.0));
  // no shared group reads as 0
  profiles.ensure(4);
  g.add_node(4);
  CHECK(extract_features(g, profiles, 1, 4).common_group_size == 0.0);
}

TEST_CASE("resource allocation is bounded and vanishes with common neighbors") {
  Rng rng(131);
  for (int round = 0; round < 6; ++round) {
    const std::size_t n = 8 + rng.index(16);
    auto [g, arcs] = support::random_social_graph(n, 0.2, rng);
    ProfileStore profiles;
    for (UserId u = 0; u < n; ++u) {
      for (UserId v = 0; v < n; ++v) {
        if (u == v) continue;
        const FeatureVector f = extract_features(g, profiles, u, v);
        if (f.common_neighbors == 0.0) {
          CHECK(f.resource_allocation == 0.0);
        } else {
          CHECK(f.resource_allocation > 0.0);
          // every intermediary has out-degree >= 1
          CHECK(f.resource_allocation <=
                f.common_neighbors / static_cast<double>(g.k_out(u)) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("features match the brute-force oracle on random graphs") {
  Rng rng(101);
  for (int round = 0; round < 12; ++round) {
    const std::size_t n = 5 + rng.index(20);
    auto [g, arcs] = support::random_social_graph(n, 0.18, rng);
    ProfileStore profiles = support::random_profiles(n, 25, 8, rng);
    for (UserId u = 0; u < n; ++u) {
      for (UserId v = 0; v < n; ++v) {
        if (u == v) continue;
        CHECK(extract_features(g, profiles, u, v) ==
              oracle::brute_features(arcs, profiles, u, v));
      }
    }
  }
}

TEST_CASE("training set construction") {
  SocialGraph t0;
  for (UserId u = 0; u < 4; ++u) t0.add_node(u);
  t0.add_social_arc(0, 1, TieType::friendship);
  t0.add_social_arc(1, 2, TieType::friendship);
  t0.add_social_arc(1, 3, TieType::friendship);  // (0,3) stays unlinked: a negative
  SocialGraph t1 = t0;
  ProfileStore profiles;

  SUBCASE("a closed distance-2 pair is an eligible positive") {
    t1.add_social_arc(0, 2, TieType::friendship);
    const TrainingSet set = build_training_set(t0, t1, profiles, 2, 9);
    REQUIRE(set.pairs.size() == 2);
    CHECK(set.positives_available == 1);
    CHECK(set.pairs[0].u == 0);
    CHECK(set.pairs[0].v == 2);
    CHECK(set.pairs[0].label);
    CHECK_FALSE(set.pairs[1].label);
  }
  SUBCASE("identical snapshots are degenerate") {
    const TrainingSet set = build_training_set(t0, t1, profiles, 4, 9);
    CHECK(set.degenerate);
    CHECK(set.pairs.empty());
  }
  SUBCASE("odd pair counts are rejected") {
    CHECK_THROWS_AS(build_training_set(t0, t1, profiles, 3, 9), std::invalid_argument);
  }
  SUBCASE("t1 must contain t0's nodes") {
    SocialGraph smaller;
    smaller.add_node(0);
    CHECK_THROWS_AS(build_training_set(t0, smaller, profiles, 2, 9), std::invalid_argument);
  }
}

TEST_CASE("training set is balanced and shrinks on positive shortage") {
  GeneratorConfig cfg;
  cfg.n_nodes = 400;
  cfg.catalog_size = 2000;
  cfg.group_count = 40;
  cfg.seed = 21;
  const Snapshots snaps = grow_snapshots(cfg);

  SUBCASE("balanced when enough positives exist") {
    const TrainingSet set = build_training_set(snaps.t0, snaps.t1, snaps.profiles, 200, 3);
    CHECK_FALSE(set.degenerate);
    std::size_t pos = 0;
    for (const auto& p : set.pairs)
      if (p.label) ++pos;
    CHECK(set.pairs.size() == 200);
    CHECK(pos == 100);
    for (const auto& p : set.pairs) {
      CHECK_FALSE(snaps.t0.has_social_arc(p.u, p.v));  // distance-2 at t0
      if (p.label) CHECK(snaps.t1.has_social_arc(p.u, p.v));
    }
  }
  SUBCASE("positive shortage shrinks both classes") {
    const TrainingSet set =
        build_training_set(snaps.t0, snaps.t1, snaps.profiles, 100000, 3);
    CHECK(set.shrunk);
    std::size_t pos = 0;
    for (const auto& p : set.pairs)
      if (p.label) ++pos;
    CHECK(pos * 2 == set.pairs.size());
    CHECK(pos == set.positives_available);
  }
}

TEST_CASE("training on a separable set reaches accuracy 1") {
  const auto pairs = separable_pairs(60);
  const ClassifierModel model = train(pairs, 15, 5);
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    const bool predicted = model.confidence(p.features) > 0.5;
    if (predicted == p.label) ++correct;
  }
  CHECK(correct == pairs.size());
}

TEST_CASE("training is deterministic per seed") {
  const auto pairs = separable_pairs(40);
  const ClassifierModel a = train(pairs, 9, 1234);
  const ClassifierModel b = train(pairs, 9, 1234);
  std::ostringstream sa, sb;
  a.write(sa);
  b.write(sb);
  CHECK(sa.str() == sb.str());

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    FeatureVector f;
    f.common_neighbors = static_cast<double>(rng.index(5));
    f.sim_library = rng.next_real();
    CHECK(a.confidence(f) == b.confidence(f));
  }
}

TEST_CASE("single-class training input is rejected") {
  std::vector<LabeledPair> pairs(10);
  for (auto& p : pairs) p.label = true;
  CHECK_THROWS_AS(train(pairs, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(train({}, 5, 1), std::invalid_argument);
}

TEST_CASE("model files round-trip") {
  const auto pairs = separable_pairs(30);
  const ClassifierModel model = train(pairs, 7, 99);
  std::ostringstream out;
  model.write(out);
  std::istringstream in(out.str());
  const ClassifierModel loaded = ClassifierModel::read(in);
  CHECK(loaded.tree_count() == model.tree_count());
  for (const auto& p : pairs)
    CHECK(loaded.confidence(p.features) == model.confidence(p.features));

  std::ostringstream again;
  loaded.write(again);
  CHECK(again.str() == out.str());
}

TEST_CASE("auc rank statistic") {
  SUBCASE("perfect scorer") {
    std::vector<std::pair<double, bool>> scored;
    for (int i = 0; i < 50; ++i) {
      scored.emplace_back(0.9 + 0.001 * i, true);
      scored.emplace_back(0.1 + 0.001 * i, false);
    }
    CHECK(auc_from_scores(scored) == doctest::Approx(1.0));
  }
  SUBCASE("anti-perfect scorer") {
    std::vector<std::pair<double, bool>> scored;
    for (int i = 0; i < 50; ++i) {
      scored.emplace_back(0.1, true);
      scored.emplace_back(0.9, false);
    }
    CHECK(auc_from_scores(scored) == doctest::Approx(0.0));
  }
  SUBCASE("random scorer sits near one half") {
    Rng rng(55);
    std::vector<std::pair<double, bool>> scored;
    for (int i = 0; i < 4000; ++i) scored.emplace_back(rng.next_real(), rng.bernoulli(0.5));
    CHECK(auc_from_scores(scored) == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::fabs(auc_from_scores(scored) - 0.5) < 0.05);
  }
  SUBCASE("one class only is an error") {
    CHECK_THROWS_AS(auc_from_scores({{0.5, true}}), std::invalid_argument);
  }
}

TEST_CASE("auc is invariant under strictly monotone score transforms") {
  Rng rng(66);
  std::vector<std::pair<double, bool>> scored;
  for (int i = 0; i < 500; ++i) {
    const bool label = rng.bernoulli(0.5);
    scored.emplace_back(rng.next_real() + (label ? 0.2 : 0.0), label);
  }
  const double base = auc_from_scores(scored);
  auto transformed = scored;
  for (auto& [s, l] : transformed) s = std::exp(3.0 * s) - 7.0;
  CHECK(auc_from_scores(transformed) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("cross validation") {
  const auto pairs = separable_pairs(60);
  const ModelBuilder builder = [](const std::vector<LabeledPair>& train_pairs) {
    return train(train_pairs, 9, 7);
  };
  SUBCASE("separable data scores high") {
    CHECK(evaluate_auc(builder, pairs, 5, 11) > 0.95);
  }
  SUBCASE("needs at least two folds") {
    CHECK_THROWS_AS(evaluate_auc(builder, pairs, 1, 11), std::invalid_argument);
  }
  SUBCASE("a fold without both classes is an error") {
    std::vector<LabeledPair> skewed;
    std::size_t pos = 0;
    for (const auto& p : separable_pairs(40)) {
      if (p.label && pos >= 3) continue;  // keep 3 positives, all negatives
      if (p.label) ++pos;
      skewed.push_back(p);
    }
    REQUIRE(pos == 3);  // 5 folds cannot all hold a positive
    CHECK_THROWS_AS(evaluate_auc(builder, skewed, 5, 11), std::invalid_argument);
  }
}

TEST_CASE("chi-squared ranking") {
  Rng rng(88);
  std::vector<LabeledPair> pairs;
  for (int i = 0; i < 1000; ++i) {
    LabeledPair p;
    p.label = rng.bernoulli(0.5);
    p.features.common_neighbors = p.label ? 1.0 : 0.0;          // label copy
    p.features.sim_library = rng.next_real();                   // independent noise
    p.features.sim_groups = p.label ? 0.6 + 0.4 * rng.next_real()
                                    : 0.4 * rng.next_real();    // correlated
    p.features.reciprocation = 0.5;                             // constant
    pairs.push_back(p);
  }
  const auto ranking = chi_squared_rank(pairs);
  REQUIRE(ranking.size() == kFeatureCount);
  CHECK(ranking.front().feature == "common_neighbors");

  double noise_stat = 0.0, correlated_stat = 0.0, constant_stat = -1.0;
  for (const auto& r : ranking) {
    if (r.feature == "sim_library") noise_stat = r.statistic;
    if (r.feature == "sim_groups") correlated_stat = r.statistic;
    if (r.feature == "reciprocation") constant_stat = r.statistic;
  }
  CHECK(constant_stat == 0.0);
  CHECK(correlated_stat > noise_stat);
}

TEST_CASE("recommend picks the best positive candidate") {
  SocialGraph g;
  for (UserId u = 0; u < 5; ++u) g.add_node(u);
  ProfileStore profiles;

  // one all-positive leaf: every candidate ties at confidence 1.0
  std::vector<DecisionTree::Node> leaf(1);
  leaf[0].positive_fraction = 0.9;
  ClassifierModel always_yes({DecisionTree::from_nodes(leaf)}, TreeParams{}, 0);

  SUBCASE("no candidates yields no recommendation") {
    CHECK_FALSE(recommend(always_yes, g, profiles, 0).has_value());
  }
  SUBCASE("single candidate wins") {
    g.add_social_arc(0, 1, TieType::friendship);
    g.add_social_arc(1, 2, TieType::friendship);
    const auto rec = recommend(always_yes, g, profiles, 0);
    REQUIRE(rec.has_value());
    CHECK(rec->suggestion == 2);
    CHECK(rec->confidence == doctest::Approx(1.0));
  }
  SUBCASE("ties break toward the smaller user id") {
    g.add_social_arc(0, 1, TieType::friendship);
    g.add_social_arc(1, 4, TieType::friendship);
    g.add_social_arc(1, 3, TieType::friendship);
    const auto rec = recommend(always_yes, g, profiles, 0);
    REQUIRE(rec.has_value());
    CHECK(rec->suggestion == 3);
  }
  SUBCASE("an all-negative model recommends nothing") {
    std::vector<DecisionTree::Node> no(1);
    no[0].positive_fraction = 0.1;
    ClassifierModel always_no({DecisionTree::from_nodes(no)}, TreeParams{}, 0);
    g.add_social_arc(0, 1, TieType::friendship);
    g.add_social_arc(1, 2, TieType::friendship);
    CHECK_FALSE(recommend(always_no, g, profiles, 0).has_value());
  }
}

TEST_CASE("recommendations never point at existing contacts or self") {
  Rng rng(121);
  auto [g, arcs] = support::random_social_graph(30, 0.12, rng);
  ProfileStore profiles = support::random_profiles(30, 25, 8, rng);
  std::vector<DecisionTree::Node> leaf(1);
  leaf[0].positive_fraction = 1.0;
  ClassifierModel always_yes({DecisionTree::from_nodes(leaf)}, TreeParams{}, 0);
  for (UserId u : g.nodes()) {
    const auto rec = recommend(always_yes, g, profiles, u);
    if (!rec) continue;
    CHECK(rec->suggestion != u);
    CHECK_FALSE(g.has_social_arc(u, rec->suggestion));
  }
}

}  // TEST_SUITE
