#include "sbw/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbw {

namespace {

std::uint32_t intersection_size(std::span<const UserId> a, std::span<const UserId> b) {
  std::uint32_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double cosine(std::span<const UserId> a, std::span<const UserId> b) {
  if (a.empty() || b.empty()) return 0.0;
  const double common = intersection_size(a, b);
  return common / std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double cosine32(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.empty() || b.empty()) return 0.0;
  std::uint32_t common = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common / std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "common_neighbors", "triangle_overlap", "resource_allocation", "reciprocation",
      "sim_contacts",     "sim_library",      "sim_groups",          "common_group_size"};
  return names;
}

FeatureVector extract_features(const SocialGraph& g, const ProfileStore& profiles, UserId u,
                               UserId v) {
  if (u == v) throw std::invalid_argument("features of a pair with identical endpoints");
  FeatureVector f;

  auto out_u = g.out_neighbors(u, Layer::social);
  auto in_v = g.in_neighbors(v, Layer::social);
  const std::size_t k_out_u = out_u.size();

  // common neighbors, triangle overlap, resource allocation in one merge;
  // the intermediaries are walked in ascending id order so the sum is
  // evaluation-order deterministic.
  std::uint32_t cn = 0;
  double ra_sum = 0.0;
  {
    std::size_t i = 0, j = 0;
    while (i < out_u.size() && j < in_v.size()) {
      if (out_u[i] < in_v[j]) {
        ++i;
      } else if (in_v[j] < out_u[i]) {
        ++j;
      } else {
        ++cn;
        ra_sum += 1.0 / static_cast<double>(g.k_out(out_u[i]));
        ++i;
        ++j;
      }
    }
  }
  f.common_neighbors = cn;
  if (k_out_u > 0) {
    f.triangle_overlap = static_cast<double>(cn) / static_cast<double>(k_out_u);
    f.resource_allocation = ra_sum / static_cast<double>(k_out_u);
  }

  f.reciprocation = g.has_social_arc(v, u) ? 1.0 : 0.0;
  f.sim_contacts = cosine(out_u, g.out_neighbors(v, Layer::social));

  const Profile& pu = profiles.at_or_empty(u);
  const Profile& pv = profiles.at_or_empty(v);
  f.sim_library = cosine32(pu.library, pv.library);
  f.sim_groups = cosine32(pu.groups, pv.groups);

  std::size_t smallest = 0;
  {
    std::size_t i = 0, j = 0;
    while (i < pu.groups.size() && j < pv.groups.size()) {
      if (pu.groups[i] < pv.groups[j]) {
        ++i;
      } else if (pv.groups[j] < pu.groups[i]) {
        ++j;
      } else {
        std::size_t size = profiles.group_size(pu.groups[i]);
        if (smallest == 0 || size < smallest) smallest = size;
        ++i;
        ++j;
      }
    }
  }
  f.common_group_size = static_cast<double>(smallest);
  return f;
}

TrainingSet build_training_set(const SocialGraph& g_t0, const SocialGraph& g_t1,
                               const ProfileStore& profiles, std::size_t n_pairs,
                               std::uint64_t seed) {
  if (n_pairs == 0 || n_pairs % 2 != 0)
    throw std::invalid_argument("n_pairs must be even and positive");
  for (UserId u : g_t0.nodes()) {
    if (!g_t1.has_node(u))
      throw std::invalid_argument("snapshot t1 is missing node " + std::to_string(u));
  }

  Rng rng(derive_seed(seed, "training-set"));
  const std::size_t want = n_pairs / 2;

  std::vector<std::pair<UserId, UserId>> positives;
  std::vector<std::pair<UserId, UserId>> negative_sample;  // reservoir
  std::size_t negatives_seen = 0;

  for (UserId u : g_t0.nodes()) {
    for (UserId w : g_t0.distance2_out_candidates(u)) {
      if (g_t1.has_social_arc(u, w)) {
        positives.emplace_back(u, w);
      } else {
        ++negatives_seen;
        if (negative_sample.size() < want) {
          negative_sample.emplace_back(u, w);
        } else {
          std::size_t slot = rng.index(negatives_seen);
          if (slot < want) negative_sample[slot] = {u, w};
        }
      }
    }
  }

  TrainingSet set;
  set.positives_available = positives.size();
  if (positives.empty()) {
    set.degenerate = true;
    set.shrunk = true;
    return set;
  }

  if (positives.size() > want) {
    rng.shuffle(positives);
    positives.resize(want);
  } else if (positives.size() < want) {
    set.shrunk = true;
  }
  std::size_t take = std::min(positives.size(), negative_sample.size());
  if (take < positives.size()) {
    set.shrunk = true;
    positives.resize(take);
  }
  rng.shuffle(negative_sample);
  negative_sample.resize(take);

  set.pairs.reserve(2 * take);
  for (const auto& [u, w] : positives)
    set.pairs.push_back({u, w, extract_features(g_t0, profiles, u, w), true});
  for (const auto& [u, w] : negative_sample)
    set.pairs.push_back({u, w, extract_features(g_t0, profiles, u, w), false});
  return set;
}

double auc_from_scores(const std::vector<std::pair<double, bool>>& scored) {
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& [score, label] : scored) (label ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("auc requires both classes");

  std::vector<std::pair<double, bool>> sorted = scored;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // rank statistic with average ranks on ties
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (sorted[k].second) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double evaluate_auc(const ModelBuilder& builder, const std::vector<LabeledPair>& pairs,
                    std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");

  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    (pairs[i].label ? pos_idx : neg_idx).push_back(i);

  Rng rng(derive_seed(seed, "cv"));
  rng.shuffle(pos_idx);
  rng.shuffle(neg_idx);

  std::vector<std::size_t> fold_of(pairs.size());
  for (std::size_t i = 0; i < pos_idx.size(); ++i) fold_of[pos_idx[i]] = i % folds;
  for (std::size_t i = 0; i < neg_idx.size(); ++i) fold_of[neg_idx[i]] = i % folds;

  double auc_sum = 0.0;
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<LabeledPair> train_pairs;
    std::vector<std::pair<double, bool>> scored;
    std::size_t test_pos = 0, test_neg = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (fold_of[i] == fold) {
        (pairs[i].label ? test_pos : test_neg)++;
      } else {
        train_pairs.push_back(pairs[i]);
      }
    }
    if (test_pos == 0 || test_neg == 0)
      throw std::invalid_argument("fold " + std::to_string(fold) + " lacks one of the classes");

    ClassifierModel model = builder(train_pairs);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (fold_of[i] == fold)
        scored.emplace_back(model.confidence(pairs[i].features), pairs[i].label);
    }
    auc_sum += auc_from_scores(scored);
  }
  return auc_sum / static_cast<double>(folds);
}

std::vector<FeatureScore> chi_squared_rank(const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("chi-squared ranking of an empty set");
  constexpr std::size_t kBins = 10;

  std::vector<FeatureScore> scores;
  scores.reserve(kFeatureCount);
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double lo = pairs[0].features.values()[f];
    double hi = lo;
    for (const auto& p : pairs) {
      double v = p.features.values()[f];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double stat = 0.0;
    if (hi > lo) {
      std::size_t observed[2][kBins] = {};
      const double width = (hi - lo) / static_cast<double>(kBins);
      for (const auto& p : pairs) {
        double v = p.features.values()[f];
        auto bin = static_cast<std::size_t>((v - lo) / width);
        if (bin >= kBins) bin = kBins - 1;
        ++observed[p.label ? 1 : 0][bin];
      }
      double row_total[2] = {};
      double col_total[kBins] = {};
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < kBins; ++c) {
          row_total[r] += static_cast<double>(observed[r][c]);
          col_total[c] += static_cast<double>(observed[r][c]);
        }
      }
      const double n = row_total[0] + row_total[1];
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < kBins; ++c) {
          const double expected = row_total[r] * col_total[c] / n;
          if (expected > 0.0) {
            const double d = static_cast<double>(observed[r][c]) - expected;
            stat += d * d / expected;
          }
        }
      }
    }
    scores.push_back({feature_names()[f], stat});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) {
                     return a.statistic > b.statistic;
                   });
  return scores;
}

std::optional<Recommendation> recommend(const ClassifierModel& model, const SocialGraph& g,
                                        const ProfileStore& profiles, UserId u) {
  std::optional<Recommendation> best;
  for (UserId w : g.distance2_out_candidates(u)) {
    const double conf = model.confidence(extract_features(g, profiles, u, w));
    if (conf <= 0.5) continue;  // only positive responses are eligible
    if (!best || conf > best->confidence) best = Recommendation{w, conf};
  }
  return best;
}

}  // namespace sbw
