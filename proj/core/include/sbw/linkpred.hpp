// Feature-based directed-link recommendation: the eight structural and
// profile features, balanced temporal training-set construction, a bagged
// decision-tree classifier with vote-share confidence, chi-squared feature
// ranking, cross-validated AUC, and top-1 recommendation over distance-2
// candidates.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sbw/corpus.hpp"
#include "sbw/graph.hpp"
#include "sbw/rng.hpp"

namespace sbw {

inline constexpr std::size_t kFeatureCount = 8;

struct FeatureVector {
  double common_neighbors = 0.0;    // |out(u) n in(v)|
  double triangle_overlap = 0.0;    // common_neighbors / k_out(u), 0 when k_out(u)=0
  double resource_allocation = 0.0; // (1/k_out(u)) sum_z 1/k_out(z)
  double reciprocation = 0.0;       // 1 iff arc (v,u) exists
  double sim_contacts = 0.0;        // cosine of out-neighbor sets
  double sim_library = 0.0;         // cosine of library sets
  double sim_groups = 0.0;          // cosine of group sets
  double common_group_size = 0.0;   // size of the smallest shared group, 0 if none

  std::array<double, kFeatureCount> values() const {
    return {common_neighbors, triangle_overlap, resource_allocation, reciprocation,
            sim_contacts,     sim_library,      sim_groups,          common_group_size};
  }
  bool operator==(const FeatureVector&) const = default;
};

const std::array<std::string, kFeatureCount>& feature_names();

FeatureVector extract_features(const SocialGraph& g, const ProfileStore& profiles, UserId u,
                               UserId v);

struct LabeledPair {
  UserId u = 0;
  UserId v = 0;
  FeatureVector features;
  bool label = false;  // link formed in the next window
};

struct TrainingSet {
  std::vector<LabeledPair> pairs;
  std::size_t positives_available = 0;
  bool shrunk = false;      // fewer positives than requested
  bool degenerate = false;  // no positives at all
};

// Balanced sample of distance-2 pairs: positives are pairs linked in
// g_t1 but not in g_t0, negatives stay unlinked; features come from g_t0.
// n_pairs must be even. When fewer positives exist than n_pairs/2, all of
// them are used and negatives shrink to match (shrunk flag set).
TrainingSet build_training_set(const SocialGraph& g_t0, const SocialGraph& g_t1,
                               const ProfileStore& profiles, std::size_t n_pairs,
                               std::uint64_t seed);

struct TreeParams {
  int max_depth = 8;
  int min_leaf = 5;
};

// Single binary decision tree; thresholds chosen by information gain.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;        // -1 for leaves
    double threshold = 0.0;  // go left when value <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    double positive_fraction = 0.0;
    std::uint32_t samples = 0;
  };

  static DecisionTree fit(const std::vector<std::array<double, kFeatureCount>>& rows,
                          const std::vector<bool>& labels,
                          const std::vector<std::uint32_t>& sample_indices,
                          const TreeParams& params);

  bool vote(const std::array<double, kFeatureCount>& row) const;
  double leaf_fraction(const std::array<double, kFeatureCount>& row) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  static DecisionTree from_nodes(std::vector<Node> nodes);

 private:
  std::vector<Node> nodes_;  // preorder, root at 0
};

// Bootstrap-aggregated decision trees; confidence is the share of trees
// voting positive, so it lies in [0,1] and is deterministic per model.
class ClassifierModel {
 public:
  ClassifierModel() = default;
  ClassifierModel(std::vector<DecisionTree> trees, TreeParams params, std::uint64_t seed);

  double confidence(const FeatureVector& features) const;
  double confidence(const std::array<double, kFeatureCount>& row) const;

  std::size_t tree_count() const { return trees_.size(); }
  const TreeParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  // Self-describing text format: parameters, feature order, then each tree
  // as nested split records.
  void save(const std::string& path) const;
  static ClassifierModel load(const std::string& path);
  void write(std::ostream& out) const;
  static ClassifierModel read(std::istream& in, std::string_view origin = "<stream>");

 private:
  std::vector<DecisionTree> trees_;
  TreeParams params_;
  std::uint64_t seed_ = 0;
};

// Trains tree_count trees on bootstrap resamples of pairs. Throws when
// pairs is empty or contains a single class.
ClassifierModel train(const std::vector<LabeledPair>& pairs, int tree_count, std::uint64_t seed,
                      TreeParams params = {});

// AUC of scored examples by the rank statistic (ties get average ranks).
double auc_from_scores(const std::vector<std::pair<double, bool>>& scored);

using ModelBuilder = std::function<ClassifierModel(const std::vector<LabeledPair>&)>;

// Mean AUC over stratified folds; every fold must hold both classes.
double evaluate_auc(const ModelBuilder& builder, const std::vector<LabeledPair>& pairs,
                    std::size_t folds, std::uint64_t seed);

struct FeatureScore {
  std::string feature;
  double statistic = 0.0;
};

// Chi-squared statistic of each feature against the label after
// discretization into 10 equal-width bins, descending.
std::vector<FeatureScore> chi_squared_rank(const std::vector<LabeledPair>& pairs);

struct Recommendation {
  UserId suggestion = 0;
  double confidence = 0.0;
};

// Classifies u against every distance-2 candidate, keeps confidences above
// 0.5 and returns the best one (ties resolved toward the smallest user id).
std::optional<Recommendation> recommend(const ClassifierModel& model, const SocialGraph& g,
                                        const ProfileStore& profiles, UserId u);

}  // namespace sbw
