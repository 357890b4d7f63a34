// Bagged decision trees behind the ClassifierModel contract: information
// gain splits, depth and leaf-size limits, majority-vote confidence.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sbw/linkpred.hpp"

namespace sbw {

namespace {

// impurity bookkeeping in counts: total * H(pos/total) via a k*log2(k)
// table, so the threshold scan stays free of log calls
struct EntropyTable {
  std::vector<double> klogk;

  explicit EntropyTable(std::size_t max_count) {
    klogk.resize(max_count + 1, 0.0);
    for (std::size_t k = 2; k <= max_count; ++k)
      klogk[k] = static_cast<double>(k) * std::log2(static_cast<double>(k));
  }

  double scaled(std::size_t pos, std::size_t total) const {
    return klogk[total] - klogk[pos] - klogk[total - pos];
  }
};

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

}  // namespace

DecisionTree DecisionTree::from_nodes(std::vector<Node> nodes) {
  DecisionTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

bool DecisionTree::vote(const std::array<double, kFeatureCount>& row) const {
  return leaf_fraction(row) > 0.5;
}

double DecisionTree::leaf_fraction(const std::array<double, kFeatureCount>& row) const {
  std::int32_t at = 0;
  while (true) {
    const Node& n = nodes_[static_cast<std::size_t>(at)];
    if (n.feature < 0) return n.positive_fraction;
    at = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
}

DecisionTree DecisionTree::fit(const std::vector<std::array<double, kFeatureCount>>& rows,
                               const std::vector<bool>& labels,
                               const std::vector<std::uint32_t>& sample_indices,
                               const TreeParams& params) {
  DecisionTree tree;
  if (sample_indices.empty()) throw std::invalid_argument("empty bootstrap sample");
  const EntropyTable table(sample_indices.size());

  struct Pending {
    std::vector<std::uint32_t> samples;
    int depth;
    std::int32_t slot;
  };

  std::vector<Pending> stack;
  tree.nodes_.emplace_back();
  stack.push_back({sample_indices, 0, 0});

  std::vector<std::uint64_t> column;
  while (!stack.empty()) {
    Pending task = std::move(stack.back());
    stack.pop_back();

    std::size_t pos = 0;
    for (std::uint32_t i : task.samples)
      if (labels[i]) ++pos;
    const std::size_t total = task.samples.size();

    Node& placeholder = tree.nodes_[static_cast<std::size_t>(task.slot)];
    placeholder.samples = static_cast<std::uint32_t>(total);
    placeholder.positive_fraction = static_cast<double>(pos) / static_cast<double>(total);

    const bool pure = pos == 0 || pos == total;
    if (pure || task.depth >= params.max_depth ||
        total < 2 * static_cast<std::size_t>(params.min_leaf)) {
      continue;  // stays a leaf
    }

    // gains are compared scaled by the node size; the ordering is the same
    const double parent_scaled = table.scaled(pos, total);
    Split best;
    for (int f = 0; f < static_cast<int>(kFeatureCount); ++f) {
      // every feature is non-negative, so the IEEE bit pattern orders the
      // values; packing value<<1 | label keeps the sort to plain uint64s
      column.clear();
      column.reserve(total);
      for (std::uint32_t i : task.samples) {
        const double value = rows[i][static_cast<std::size_t>(f)];
        std::uint64_t bits;
        std::memcpy(&bits, &value, sizeof(bits));
        column.push_back((bits << 1) | (labels[i] ? 1u : 0u));
      }
      std::sort(column.begin(), column.end());
      auto value_of = [](std::uint64_t key) {
        const std::uint64_t bits = key >> 1;
        double value;
        std::memcpy(&value, &bits, sizeof(value));
        return value;
      };
      if ((column.front() >> 1) == (column.back() >> 1)) continue;

      std::size_t left_n = 0, left_pos = 0;
      std::size_t i = 0;
      while (i < total) {
        std::size_t j = i;
        while (j < total && (column[j] >> 1) == (column[i] >> 1)) {
          left_pos += column[j] & 1u;
          ++j;
        }
        left_n = j;
        if (j == total) break;
        if (left_n >= static_cast<std::size_t>(params.min_leaf) &&
            total - left_n >= static_cast<std::size_t>(params.min_leaf)) {
          const double gain = (parent_scaled - table.scaled(left_pos, left_n) -
                               table.scaled(pos - left_pos, total - left_n)) /
                              static_cast<double>(total);
          if (gain > best.gain + 1e-12) {
            best.feature = f;
            best.threshold = 0.5 * (value_of(column[j - 1]) + value_of(column[j]));
            best.gain = gain;
          }
        }
        i = j;
      }
    }

    if (best.feature < 0) continue;  // no usable split, stays a leaf

    std::vector<std::uint32_t> left, right;
    left.reserve(total);
    right.reserve(total);
    for (std::uint32_t i : task.samples) {
      (rows[i][static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right)
          .push_back(i);
    }

    const auto left_slot = static_cast<std::int32_t>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    const auto right_slot = static_cast<std::int32_t>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    Node& parent = tree.nodes_[static_cast<std::size_t>(task.slot)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = left_slot;
    parent.right = right_slot;

    stack.push_back({std::move(right), task.depth + 1, right_slot});
    stack.push_back({std::move(left), task.depth + 1, left_slot});
  }
  return tree;
}

ClassifierModel::ClassifierModel(std::vector<DecisionTree> trees, TreeParams params,
                                 std::uint64_t seed)
    : trees_(std::move(trees)), params_(params), seed_(seed) {}

double ClassifierModel::confidence(const FeatureVector& features) const {
  return confidence(features.values());
}

double ClassifierModel::confidence(const std::array<double, kFeatureCount>& row) const {
  if (trees_.empty()) throw std::logic_error("confidence from an untrained model");
  std::size_t votes = 0;
  for (const auto& tree : trees_)
    if (tree.vote(row)) ++votes;
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

ClassifierModel train(const std::vector<LabeledPair>& pairs, int tree_count, std::uint64_t seed,
                      TreeParams params) {
  if (pairs.empty()) throw std::invalid_argument("training on an empty set");
  if (tree_count <= 0) throw std::invalid_argument("tree_count must be positive");
  std::size_t pos = 0;
  for (const auto& p : pairs)
    if (p.label) ++pos;
  if (pos == 0 || pos == pairs.size())
    throw std::invalid_argument("training set holds a single class");

  std::vector<std::array<double, kFeatureCount>> rows;
  rows.reserve(pairs.size());
  std::vector<bool> labels;
  labels.reserve(pairs.size());
  for (const auto& p : pairs) {
    rows.push_back(p.features.values());
    labels.push_back(p.label);
  }

  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(tree_count));
  const std::size_t n = pairs.size();
  for (int t = 0; t < tree_count; ++t) {
    Rng rng(derive_seed(seed, "tree#" + std::to_string(t)));
    std::vector<std::uint32_t> bootstrap(n);
    for (auto& idx : bootstrap) idx = static_cast<std::uint32_t>(rng.index(n));
    trees.push_back(DecisionTree::fit(rows, labels, bootstrap, params));
  }
  return ClassifierModel(std::move(trees), params, seed);
}

namespace {

void write_node(std::ostream& out, const std::vector<DecisionTree::Node>& nodes,
                std::int32_t at, int indent) {
  const auto& n = nodes[static_cast<std::size_t>(at)];
  for (int i = 0; i < indent; ++i) out << ' ';
  char buf[64];
  if (n.feature < 0) {
    std::snprintf(buf, sizeof(buf), "%.17g", n.positive_fraction);
    out << "leaf " << buf << ' ' << n.samples << '\n';
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g", n.threshold);
    out << "split " << n.feature << ' ' << buf << '\n';
    write_node(out, nodes, n.left, indent + 2);
    write_node(out, nodes, n.right, indent + 2);
  }
}

std::int32_t read_node(std::istream& in, std::vector<DecisionTree::Node>& nodes,
                       std::string_view origin) {
  std::string word;
  if (!(in >> word)) throw std::runtime_error(std::string(origin) + ": truncated tree");
  const auto slot = static_cast<std::int32_t>(nodes.size());
  nodes.emplace_back();
  if (word == "leaf") {
    double fraction = 0.0;
    std::uint32_t samples = 0;
    if (!(in >> fraction >> samples))
      throw std::runtime_error(std::string(origin) + ": malformed leaf record");
    nodes[static_cast<std::size_t>(slot)].positive_fraction = fraction;
    nodes[static_cast<std::size_t>(slot)].samples = samples;
  } else if (word == "split") {
    int feature = 0;
    double threshold = 0.0;
    if (!(in >> feature >> threshold) || feature < 0 ||
        feature >= static_cast<int>(kFeatureCount))
      throw std::runtime_error(std::string(origin) + ": malformed split record");
    const std::int32_t left = read_node(in, nodes, origin);
    const std::int32_t right = read_node(in, nodes, origin);
    auto& n = nodes[static_cast<std::size_t>(slot)];
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
  } else {
    throw std::runtime_error(std::string(origin) + ": unexpected token '" + word + "'");
  }
  return slot;
}

}  // namespace

void ClassifierModel::write(std::ostream& out) const {
  out << "sbw-model v1\n";
  out << "tree_count " << trees_.size() << '\n';
  out << "max_depth " << params_.max_depth << '\n';
  out << "min_leaf " << params_.min_leaf << '\n';
  out << "seed " << seed_ << '\n';
  out << "features";
  for (const auto& name : feature_names()) out << ' ' << name;
  out << '\n';
  for (const auto& tree : trees_) {
    out << "tree\n";
    write_node(out, tree.nodes(), 0, 2);
    out << "end\n";
  }
}

ClassifierModel ClassifierModel::read(std::istream& in, std::string_view origin) {
  std::string line;
  if (!std::getline(in, line) || line != "sbw-model v1")
    throw std::runtime_error(std::string(origin) + ": not a sbw-model v1 file");

  std::size_t tree_count = 0;
  TreeParams params;
  std::uint64_t seed = 0;
  std::string word;
  if (!(in >> word >> tree_count) || word != "tree_count")
    throw std::runtime_error(std::string(origin) + ": missing tree_count");
  if (!(in >> word >> params.max_depth) || word != "max_depth")
    throw std::runtime_error(std::string(origin) + ": missing max_depth");
  if (!(in >> word >> params.min_leaf) || word != "min_leaf")
    throw std::runtime_error(std::string(origin) + ": missing min_leaf");
  if (!(in >> word >> seed) || word != "seed")
    throw std::runtime_error(std::string(origin) + ": missing seed");
  if (!(in >> word) || word != "features")
    throw std::runtime_error(std::string(origin) + ": missing feature list");
  for (const auto& expected : feature_names()) {
    if (!(in >> word) || word != expected)
      throw std::runtime_error(std::string(origin) + ": unexpected feature order near '" +
                               word + "'");
  }

  std::vector<DecisionTree> trees;
  trees.reserve(tree_count);
  for (std::size_t t = 0; t < tree_count; ++t) {
    if (!(in >> word) || word != "tree")
      throw std::runtime_error(std::string(origin) + ": expected tree " + std::to_string(t));
    std::vector<DecisionTree::Node> nodes;
    read_node(in, nodes, origin);
    if (!(in >> word) || word != "end")
      throw std::runtime_error(std::string(origin) + ": unterminated tree " + std::to_string(t));
    trees.push_back(DecisionTree::from_nodes(std::move(nodes)));
  }
  return ClassifierModel(std::move(trees), params, seed);
}

void ClassifierModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path);
  write(out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

ClassifierModel ClassifierModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  return read(in, path);
}

}  // namespace sbw
