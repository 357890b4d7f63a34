// Synthetic network growth: preferential attachment over a Fenwick tree of
// node weights, blended with library-cosine homophily over a short
// candidate pool, plus a communication baseline on top of the social layer.
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbw/rng.hpp"
#include "sbw/simulator.hpp"

namespace sbw {

namespace {

class FenwickTree {
 public:
  explicit FenwickTree(std::size_t n) : tree_(n + 1, 0.0) {}

  void add(std::size_t i, double delta) {
    for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t j = tree_.size() - 1; j > 0; j -= j & (~j + 1)) s += tree_[j];
    return s;
  }

  // largest index whose prefix sum is <= x; x in [0, total)
  std::size_t sample(double x) const {
    std::size_t pos = 0;
    std::size_t mask = 1;
    while (mask * 2 < tree_.size()) mask *= 2;
    for (; mask > 0; mask /= 2) {
      std::size_t next = pos + mask;
      if (next < tree_.size() && tree_[next] <= x) {
        x -= tree_[next];
        pos = next;
      }
    }
    return pos;  // 0-based element index
  }

 private:
  std::vector<double> tree_;
};

double set_cosine(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t i = 0, j = 0, common = 0;
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
  return static_cast<double>(common) /
         std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

void validate(const GeneratorConfig& cfg) {
  if (cfg.n_nodes < 10) throw std::invalid_argument("generator needs at least 10 nodes");
  if (cfg.arcs_per_node == 0 || cfg.arcs_per_node >= cfg.n_nodes)
    throw std::invalid_argument("arcs_per_node must be in [1, n_nodes)");
  auto probability = [](double p, const char* name) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument(std::string(name) + " must be in [0,1]");
  };
  probability(cfg.reciprocation_prob, "reciprocation_prob");
  probability(cfg.comm_arc_prob, "comm_arc_prob");
  if (cfg.homophily_strength < 0.0)
    throw std::invalid_argument("homophily_strength must be non-negative");
  if (cfg.genre_count == 0 || cfg.group_count == 0 || cfg.catalog_size == 0)
    throw std::invalid_argument("catalog, genre and group counts must be positive");
  if (cfg.candidate_pool == 0) throw std::invalid_argument("candidate_pool must be positive");
  if (cfg.books_mean <= static_cast<double>(cfg.min_books))
    throw std::invalid_argument("books_mean must exceed min_books");
}

struct Taste {
  std::uint32_t primary_genre = 0;
  std::uint32_t secondary_genre = 0;
};

// Skewed index inside a slice: low indices (popular items) more likely.
std::uint32_t skewed_index(Rng& rng, std::size_t slice) {
  const double r = rng.next_real();
  return static_cast<std::uint32_t>(static_cast<double>(slice) * r * r);
}

Profile draw_profile(UserId u, Taste& taste, const GeneratorConfig& cfg, Rng& rng) {
  Profile p;
  p.user = u;
  taste.primary_genre = static_cast<std::uint32_t>(rng.index(cfg.genre_count));
  taste.secondary_genre = static_cast<std::uint32_t>(rng.index(cfg.genre_count));

  const std::size_t slice = cfg.catalog_size / cfg.genre_count;
  const double extra_mean = cfg.books_mean - static_cast<double>(cfg.min_books);
  const std::size_t books =
      cfg.min_books + static_cast<std::size_t>(rng.geometric(1.0 / (extra_mean + 1.0)) - 1);

  std::size_t attempts = 0;
  while (p.library.size() < books && attempts < 6 * books + 16) {
    ++attempts;
    std::uint32_t genre;
    const double pick = rng.next_real();
    if (pick < 0.60) {
      genre = taste.primary_genre;
    } else if (pick < 0.85) {
      genre = taste.secondary_genre;
    } else {
      genre = static_cast<std::uint32_t>(rng.index(cfg.genre_count));
    }
    const auto item = static_cast<ItemId>(genre * slice + skewed_index(rng, slice));
    p.add_book(item);
  }

  const std::size_t group_slice = std::max<std::size_t>(1, cfg.group_count / cfg.genre_count);
  const auto memberships = static_cast<std::size_t>(rng.poisson(cfg.groups_mean));
  for (std::size_t k = 0; k < memberships; ++k) {
    std::uint32_t genre = rng.next_real() < 0.8
                              ? taste.primary_genre
                              : static_cast<std::uint32_t>(rng.index(cfg.genre_count));
    const auto group =
        static_cast<GroupId>(genre * group_slice + skewed_index(rng, group_slice));
    p.add_group(group % static_cast<GroupId>(cfg.group_count));
  }
  return p;
}

double attachment_weight(const GeneratorConfig& cfg, std::size_t in_degree,
                         std::size_t library_size) {
  const double lib_factor = std::max(
      0.1, std::pow(static_cast<double>(library_size) / cfg.books_mean, cfg.activity_bias));
  return std::pow(static_cast<double>(in_degree + 1), cfg.attachment_exponent) * lib_factor;
}

TieType draw_tie(Rng& rng) {
  return rng.bernoulli(0.5) ? TieType::friendship : TieType::neighborhood;
}

struct GrowthState {
  SocialGraph graph;
  ProfileStore profiles;
  std::vector<std::size_t> in_degree;
  std::vector<std::size_t> lib_size;
  std::vector<UserId> arc_sources;  // one entry per social arc, for k_out-proportional draws
  FenwickTree weights;
  double per_arc_reverse_prob = 0.0;

  explicit GrowthState(std::size_t n) : in_degree(n, 0), lib_size(n, 0), weights(n) {}
};

bool add_arc(GrowthState& state, const GeneratorConfig& cfg, UserId u, UserId v, TieType tie) {
  if (state.graph.has_social_arc(u, v)) return false;
  state.graph.add_social_arc(u, v, tie);
  state.arc_sources.push_back(u);
  const double old_w = attachment_weight(cfg, state.in_degree[v], state.lib_size[v]);
  ++state.in_degree[v];
  state.weights.add(v, attachment_weight(cfg, state.in_degree[v], state.lib_size[v]) - old_w);
  return true;
}

// Forward arc plus the probabilistic reverse that realizes the configured
// measured reciprocation: a fraction p of forward arcs gains a reverse,
// which makes 2p/(1+p) of all arcs bidirectional, so p = r/(2-r).
void add_arc_with_reverse(GrowthState& state, const GeneratorConfig& cfg, Rng& rng, UserId u,
                          UserId v, TieType tie) {
  add_arc(state, cfg, u, v, tie);
  if (state.per_arc_reverse_prob > 0.0 && rng.bernoulli(state.per_arc_reverse_prob) &&
      !state.graph.has_social_arc(v, u)) {
    add_arc(state, cfg, v, u, tie);
  }
}

void synthesize_messages(GrowthState& state, const GeneratorConfig& cfg, Rng& rng) {
  if (cfg.comm_arc_prob <= 0.0) return;
  for (UserId u : state.graph.nodes()) {
    const double lib_factor =
        std::max(0.25, static_cast<double>(state.lib_size[u]) / cfg.books_mean);
    for (UserId v : state.graph.out_neighbors(u, Layer::social)) {
      if (!rng.bernoulli(cfg.comm_arc_prob)) continue;
      const double mean = std::max(1.0, cfg.messages_mean * lib_factor);
      const auto count =
          static_cast<std::uint32_t>(std::min<std::uint64_t>(rng.geometric(1.0 / mean), 200));
      state.graph.add_message(u, v, count);
    }
  }
}

GrowthState grow(const GeneratorConfig& cfg) {
  validate(cfg);
  Rng rng = Rng(cfg.seed).substream("generator");

  GrowthState state(cfg.n_nodes);
  state.per_arc_reverse_prob =
      cfg.reciprocation_prob >= 1.0 ? 1.0 : cfg.reciprocation_prob / (2.0 - cfg.reciprocation_prob);

  std::vector<Taste> tastes(cfg.n_nodes);
  const std::size_t m0 = cfg.arcs_per_node + 1;

  for (UserId u = 0; u < cfg.n_nodes; ++u) {
    state.graph.add_node(u);
    Profile p = draw_profile(u, tastes[u], cfg, rng);
    state.lib_size[u] = p.library.size();
    state.profiles.ensure(u) = std::move(p);
    if (u < m0) state.weights.add(u, attachment_weight(cfg, 0, state.lib_size[u]));
  }

  // fully reciprocated seed ring; keeps the core strongly connected
  for (UserId u = 0; u < m0; ++u) {
    const UserId v = static_cast<UserId>((u + 1) % m0);
    add_arc(state, cfg, u, v, TieType::friendship);
    add_arc(state, cfg, v, u, TieType::friendship);
  }

  std::vector<UserId> pool;
  std::vector<double> pool_score;
  for (UserId u = static_cast<UserId>(m0); u < cfg.n_nodes; ++u) {
    state.weights.add(u, attachment_weight(cfg, state.in_degree[u], state.lib_size[u]));

    pool.clear();
    pool_score.clear();
    const std::size_t draws = std::max(cfg.candidate_pool, 2 * cfg.arcs_per_node);
    for (std::size_t d = 0; d < draws; ++d) {
      const double x = rng.next_real() * state.weights.total();
      const auto c = static_cast<UserId>(state.weights.sample(x));
      if (c == u || c >= u) continue;  // only born nodes other than u
      pool.push_back(c);
    }
    if (pool.empty()) {
      for (UserId c = 0; c < u && pool.size() < cfg.arcs_per_node; ++c) pool.push_back(c);
    }
    const auto& lib_u = state.profiles.at_or_empty(u).library;
    pool_score.reserve(pool.size());
    for (UserId c : pool) {
      const double sim = set_cosine(lib_u, state.profiles.at_or_empty(c).library);
      pool_score.push_back(1.0 + cfg.homophily_strength * sim);
    }

    std::size_t made = 0;
    while (made < cfg.arcs_per_node) {
      double total = 0.0;
      for (std::size_t i = 0; i < pool.size(); ++i) total += pool_score[i];
      if (total <= 0.0) break;
      double x = rng.next_real() * total;
      std::size_t chosen = pool.size();
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool_score[i] <= 0.0) continue;
        if (x < pool_score[i]) {
          chosen = i;
          break;
        }
        x -= pool_score[i];
      }
      if (chosen == pool.size()) break;
      const UserId target = pool[chosen];
      // zero out every copy of the chosen candidate
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i] == target) pool_score[i] = 0.0;
      }
      if (!state.graph.has_social_arc(u, target)) {
        add_arc_with_reverse(state, cfg, rng, u, target, draw_tie(rng));
        ++made;
      }
    }
    // top up from the oldest nodes when the pool ran dry
    for (UserId c = 0; made < cfg.arcs_per_node && c < u; ++c) {
      if (c != u && !state.graph.has_social_arc(u, c)) {
        add_arc_with_reverse(state, cfg, rng, u, c, draw_tie(rng));
        ++made;
      }
    }
  }
  return state;
}

struct ClosureCandidate {
  UserId id = 0;
  std::uint32_t common = 0;
  double score = 0.0;
};

void densify(GrowthState& state, const GeneratorConfig& cfg, Rng& rng) {
  // candidates, counts and scores all come from the frozen pre-window
  // snapshot: the closed pairs are then chosen by exactly the quantities
  // a model trained on the earlier snapshot gets to see. Per-source lists
  // are memoized; sources proportional to k_out recur constantly.
  const SocialGraph base = state.graph;
  const std::size_t base_arc_count = state.arc_sources.size();
  const auto wanted = static_cast<std::size_t>(
      std::llround(cfg.densify_fraction * static_cast<double>(base_arc_count)));

  std::map<UserId, std::vector<ClosureCandidate>> memo;
  auto candidates_of = [&](UserId u) -> std::vector<ClosureCandidate>& {
    auto it = memo.find(u);
    if (it != memo.end()) return it->second;
    std::vector<ClosureCandidate> list;
    const Profile& profile_u = state.profiles.at_or_empty(u);
    for (const auto& [w, cn] : base.distance2_out_with_counts(u)) {
      // closure preference: squared common-neighbor count sharpened by
      // library and group similarity, so the closed pairs stand apart
      // from the distance-2 background. Barely-embedded candidates form a
      // flat noise floor; their similarity detail is not worth scoring.
      if (cn < 2) {
        list.push_back({w, cn, 0.2});
        continue;
      }
      const Profile& profile_w = state.profiles.at_or_empty(w);
      const double lib_sim = set_cosine(profile_u.library, profile_w.library);
      const double grp_sim = set_cosine(profile_u.groups, profile_w.groups);
      const double affinity = 1.0 + cfg.homophily_strength * lib_sim + 2.0 * grp_sim;
      const double cn_d = static_cast<double>(cn);
      list.push_back({w, cn, cn_d * cn_d * affinity * affinity});
    }
    return memo.emplace(u, std::move(list)).first->second;
  };

  std::size_t added = 0;
  std::size_t attempts = 0;
  const std::size_t attempt_cap = 40 * wanted + 64;
  while (added < wanted && attempts < attempt_cap) {
    ++attempts;
    const UserId u = state.arc_sources[rng.index(base_arc_count)];
    auto& candidates = candidates_of(u);
    double total = 0.0;
    for (const auto& c : candidates) total += c.score;
    if (total <= 0.0) continue;
    double x = rng.next_real() * total;
    std::size_t chosen = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].score <= 0.0) continue;
      if (x < candidates[i].score) {
        chosen = i;
        break;
      }
      x -= candidates[i].score;
    }
    if (chosen == candidates.size()) continue;
    // closure succeeds rarely for barely-embedded pairs (one shared
    // contact), like triadic closure in observed networks
    if (candidates[chosen].common < 2 && !rng.bernoulli(0.2)) continue;
    add_arc_with_reverse(state, cfg, rng, u, candidates[chosen].id, draw_tie(rng));
    candidates[chosen].score = 0.0;  // pair closed, never drawn again
    ++added;
  }
}

}  // namespace

GeneratedNetwork generate_network(const GeneratorConfig& cfg) {
  GrowthState state = grow(cfg);
  Rng comm_rng = Rng(cfg.seed).substream("generator-comm");
  synthesize_messages(state, cfg, comm_rng);
  return {std::move(state.graph), std::move(state.profiles)};
}

Snapshots grow_snapshots(const GeneratorConfig& cfg) {
  GrowthState state = grow(cfg);
  SocialGraph t0 = state.graph;

  Rng densify_rng = Rng(cfg.seed).substream("generator-densify");
  densify(state, cfg, densify_rng);

  Rng comm_rng = Rng(cfg.seed).substream("generator-comm");
  synthesize_messages(state, cfg, comm_rng);
  return {std::move(t0), std::move(state.graph), std::move(state.profiles)};
}

}  // namespace sbw
