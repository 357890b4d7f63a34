#include "sbw/polarization.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sbw/rng.hpp"

namespace sbw {

std::string_view to_string(Faction f) { return f == Faction::pro ? "pro" : "contra"; }

std::optional<Faction> faction_from_string(std::string_view s) {
  if (s == "pro") return Faction::pro;
  if (s == "contra") return Faction::contra;
  return std::nullopt;
}

FactionLabeling read_factions(std::istream& in, std::string_view origin) {
  FactionLabeling labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    UserId user = 0;
    std::string word;
    if (!(fields >> user >> word)) {
      throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                               ": expected user<TAB>faction");
    }
    auto f = faction_from_string(word);
    if (!f) {
      throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                               ": unknown faction '" + word + "'");
    }
    if (!labels.emplace(user, *f).second) {
      throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                               ": duplicate user " + std::to_string(user));
    }
  }
  return labels;
}

FactionLabeling load_factions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open faction file " + path);
  return read_factions(in, path);
}

void save_factions(const FactionLabeling& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write faction file " + path);
  for (const auto& [u, f] : labels) out << u << '\t' << to_string(f) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

SocialGraph rewire_preserve_outdegree(const SocialGraph& g, Layer layer, std::uint64_t seed) {
  const auto nodes = g.nodes();
  if (nodes.empty()) throw std::invalid_argument("rewiring an empty graph");
  const std::size_t n = nodes.size();

  Rng rng = Rng(seed).substream("rewire");
  SocialGraph out;
  for (UserId u : nodes) out.add_node(u);

  for (UserId u : nodes) {
    const auto targets = g.out_neighbors(u, layer);
    const std::size_t d = targets.size();
    if (d == 0) continue;

    std::vector<UserId> redrawn;
    if (d >= n - 1) {
      for (UserId v : nodes)
        if (v != u) redrawn.push_back(v);
    } else if (d > n / 2) {
      // dense node: partial Fisher-Yates over all other nodes
      std::vector<UserId> others;
      others.reserve(n - 1);
      for (UserId v : nodes)
        if (v != u) others.push_back(v);
      for (std::size_t i = 0; i < d; ++i) {
        const std::size_t j = i + rng.index(others.size() - i);
        std::swap(others[i], others[j]);
        redrawn.push_back(others[i]);
      }
    } else {
      std::set<UserId> chosen;
      while (chosen.size() < d) {
        const UserId v = nodes[rng.index(n)];
        if (v == u) continue;
        if (chosen.insert(v).second) redrawn.push_back(v);
      }
    }

    if (layer == Layer::social) {
      const auto ties = g.out_tie_types(u);
      for (std::size_t i = 0; i < d && i < redrawn.size(); ++i)
        out.add_social_arc(u, redrawn[i], ties[i]);
    } else {
      const auto weights = g.out_weights(u);
      for (std::size_t i = 0; i < d && i < redrawn.size(); ++i)
        out.add_message(u, redrawn[i], weights[i]);
    }
  }
  return out;
}

IntraInter intra_inter_ratio(const SocialGraph& g, Layer layer, const FactionLabeling& labels) {
  std::size_t intra = 0, total = 0;
  for (UserId u : g.nodes()) {
    auto fu = labels.find(u);
    const auto outs = g.out_neighbors(u, layer);
    if (outs.empty()) continue;
    if (fu == labels.end())
      throw std::invalid_argument("node " + std::to_string(u) + " is unlabeled");
    for (UserId v : outs) {
      auto fv = labels.find(v);
      if (fv == labels.end())
        throw std::invalid_argument("node " + std::to_string(v) + " is unlabeled");
      ++total;
      if (fu->second == fv->second) ++intra;
    }
  }
  if (total == 0) return {0.0, 0.0};
  const double intra_frac = static_cast<double>(intra) / static_cast<double>(total);
  return {intra_frac, 1.0 - intra_frac};
}

Clustering detect_communities(const SocialGraph& g, Layer layer, std::uint64_t seed) {
  const auto nodes = g.nodes();
  if (nodes.empty()) throw std::invalid_argument("community detection on an empty graph");
  const std::size_t n = nodes.size();

  std::map<UserId, std::uint32_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[nodes[i]] = static_cast<std::uint32_t>(i);

  // symmetrized adjacency with summed weights
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
  auto add_weight = [&](std::uint32_t a, std::uint32_t b, double w) {
    for (auto& [nb, weight] : adj[a]) {
      if (nb == b) {
        weight += w;
        return;
      }
    }
    adj[a].emplace_back(b, w);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const UserId u = nodes[i];
    for (UserId v : g.out_neighbors(u, layer)) {
      const auto j = pos.at(v);
      const double w =
          layer == Layer::comm ? static_cast<double>(g.comm_weight(u, v)) : 1.0;
      add_weight(static_cast<std::uint32_t>(i), j, w);
      add_weight(j, static_cast<std::uint32_t>(i), w);
    }
  }

  std::vector<std::uint32_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<std::uint32_t>(i);

  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  Rng rng = Rng(seed).substream("detect");
  rng.shuffle(order);

  // a node keeps its label whenever it ties for the maximum; remaining
  // ties break uniformly at random from the seeded stream. A systematic
  // tie order (e.g. smallest label) would flood one label across weakly
  // separated clusters during the first sweep.
  std::map<std::uint32_t, double> tally;
  std::vector<std::uint32_t> tied;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    // the first sweep reads the pre-sweep labels: with every label still
    // a singleton, in-sweep reads would let one label chain across the
    // whole graph in update order
    const bool synchronous = sweep < 2;
    const std::vector<std::uint32_t> snapshot = synchronous ? label : std::vector<std::uint32_t>{};
    const std::vector<std::uint32_t>& source = synchronous ? snapshot : label;
    for (std::uint32_t i : order) {
      if (adj[i].empty()) continue;
      tally.clear();
      for (const auto& [nb, w] : adj[i]) tally[source[nb]] += w;
      double best_weight = -1.0;
      for (const auto& [lbl, w] : tally) best_weight = std::max(best_weight, w);
      auto own = tally.find(label[i]);
      if (own != tally.end() && own->second == best_weight) continue;  // keep
      tied.clear();
      for (const auto& [lbl, w] : tally) {
        if (w == best_weight) tied.push_back(lbl);
      }
      const std::uint32_t best = tied[rng.index(tied.size())];
      if (best != label[i]) {
        label[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::map<std::uint32_t, std::vector<UserId>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[label[i]].push_back(nodes[i]);
  Clustering clusters;
  clusters.reserve(groups.size());
  for (auto& [lbl, members] : groups) {
    std::sort(members.begin(), members.end());
    clusters.push_back(std::move(members));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return clusters;
}

MergeResult merge_to_two(const Clustering& clusters, const FactionLabeling& labels) {
  if (clusters.empty()) throw std::invalid_argument("merging an empty clustering");
  MergeResult result;
  result.macro.assign(2, {});
  for (const auto& cluster : clusters) {
    std::size_t pro = 0, contra = 0;
    for (UserId u : cluster) {
      auto it = labels.find(u);
      if (it == labels.end())
        throw std::invalid_argument("node " + std::to_string(u) + " is unlabeled");
      (it->second == Faction::pro ? pro : contra)++;
    }
    // ties go to the lexicographically first faction name: "contra"
    const Faction majority = pro > contra ? Faction::pro : Faction::contra;
    auto& side = result.macro[majority == Faction::pro ? 0 : 1];
    side.insert(side.end(), cluster.begin(), cluster.end());
  }
  for (auto& side : result.macro) std::sort(side.begin(), side.end());
  result.degenerate = result.macro[0].empty() || result.macro[1].empty();
  return result;
}

double fccv(const Clustering& macro, const FactionLabeling& labels) {
  if (macro.size() != 2) throw std::invalid_argument("fccv needs exactly two macro-clusters");
  std::size_t labeled = 0;
  std::size_t match_a = 0;  // macro[0]=pro, macro[1]=contra
  std::size_t match_b = 0;  // swapped
  for (std::size_t side = 0; side < 2; ++side) {
    for (UserId u : macro[side]) {
      auto it = labels.find(u);
      if (it == labels.end()) continue;
      ++labeled;
      const bool is_pro = it->second == Faction::pro;
      if ((side == 0) == is_pro) ++match_a;
      if ((side == 1) == is_pro) ++match_b;
    }
  }
  if (labeled == 0) return 0.0;
  return static_cast<double>(std::max(match_a, match_b)) / static_cast<double>(labeled);
}

double mean_fccv(const SocialGraph& g, Layer layer, const FactionLabeling& labels,
                 std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw std::invalid_argument("mean_fccv needs at least one seed");
  double sum = 0.0;
  for (std::uint64_t seed : seeds) {
    const Clustering clusters = detect_communities(g, layer, seed);
    const MergeResult merged = merge_to_two(clusters, labels);
    sum += fccv(merged.macro, labels);
  }
  return sum / static_cast<double>(seeds.size());
}

SocialGraph keyword_subgraph(const std::vector<MessageRecord>& messages,
                             std::string_view keyword) {
  SocialGraph out;
  for (const auto& m : messages) {
    if (m.author == m.recipient) continue;
    if (m.has_keyword(keyword)) out.add_message(m.author, m.recipient);
  }
  return out;
}

TimelineResult sentiment_timeline(const std::vector<MessageRecord>& messages,
                                  std::size_t window) {
  if (window == 0) throw std::invalid_argument("window must be at least 1");
  TimelineResult result;
  std::size_t pos = 0, neu = 0, neg = 0, in_window = 0;

  auto flush = [&]() {
    if (in_window == 0) return;
    const double total = static_cast<double>(in_window);
    result.windows.push_back({result.windows.size(), static_cast<double>(pos) / total,
                              static_cast<double>(neu) / total,
                              static_cast<double>(neg) / total, in_window});
    pos = neu = neg = in_window = 0;
  };

  for (const auto& m : messages) {
    if (!m.sentiment) {
      ++result.unlabeled_skipped;
      continue;
    }
    switch (*m.sentiment) {
      case Sentiment::positive: ++pos; break;
      case Sentiment::neutral: ++neu; break;
      case Sentiment::negative: ++neg; break;
    }
    if (++in_window == window) flush();
  }
  flush();  // trailing partial window keeps its own size
  return result;
}

void save_timeline(const TimelineResult& timeline, const std::string& path,
                   const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write timeline " + path);
  if (!header.empty()) out << header;
  if (timeline.unlabeled_skipped > 0)
    out << "# unlabeled_skipped " << timeline.unlabeled_skipped << '\n';
  if (!timeline.windows.empty() && timeline.windows.back().count > 0)
    out << "# final_window_size " << timeline.windows.back().count << '\n';
  char buf[64];
  for (const auto& w : timeline.windows) {
    out << w.index;
    std::snprintf(buf, sizeof(buf), "%.9g", w.pos_ratio);
    out << '\t' << buf;
    std::snprintf(buf, sizeof(buf), "%.9g", w.neutral_ratio);
    out << '\t' << buf;
    std::snprintf(buf, sizeof(buf), "%.9g", w.neg_ratio);
    out << '\t' << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace sbw
