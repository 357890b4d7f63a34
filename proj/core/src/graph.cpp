#include "sbw/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sbw {

namespace {

// sorted-vector set helpers

std::size_t lower_index(const std::vector<UserId>& v, UserId x) {
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

bool sorted_contains(const std::vector<UserId>& v, UserId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  return it != v.end() && *it == x;
}

void sorted_insert(std::vector<UserId>& v, UserId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

}  // namespace

std::string_view to_string(TieType tie) {
  return tie == TieType::friendship ? "friendship" : "neighborhood";
}

std::string_view to_string(Layer layer) {
  return layer == Layer::social ? "social" : "comm";
}

std::optional<TieType> tie_from_string(std::string_view s) {
  if (s == "friendship") return TieType::friendship;
  if (s == "neighborhood") return TieType::neighborhood;
  return std::nullopt;
}

std::optional<Layer> layer_from_string(std::string_view s) {
  if (s == "social") return Layer::social;
  if (s == "comm") return Layer::comm;
  return std::nullopt;
}

void SocialGraph::add_node(UserId u) { adj_.try_emplace(u); }

std::vector<UserId> SocialGraph::nodes() const {
  std::vector<UserId> out;
  out.reserve(adj_.size());
  for (const auto& [id, node] : adj_) out.push_back(id);
  return out;
}

const SocialGraph::Node* SocialGraph::find(UserId u) const {
  auto it = adj_.find(u);
  return it == adj_.end() ? nullptr : &it->second;
}

const SocialGraph::Node& SocialGraph::require(UserId u) const {
  const Node* n = find(u);
  if (!n) throw std::invalid_argument("unknown node " + std::to_string(u));
  return *n;
}

SocialGraph::Node& SocialGraph::require_mut(UserId u) {
  auto it = adj_.find(u);
  if (it == adj_.end()) throw std::invalid_argument("unknown node " + std::to_string(u));
  return it->second;
}

void SocialGraph::add_social_arc(UserId u, UserId v, TieType tie) {
  if (u == v) throw std::invalid_argument("self social arc on node " + std::to_string(u));
  Node& src = require_mut(u);
  Node& dst = require_mut(v);
  std::size_t pos = lower_index(src.social_out, v);
  if (pos < src.social_out.size() && src.social_out[pos] == v) {
    src.social_out_tie[pos] = tie;  // tie types are mutually exclusive per arc
    return;
  }
  src.social_out.insert(src.social_out.begin() + static_cast<std::ptrdiff_t>(pos), v);
  src.social_out_tie.insert(src.social_out_tie.begin() + static_cast<std::ptrdiff_t>(pos), tie);
  sorted_insert(dst.social_in, u);
  ++social_arcs_;
}

bool SocialGraph::has_social_arc(UserId u, UserId v) const {
  const Node* n = find(u);
  return n && sorted_contains(n->social_out, v);
}

std::optional<TieType> SocialGraph::social_tie(UserId u, UserId v) const {
  const Node* n = find(u);
  if (!n) return std::nullopt;
  std::size_t pos = lower_index(n->social_out, v);
  if (pos < n->social_out.size() && n->social_out[pos] == v) return n->social_out_tie[pos];
  return std::nullopt;
}

void SocialGraph::add_message(UserId u, UserId v, std::uint32_t count) {
  if (u == v) throw std::invalid_argument("self message on node " + std::to_string(u));
  if (count == 0) throw std::invalid_argument("message count must be positive");
  add_node(u);
  add_node(v);
  Node& src = adj_.find(u)->second;
  Node& dst = adj_.find(v)->second;
  std::size_t pos = lower_index(src.comm_out, v);
  if (pos < src.comm_out.size() && src.comm_out[pos] == v) {
    src.comm_out_w[pos] += count;
  } else {
    src.comm_out.insert(src.comm_out.begin() + static_cast<std::ptrdiff_t>(pos), v);
    src.comm_out_w.insert(src.comm_out_w.begin() + static_cast<std::ptrdiff_t>(pos), count);
    ++comm_arcs_;
  }
  std::size_t rpos = lower_index(dst.comm_in, u);
  if (rpos < dst.comm_in.size() && dst.comm_in[rpos] == u) {
    dst.comm_in_w[rpos] += count;
  } else {
    dst.comm_in.insert(dst.comm_in.begin() + static_cast<std::ptrdiff_t>(rpos), u);
    dst.comm_in_w.insert(dst.comm_in_w.begin() + static_cast<std::ptrdiff_t>(rpos), count);
  }
  src.msg_out_total += count;
  dst.msg_in_total += count;
}

std::uint32_t SocialGraph::comm_weight(UserId u, UserId v) const {
  const Node* n = find(u);
  if (!n) return 0;
  std::size_t pos = lower_index(n->comm_out, v);
  if (pos < n->comm_out.size() && n->comm_out[pos] == v) return n->comm_out_w[pos];
  return 0;
}

std::span<const UserId> SocialGraph::out_neighbors(UserId u, Layer layer) const {
  const Node& n = require(u);
  return layer == Layer::social ? std::span<const UserId>(n.social_out)
                                : std::span<const UserId>(n.comm_out);
}

std::span<const UserId> SocialGraph::in_neighbors(UserId u, Layer layer) const {
  const Node& n = require(u);
  return layer == Layer::social ? std::span<const UserId>(n.social_in)
                                : std::span<const UserId>(n.comm_in);
}

std::span<const TieType> SocialGraph::out_tie_types(UserId u) const {
  return require(u).social_out_tie;
}

std::span<const std::uint32_t> SocialGraph::out_weights(UserId u) const {
  return require(u).comm_out_w;
}

std::span<const std::uint32_t> SocialGraph::in_weights(UserId u) const {
  return require(u).comm_in_w;
}

std::uint64_t SocialGraph::msg_out(UserId u) const { return require(u).msg_out_total; }

std::uint64_t SocialGraph::msg_in(UserId u) const { return require(u).msg_in_total; }

std::vector<std::pair<UserId, std::uint32_t>> SocialGraph::distance2_out_with_counts(
    UserId u) const {
  const Node& n = require(u);
  std::vector<UserId> reached;
  for (UserId z : n.social_out) {
    const auto& two_hop = require(z).social_out;
    reached.insert(reached.end(), two_hop.begin(), two_hop.end());
  }
  std::sort(reached.begin(), reached.end());
  std::vector<std::pair<UserId, std::uint32_t>> out;
  std::size_t i = 0;
  while (i < reached.size()) {
    std::size_t j = i;
    while (j < reached.size() && reached[j] == reached[i]) ++j;
    const UserId w = reached[i];
    if (w != u && !sorted_contains(n.social_out, w))
      out.emplace_back(w, static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return out;
}

std::vector<UserId> SocialGraph::distance2_out_candidates(UserId u) const {
  auto counted = distance2_out_with_counts(u);
  std::vector<UserId> out;
  out.reserve(counted.size());
  for (const auto& [w, cnt] : counted) out.push_back(w);
  return out;
}

GraphStats SocialGraph::compute_stats(Layer layer) const {
  GraphStats stats;

  // participating nodes, compressed to dense indices
  std::vector<UserId> members;
  for (const auto& [id, node] : adj_) {
    const bool active = layer == Layer::social
                            ? !node.social_out.empty() || !node.social_in.empty()
                            : !node.comm_out.empty() || !node.comm_in.empty();
    if (active) members.push_back(id);
  }
  stats.node_count = members.size();
  if (members.empty()) return stats;

  std::size_t arcs = 0;
  std::size_t bidirectional = 0;
  for (UserId u : members) {
    const Node& n = *find(u);
    const auto& outs = layer == Layer::social ? n.social_out : n.comm_out;
    arcs += outs.size();
    for (UserId v : outs) {
      const Node& m = *find(v);
      const auto& back = layer == Layer::social ? m.social_out : m.comm_out;
      if (sorted_contains(back, u)) ++bidirectional;
    }
  }
  stats.arc_count = arcs;
  stats.mean_out_degree = arcs == 0 ? 0.0
                                    : static_cast<double>(arcs) / static_cast<double>(members.size());
  stats.reciprocation =
      arcs == 0 ? 0.0 : static_cast<double>(bidirectional) / static_cast<double>(arcs);

  // GSCC by iterative Tarjan on the member subgraph.
  const std::size_t n = members.size();
  std::map<UserId, std::uint32_t> index_of;
  for (std::size_t i = 0; i < n; ++i) index_of[members[i]] = static_cast<std::uint32_t>(i);

  std::vector<std::vector<std::uint32_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = *find(members[i]);
    const auto& outs = layer == Layer::social ? node.social_out : node.comm_out;
    out[i].reserve(outs.size());
    for (UserId v : outs) out[i].push_back(index_of.at(v));
  }

  constexpr std::uint32_t kUnvisited = 0xffffffffu;
  std::vector<std::uint32_t> idx(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0;
  std::size_t best = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t child;
  };
  std::vector<Frame> frames;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (idx[root] != kUnvisited) continue;
    frames.push_back({root, 0});
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child == 0) {
        idx[f.v] = low[f.v] = counter++;
        stack.push_back(f.v);
        on_stack[f.v] = true;
      }
      if (f.child < out[f.v].size()) {
        std::uint32_t w = out[f.v][f.child++];
        if (idx[w] == kUnvisited) {
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
        continue;
      }
      // close v
      if (low[f.v] == idx[f.v]) {
        std::size_t size = 0;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          ++size;
        } while (w != f.v);
        best = std::max(best, size);
      }
      std::uint32_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
    }
  }
  stats.gscc_size = best;
  return stats;
}

SocialGraph SocialGraph::induced_subgraph(std::span<const UserId> keep) const {
  std::vector<UserId> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  SocialGraph out;
  for (UserId u : sorted)
    if (has_node(u)) out.add_node(u);
  for (UserId u : sorted) {
    const Node* n = find(u);
    if (!n) continue;
    for (std::size_t i = 0; i < n->social_out.size(); ++i) {
      UserId v = n->social_out[i];
      if (out.has_node(v)) out.add_social_arc(u, v, n->social_out_tie[i]);
    }
    for (std::size_t i = 0; i < n->comm_out.size(); ++i) {
      UserId v = n->comm_out[i];
      if (out.has_node(v)) out.add_message(u, v, n->comm_out_w[i]);
    }
  }
  return out;
}

SocialGraph SocialGraph::transpose() const {
  SocialGraph out;
  for (const auto& [id, node] : adj_) out.add_node(id);
  for (const auto& [id, node] : adj_) {
    for (std::size_t i = 0; i < node.social_out.size(); ++i)
      out.add_social_arc(node.social_out[i], id, node.social_out_tie[i]);
    for (std::size_t i = 0; i < node.comm_out.size(); ++i)
      out.add_message(node.comm_out[i], id, node.comm_out_w[i]);
  }
  return out;
}

bool SocialGraph::operator==(const SocialGraph& other) const { return adj_ == other.adj_; }

namespace {

UserId parse_user(std::string_view field, std::size_t line_no, std::string_view origin) {
  UserId value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                             ": bad user id '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

SocialGraph read_edge_list(std::istream& in, std::string_view origin) {
  SocialGraph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                               ": expected src<TAB>dst<TAB>layer<TAB>attr");
    }
    UserId src = parse_user(fields[0], line_no, origin);
    UserId dst = parse_user(fields[1], line_no, origin);
    auto layer = layer_from_string(fields[2]);
    if (!layer) {
      throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                               ": unknown layer '" + std::string(fields[2]) + "'");
    }
    if (*layer == Layer::social) {
      auto tie = tie_from_string(fields[3]);
      if (!tie) {
        throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                                 ": unknown tie type '" + std::string(fields[3]) + "'");
      }
      g.add_node(src);
      g.add_node(dst);
      g.add_social_arc(src, dst, *tie);
    } else {
      std::uint32_t weight = 0;
      auto [ptr, ec] =
          std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), weight);
      if (ec != std::errc() || ptr != fields[3].data() + fields[3].size() || weight == 0) {
        throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                                 ": bad message count '" + std::string(fields[3]) + "'");
      }
      g.add_message(src, dst, weight);
    }
  }
  return g;
}

void write_edge_list(const SocialGraph& g, std::ostream& out) {
  for (UserId u : g.nodes()) {
    auto social = g.out_neighbors(u, Layer::social);
    auto ties = g.out_tie_types(u);
    for (std::size_t i = 0; i < social.size(); ++i) {
      out << u << '\t' << social[i] << "\tsocial\t" << to_string(ties[i]) << '\n';
    }
    auto comm = g.out_neighbors(u, Layer::comm);
    auto weights = g.out_weights(u);
    for (std::size_t i = 0; i < comm.size(); ++i) {
      out << u << '\t' << comm[i] << "\tcomm\t" << weights[i] << '\n';
    }
  }
}

SocialGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path);
  return read_edge_list(in, path);
}

void save_edge_list(const SocialGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list " + path);
  write_edge_list(g, out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace sbw
