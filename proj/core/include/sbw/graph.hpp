// Directed two-layer graph store: typed social ties (friendship/neighborhood)
// plus a communication layer whose arcs carry cumulative message counts.
// The analyses treat the two tie types as one social network; the type is
// kept for reporting only.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sbw {

using UserId = std::uint32_t;

enum class TieType : std::uint8_t { friendship, neighborhood };
enum class Layer : std::uint8_t { social, comm };

std::string_view to_string(TieType tie);
std::string_view to_string(Layer layer);
std::optional<TieType> tie_from_string(std::string_view s);
std::optional<Layer> layer_from_string(std::string_view s);

// Per-layer structural summary. node_count covers nodes incident to at
// least one arc of the layer, so the social and communication networks are
// summarized over their own populations.
struct GraphStats {
  std::size_t node_count = 0;
  std::size_t arc_count = 0;
  double mean_out_degree = 0.0;
  double reciprocation = 0.0;  // fraction of arcs whose reverse arc exists
  std::size_t gscc_size = 0;
};

class SocialGraph {
 public:
  void add_node(UserId u);
  bool has_node(UserId u) const { return adj_.contains(u); }
  std::size_t node_count() const { return adj_.size(); }
  std::vector<UserId> nodes() const;  // ascending

  // At most one social arc per ordered pair; re-adding replaces the tie
  // type. Self-arcs and unknown endpoints are rejected.
  void add_social_arc(UserId u, UserId v, TieType tie);
  bool has_social_arc(UserId u, UserId v) const;
  std::optional<TieType> social_tie(UserId u, UserId v) const;

  // Increments the message counter on (u,v), creating the arc (and any
  // missing endpoint) on first use. Self-messages are rejected.
  void add_message(UserId u, UserId v, std::uint32_t count = 1);
  std::uint32_t comm_weight(UserId u, UserId v) const;  // 0 when absent

  std::span<const UserId> out_neighbors(UserId u, Layer layer) const;
  std::span<const UserId> in_neighbors(UserId u, Layer layer) const;
  std::span<const TieType> out_tie_types(UserId u) const;       // aligned with social out
  std::span<const std::uint32_t> out_weights(UserId u) const;   // aligned with comm out
  std::span<const std::uint32_t> in_weights(UserId u) const;    // aligned with comm in

  std::size_t k_out(UserId u) const { return out_neighbors(u, Layer::social).size(); }
  std::uint64_t msg_out(UserId u) const;
  std::uint64_t msg_in(UserId u) const;

  std::size_t arc_count(Layer layer) const {
    return layer == Layer::social ? social_arcs_ : comm_arcs_;
  }

  // { w : exists z with u->z->w in the social layer } minus Gamma_out(u)
  // minus {u}. Sorted ascending.
  std::vector<UserId> distance2_out_candidates(UserId u) const;
  // Same set with the number of intermediaries per candidate, which equals
  // the common-neighbor count CN(u,w).
  std::vector<std::pair<UserId, std::uint32_t>> distance2_out_with_counts(UserId u) const;

  GraphStats compute_stats(Layer layer) const;

  // Subgraph on `keep` (both layers); keep need not be sorted.
  SocialGraph induced_subgraph(std::span<const UserId> keep) const;
  // Arc-reversed copy of both layers.
  SocialGraph transpose() const;

  bool operator==(const SocialGraph& other) const;

 private:
  struct Node {
    std::vector<UserId> social_out;
    std::vector<TieType> social_out_tie;  // parallel to social_out
    std::vector<UserId> social_in;
    std::vector<UserId> comm_out;
    std::vector<std::uint32_t> comm_out_w;  // parallel to comm_out
    std::vector<UserId> comm_in;
    std::vector<std::uint32_t> comm_in_w;
    std::uint64_t msg_out_total = 0;
    std::uint64_t msg_in_total = 0;

    bool operator==(const Node&) const = default;
  };

  const Node* find(UserId u) const;
  const Node& require(UserId u) const;
  Node& require_mut(UserId u);

  std::map<UserId, Node> adj_;  // ordered: iteration order is part of the API
  std::size_t social_arcs_ = 0;
  std::size_t comm_arcs_ = 0;
};

// Edge-list file, one arc per line: src<TAB>dst<TAB>layer<TAB>attr with
// layer in {social, comm} and attr the tie type or the message count.
// '#' lines and blank lines are ignored. UTF-8, LF.
SocialGraph load_edge_list(const std::string& path);
void save_edge_list(const SocialGraph& g, const std::string& path);
SocialGraph read_edge_list(std::istream& in, std::string_view origin = "<stream>");
void write_edge_list(const SocialGraph& g, std::ostream& out);

}  // namespace sbw
