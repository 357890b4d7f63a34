// Faction analytics: degree-preserving rewiring null model, intra/inter
// arc ratios, label-propagation community detection with a greedy
// two-cluster merge, correctly-classified-vertex scoring, sentiment
// timelines, and keyword-filtered communication subgraphs.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbw/corpus.hpp"
#include "sbw/graph.hpp"

namespace sbw {

enum class Faction : std::uint8_t { pro, contra };

std::string_view to_string(Faction f);
std::optional<Faction> faction_from_string(std::string_view s);

using FactionLabeling = std::map<UserId, Faction>;

// user<TAB>faction with faction in {pro, contra}; duplicates are an error.
FactionLabeling load_factions(const std::string& path);
void save_factions(const FactionLabeling& labels, const std::string& path);
FactionLabeling read_factions(std::istream& in, std::string_view origin = "<stream>");

using Clustering = std::vector<std::vector<UserId>>;

// Null model: every node keeps its exact out-degree in the chosen layer,
// targets are redrawn uniformly among the other nodes without duplicate or
// self arcs; arc attributes stay with their slot. Only the rewired layer
// is present in the returned graph. A node with out-degree >= n-1 keeps
// the complete out-neighborhood, the only legal outcome.
SocialGraph rewire_preserve_outdegree(const SocialGraph& g, Layer layer, std::uint64_t seed);

struct IntraInter {
  double intra = 0.0;
  double inter = 0.0;
};

// Fractions of layer arcs inside / across factions. Every arc endpoint
// must be labeled; restrict the graph to the labeled node set first (see
// SocialGraph::induced_subgraph).
IntraInter intra_inter_ratio(const SocialGraph& g, Layer layer, const FactionLabeling& labels);

// Label propagation on the symmetrized layer (comm weights summed over
// both directions). The sweep order is one permutation drawn from the
// seed; ties adopt the smallest label. Deterministic per seed.
Clustering detect_communities(const SocialGraph& g, Layer layer, std::uint64_t seed);

struct MergeResult {
  Clustering macro;        // exactly two clusters, [pro-majority, contra-majority]
  bool degenerate = false; // every cluster had the same majority
};

// Greedily merges clusters by the faction of their labeled majority until
// two macro-clusters remain. Ties go to the lexicographically first
// faction name ("contra").
MergeResult merge_to_two(const Clustering& clusters, const FactionLabeling& labels);

// Fraction of correctly classified vertices of a two-cluster partition,
// maximized over the two cluster-to-faction assignments.
double fccv(const Clustering& macro, const FactionLabeling& labels);

// Mean FCCV of detect -> merge over the given seeds.
double mean_fccv(const SocialGraph& g, Layer layer, const FactionLabeling& labels,
                 std::span<const std::uint64_t> seeds);

// Communication subgraph of the messages whose token set contains the
// keyword (exact lowercase token match); arc weights count the matching
// messages per (author, recipient) pair. Self-messages are ignored.
SocialGraph keyword_subgraph(const std::vector<MessageRecord>& messages,
                             std::string_view keyword);

struct TimelineWindow {
  std::size_t index = 0;
  double pos_ratio = 0.0;
  double neutral_ratio = 0.0;
  double neg_ratio = 0.0;
  std::size_t count = 0;  // window size; the trailing window may be partial
};

struct TimelineResult {
  std::vector<TimelineWindow> windows;
  std::size_t unlabeled_skipped = 0;
};

// Ratios of positive/neutral/negative labels over consecutive disjoint
// windows of `window` labeled messages, in the given message order.
TimelineResult sentiment_timeline(const std::vector<MessageRecord>& messages,
                                  std::size_t window);

// window<TAB>pos<TAB>neutral<TAB>neg rows; the trailing partial window
// size is reported as a comment.
void save_timeline(const TimelineResult& timeline, const std::string& path,
                   const std::string& header = {});

}  // namespace sbw
