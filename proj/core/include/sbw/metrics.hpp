// Centrality and distribution analytics: Pagerank, HITS, CCDFs, and
// percentile placement of a designated node. Centralities run on the node
// population of the chosen layer (nodes incident to at least one arc of
// that layer), unweighted in both layers.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbw/graph.hpp"

namespace sbw {

enum class ScoreKind : std::uint8_t { pagerank, hub, authority };

std::string_view to_string(ScoreKind kind);

struct ScoreVector {
  ScoreKind kind = ScoreKind::pagerank;
  std::vector<std::pair<UserId, double>> entries;  // ascending user id

  double at(UserId u) const;           // throws when the node is missing
  const double* find(UserId u) const;  // nullptr when missing
};

struct PagerankResult {
  ScoreVector scores;
  bool converged = false;
  double residual = 0.0;  // L1 residual of the last iteration
  int iterations = 0;
};

// Power iteration with uniform teleport and uniform redistribution of
// dangling mass. Requires 0 < damping < 1 and a layer with at least one
// participating node.
PagerankResult pagerank(const SocialGraph& g, Layer layer, double damping = 0.85,
                        double tol = 1e-10, int max_iters = 200);

struct HitsResult {
  ScoreVector hub;
  ScoreVector authority;
  bool converged = false;
  double residual = 0.0;
  int iterations = 0;
};

// Alternating hub/authority updates, L1-normalized every half step.
// Throws when the layer has no arcs.
HitsResult hits(const SocialGraph& g, Layer layer, double tol = 1e-10, int max_iters = 200);

struct CcdfPoint {
  double value = 0.0;
  double fraction = 0.0;  // P(X >= value)
};

// One point per distinct value, ascending; fractions start at 1.0 and are
// non-increasing. Throws on empty input.
std::vector<CcdfPoint> ccdf(std::vector<double> values);

// 100 x fraction of entries with a strictly lower score. Ties do not
// inflate the percentile.
double percentile_of(std::span<const std::pair<UserId, double>> entries, UserId node);
double percentile_of(const ScoreVector& scores, UserId node);

// user<TAB>score, descending score (ties ascending by user id).
void save_scores(const ScoreVector& scores, const std::string& path,
                 const std::string& header = {});
// value<TAB>fraction, ascending value; suitable for log-log plotting.
void save_ccdf(const std::vector<CcdfPoint>& points, const std::string& path,
               const std::string& header = {});

}  // namespace sbw
