#include "sbw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace sbw {

namespace {

// Dense index over the nodes participating in a layer plus their arcs as
// index pairs. Shared by pagerank and hits.
struct LayerIndex {
  std::vector<UserId> members;
  std::vector<std::vector<std::uint32_t>> out;  // out[i] = indices of i's successors
  std::size_t arc_count = 0;
};

LayerIndex build_index(const SocialGraph& g, Layer layer) {
  LayerIndex idx;
  for (UserId u : g.nodes()) {
    if (!g.out_neighbors(u, layer).empty() || !g.in_neighbors(u, layer).empty())
      idx.members.push_back(u);
  }
  std::map<UserId, std::uint32_t> pos;
  for (std::size_t i = 0; i < idx.members.size(); ++i)
    pos[idx.members[i]] = static_cast<std::uint32_t>(i);
  idx.out.resize(idx.members.size());
  for (std::size_t i = 0; i < idx.members.size(); ++i) {
    for (UserId v : g.out_neighbors(idx.members[i], layer)) {
      idx.out[i].push_back(pos.at(v));
      ++idx.arc_count;
    }
  }
  return idx;
}

ScoreVector to_scores(ScoreKind kind, const LayerIndex& idx, const std::vector<double>& x) {
  ScoreVector sv;
  sv.kind = kind;
  sv.entries.reserve(idx.members.size());
  for (std::size_t i = 0; i < idx.members.size(); ++i) sv.entries.emplace_back(idx.members[i], x[i]);
  return sv;
}

double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

void l1_normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (s > 0.0) {
    for (double& x : v) x /= s;
  }
}

}  // namespace

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::pagerank: return "pagerank";
    case ScoreKind::hub: return "hub";
    case ScoreKind::authority: return "authority";
  }
  return "pagerank";
}

double ScoreVector::at(UserId u) const {
  const double* p = find(u);
  if (!p) throw std::invalid_argument("node " + std::to_string(u) + " has no score");
  return *p;
}

const double* ScoreVector::find(UserId u) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), u,
                             [](const auto& e, UserId id) { return e.first < id; });
  if (it == entries.end() || it->first != u) return nullptr;
  return &it->second;
}

PagerankResult pagerank(const SocialGraph& g, Layer layer, double damping, double tol,
                        int max_iters) {
  if (damping <= 0.0 || damping >= 1.0)
    throw std::invalid_argument("damping must be in (0,1)");
  LayerIndex idx = build_index(g, layer);
  const std::size_t n = idx.members.size();
  if (n == 0) throw std::invalid_argument("pagerank on an empty layer");

  std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
  PagerankResult result;
  for (int iter = 1; iter <= max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (idx.out[i].empty()) {
        dangling += x[i];
        continue;
      }
      const double share = x[i] / static_cast<double>(idx.out[i].size());
      for (std::uint32_t j : idx.out[i]) next[j] += share;
    }
    const double base =
        (1.0 - damping) / static_cast<double>(n) + damping * dangling / static_cast<double>(n);
    for (double& v : next) v = base + damping * v;

    result.iterations = iter;
    result.residual = l1_diff(x, next);
    x.swap(next);
    if (result.residual < tol) {
      result.converged = true;
      break;
    }
  }
  result.scores = to_scores(ScoreKind::pagerank, idx, x);
  return result;
}

HitsResult hits(const SocialGraph& g, Layer layer, double tol, int max_iters) {
  LayerIndex idx = build_index(g, layer);
  const std::size_t n = idx.members.size();
  if (n == 0 || idx.arc_count == 0)
    throw std::invalid_argument("hits on a layer without arcs");

  std::vector<double> hub(n, 1.0 / static_cast<double>(n)), auth(n);
  std::vector<double> prev_hub(n), prev_auth(n, 0.0);
  HitsResult result;
  for (int iter = 1; iter <= max_iters; ++iter) {
    prev_hub = hub;
    prev_auth = auth;

    std::fill(auth.begin(), auth.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t j : idx.out[i]) auth[j] += hub[i];
    }
    l1_normalize(auth);

    std::fill(hub.begin(), hub.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t j : idx.out[i]) hub[i] += auth[j];
    }
    l1_normalize(hub);

    result.iterations = iter;
    result.residual = l1_diff(prev_hub, hub) + l1_diff(prev_auth, auth);
    if (result.residual < tol) {
      result.converged = true;
      break;
    }
  }
  result.hub = to_scores(ScoreKind::hub, idx, hub);
  result.authority = to_scores(ScoreKind::authority, idx, auth);
  return result;
}

std::vector<CcdfPoint> ccdf(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ccdf of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::vector<CcdfPoint> out;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    // all values from position i on are >= values[i]
    out.push_back({values[i], static_cast<double>(values.size() - i) / n});
    i = j;
  }
  return out;
}

double percentile_of(std::span<const std::pair<UserId, double>> entries, UserId node) {
  const double* score = nullptr;
  for (const auto& [u, s] : entries) {
    if (u == node) {
      score = &s;
      break;
    }
  }
  if (!score) throw std::invalid_argument("node " + std::to_string(node) + " has no score");
  std::size_t lower = 0;
  for (const auto& [u, s] : entries) {
    if (s < *score) ++lower;
  }
  return 100.0 * static_cast<double>(lower) / static_cast<double>(entries.size());
}

double percentile_of(const ScoreVector& scores, UserId node) {
  return percentile_of(std::span<const std::pair<UserId, double>>(scores.entries), node);
}

void save_scores(const ScoreVector& scores, const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write score file " + path);
  if (!header.empty()) out << header;
  auto sorted = scores.entries;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  char buf[64];
  for (const auto& [u, s] : sorted) {
    std::snprintf(buf, sizeof(buf), "%.12g", s);
    out << u << '\t' << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void save_ccdf(const std::vector<CcdfPoint>& points, const std::string& path,
               const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ccdf file " + path);
  if (!header.empty()) out << header;
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.12g", p.value);
    out << buf << '\t';
    std::snprintf(buf, sizeof(buf), "%.12g", p.fraction);
    out << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace sbw
