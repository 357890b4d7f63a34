#include "sbw/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sbw/rng.hpp"

namespace sbw {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::visit: return "visit";
    case EventKind::shout: return "shout";
    case EventKind::rec_sent: return "rec_sent";
    case EventKind::link_created: return "link_created";
  }
  return "visit";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  if (s == "visit") return EventKind::visit;
  if (s == "shout") return EventKind::shout;
  if (s == "rec_sent") return EventKind::rec_sent;
  if (s == "link_created") return EventKind::link_created;
  return std::nullopt;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::follower_rec: return "follower_rec";
    case Category::follower_rand: return "follower_rand";
    case Category::nonfollower_rec: return "nonfollower_rec";
    case Category::nonfollower_rand: return "nonfollower_rand";
    case Category::reciprocal: return "reciprocal";
  }
  return "follower_rec";
}

std::optional<Category> category_from_string(std::string_view s) {
  if (s == "follower_rec") return Category::follower_rec;
  if (s == "follower_rand") return Category::follower_rand;
  if (s == "nonfollower_rec") return Category::nonfollower_rec;
  if (s == "nonfollower_rand") return Category::nonfollower_rand;
  if (s == "reciprocal") return Category::reciprocal;
  return std::nullopt;
}

void EventLog::append(Event e) {
  if (!events.empty() && e.tick < events.back().tick)
    throw std::logic_error("event ticks must be non-decreasing");
  events.push_back(std::move(e));
}

void write_event_log(const EventLog& log, std::ostream& out) {
  for (const Event& e : log.events) {
    out << e.tick << '\t' << to_string(e.kind) << '\t' << e.actor << '\t' << e.subject << '\t'
        << (e.category ? to_string(*e.category) : "-") << '\n';
  }
}

EventLog read_event_log(std::istream& in, std::string_view origin) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string kind_word, category_word;
    Event e;
    if (!(fields >> e.tick >> kind_word >> e.actor >> e.subject >> category_word)) {
      throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                               ": expected tick, kind, actor, subject, category");
    }
    auto kind = event_kind_from_string(kind_word);
    if (!kind) {
      throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                               ": unknown event kind '" + kind_word + "'");
    }
    e.kind = *kind;
    if (category_word != "-") {
      auto category = category_from_string(category_word);
      if (!category) {
        throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) +
                                 ": unknown category '" + category_word + "'");
      }
      e.category = category;
    }
    log.append(std::move(e));
  }
  return log;
}

void save_event_log(const EventLog& log, const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write event log " + path);
  if (!header.empty()) out << header;
  write_event_log(log, out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

EventLog load_event_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event log " + path);
  return read_event_log(in, path);
}

namespace {

// Crawl order: BFS along social out-arcs from the smallest node id, with
// ascending neighbor order, so the visit sequence is reproducible.
std::vector<UserId> bfs_reachable(const SocialGraph& g, UserId start) {
  std::vector<UserId> order;
  if (!g.has_node(start)) return order;
  std::set<UserId> seen{start};
  std::deque<UserId> frontier{start};
  while (!frontier.empty()) {
    const UserId u = frontier.front();
    frontier.pop_front();
    order.push_back(u);
    for (UserId v : g.out_neighbors(u, Layer::social)) {
      if (seen.insert(v).second) frontier.push_back(v);
    }
  }
  return order;
}

}  // namespace

ProbeResult run_probe_rounds(SocialGraph& g, const ProfileStore& profiles,
                             const ResponseModel& model, std::size_t rounds,
                             std::uint64_t interval_ticks, std::uint64_t seed) {
  (void)profiles;  // visit behavior does not depend on profile contents
  if (rounds == 0) throw std::invalid_argument("need at least one probe round");
  if (interval_ticks == 0) throw std::invalid_argument("interval_ticks must be positive");

  auto node_ids = g.nodes();
  ProbeResult result;
  result.bot = node_ids.empty() ? 0 : node_ids.back() + 1;
  g.add_node(result.bot);
  if (node_ids.empty()) return result;
  const UserId start = node_ids.front();

  Rng rng = Rng(seed).substream("probe");
  std::map<UserId, std::uint64_t> visits;
  for (std::size_t round = 0; round < rounds; ++round) {
    const std::uint64_t tick = static_cast<std::uint64_t>(round) * interval_ticks;
    for (UserId u : bfs_reachable(g, start)) {
      if (u == result.bot) continue;
      result.log.append({tick, EventKind::visit, result.bot, u, std::nullopt});
      const double p_shout =
          model.p_shout_per_visit *
          std::pow(model.shout_decay, static_cast<double>(visits[u]));
      if (rng.bernoulli(p_shout)) {
        result.log.append({tick, EventKind::shout, u, result.bot, std::nullopt});
        g.add_message(u, result.bot);
      }
      if (rng.bernoulli(model.p_follow_bot_per_visit) && !g.has_social_arc(u, result.bot)) {
        g.add_social_arc(u, result.bot, TieType::neighborhood);
        result.log.append({tick, EventKind::link_created, u, result.bot, std::nullopt});
      }
      ++visits[u];
    }
  }
  return result;
}

namespace {

bool is_eligible(const ProfileStore& profiles, UserId u,
                 const std::optional<std::string>& tag) {
  if (!tag) return true;
  const auto& nat = profiles.at_or_empty(u).nationality;
  return nat && *nat == *tag;
}

// Uniform suggestion among nodes the target is not linked to. Falls back
// to a linear scan when rejection sampling keeps missing.
std::optional<UserId> random_suggestion(const SocialGraph& g, const std::vector<UserId>& nodes,
                                        UserId target, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const UserId w = nodes[rng.index(nodes.size())];
    if (w != target && !g.has_social_arc(target, w)) return w;
  }
  const std::size_t offset = rng.index(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const UserId w = nodes[(offset + i) % nodes.size()];
    if (w != target && !g.has_social_arc(target, w)) return w;
  }
  return std::nullopt;
}

double category_probability(const ResponseModel& model, Category c) {
  switch (c) {
    case Category::follower_rec: return model.p_follower_rec;
    case Category::follower_rand: return model.p_follower_rand;
    case Category::nonfollower_rec: return model.p_nonfollower_rec;
    case Category::nonfollower_rand: return model.p_nonfollower_rand;
    case Category::reciprocal: return model.p_follower_rec;  // unused: origin decides
  }
  return 0.0;
}

}  // namespace

CampaignPlan assign_recommendations(const SocialGraph& g, const ProfileStore& profiles,
                                    const std::vector<UserId>& shouters,
                                    const ClassifierModel& model, std::size_t min_books,
                                    double frac_model, double frac_reciprocal,
                                    std::uint64_t seed,
                                    const std::optional<std::string>& eligible_tag) {
  if (frac_model < 0.0 || frac_model > 1.0)
    throw std::invalid_argument("frac_model must be in [0,1]");
  if (frac_reciprocal < 0.0 || frac_reciprocal > 1.0)
    throw std::invalid_argument("frac_reciprocal must be in [0,1]");

  Rng rng = Rng(seed).substream("assign");
  const auto nodes = g.nodes();

  std::vector<UserId> followers(shouters.begin(), shouters.end());
  std::sort(followers.begin(), followers.end());
  followers.erase(std::unique(followers.begin(), followers.end()), followers.end());
  std::erase_if(followers, [&](UserId u) {
    return !g.has_node(u) || !is_eligible(profiles, u, eligible_tag);
  });
  if (followers.empty()) throw std::invalid_argument("no eligible followers to recommend to");

  std::vector<UserId> nonfollower_pool;
  for (UserId u : nodes) {
    if (std::binary_search(followers.begin(), followers.end(), u)) continue;
    if (!is_eligible(profiles, u, eligible_tag)) continue;
    if (profiles.at_or_empty(u).book_count() < min_books) continue;
    nonfollower_pool.push_back(u);
  }
  if (nonfollower_pool.size() < followers.size())
    throw std::invalid_argument("not enough eligible non-followers (" +
                                std::to_string(nonfollower_pool.size()) + " of " +
                                std::to_string(followers.size()) + " needed)");

  rng.shuffle(nonfollower_pool);
  nonfollower_pool.resize(followers.size());
  rng.shuffle(followers);

  const auto n_rec = static_cast<std::size_t>(
      std::llround(frac_model * static_cast<double>(followers.size())));

  CampaignPlan plan;
  auto make_assignments = [&](const std::vector<UserId>& pool, bool follower_pool,
                              std::vector<RecommendationAssignment>& rec_out,
                              std::vector<RecommendationAssignment>& rand_out) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const UserId u = pool[i];
      RecommendationAssignment a;
      a.target = u;
      const bool use_model = i < n_rec;
      if (use_model) {
        a.category = follower_pool ? Category::follower_rec : Category::nonfollower_rec;
        if (auto rec = recommend(model, g, profiles, u)) {
          a.suggestion = rec->suggestion;
        } else if (auto w = random_suggestion(g, nodes, u, rng)) {
          a.suggestion = *w;
          a.model_fallback = true;
          ++plan.fallbacks;
        } else {
          continue;  // target is linked to everyone; nothing to suggest
        }
      } else {
        a.category = follower_pool ? Category::follower_rand : Category::nonfollower_rand;
        if (auto w = random_suggestion(g, nodes, u, rng)) {
          a.suggestion = *w;
        } else {
          continue;
        }
      }
      a.origin = a.category;
      (use_model ? rec_out : rand_out).push_back(a);
    }
  };

  std::vector<RecommendationAssignment> categories[4];
  make_assignments(followers, true, categories[0], categories[1]);
  make_assignments(nonfollower_pool, false, categories[2], categories[3]);

  std::size_t m = categories[0].size();
  for (const auto& c : categories) m = std::min(m, c.size());
  if (m == 0) throw std::invalid_argument("a recommendation category came out empty");
  for (auto& c : categories) c.resize(m);  // pools are already in random order

  std::vector<RecommendationAssignment> reciprocals;
  if (frac_reciprocal > 0.0) {
    const auto r_target = static_cast<std::size_t>(
        std::llround(frac_reciprocal * static_cast<double>(4 * m)));

    // duplicate guard across every (target, suggestion) pair in the plan
    std::set<std::pair<UserId, UserId>> used;
    for (const auto& c : categories)
      for (const auto& a : c) used.insert({a.target, a.suggestion});

    std::vector<std::pair<std::size_t, std::size_t>> forward_slots;  // (category, index)
    for (std::size_t c = 0; c < 4; ++c)
      for (std::size_t i = 0; i < m; ++i) forward_slots.emplace_back(c, i);
    rng.shuffle(forward_slots);

    for (const auto& [c, i] : forward_slots) {
      if (reciprocals.size() >= r_target) break;
      const RecommendationAssignment& fwd = categories[c][i];
      const UserId rev_target = fwd.suggestion;
      const UserId rev_suggestion = fwd.target;
      if (g.has_social_arc(rev_target, rev_suggestion)) continue;
      if (!used.insert({rev_target, rev_suggestion}).second) continue;
      RecommendationAssignment rev;
      rev.target = rev_target;
      rev.suggestion = rev_suggestion;
      rev.category = Category::reciprocal;
      rev.origin = fwd.category;
      rev.reciprocated = true;
      reciprocals.push_back(rev);
    }
    if (reciprocals.empty())
      throw std::invalid_argument("no reciprocal pair could be formed");

    // all five categories down-sample to the smallest; partners of every
    // surviving reciprocal assignment must survive too
    if (reciprocals.size() > m) reciprocals.resize(m);
    if (reciprocals.size() < m) {
      const std::size_t s = reciprocals.size();
      std::set<std::pair<UserId, UserId>> partner_of;
      for (const auto& r : reciprocals) partner_of.insert({r.suggestion, r.target});
      for (auto& c : categories) {
        std::vector<RecommendationAssignment> kept, rest;
        for (auto& a : c)
          (partner_of.contains({a.target, a.suggestion}) ? kept : rest).push_back(a);
        for (auto& a : rest) {
          if (kept.size() >= s) break;
          kept.push_back(a);
        }
        c = std::move(kept);
      }
      m = s;
    }

    // reciprocated flags on forwards follow the final reciprocal list
    std::set<std::pair<UserId, UserId>> final_partner;
    for (const auto& r : reciprocals) final_partner.insert({r.suggestion, r.target});
    for (auto& c : categories)
      for (auto& a : c) a.reciprocated = final_partner.contains({a.target, a.suggestion});
  }

  for (const auto& c : categories)
    plan.assignments.insert(plan.assignments.end(), c.begin(), c.end());
  plan.assignments.insert(plan.assignments.end(), reciprocals.begin(), reciprocals.end());
  plan.category_size = m;
  return plan;
}

CampaignResult simulate_responses(SocialGraph& g, std::vector<RecommendationAssignment> plan,
                                  const ResponseModel& model, std::uint64_t start_tick,
                                  std::uint64_t seed) {
  Rng rng = Rng(seed).substream("responses");
  CampaignResult result;

  // rec_sent: actor is the recommended user, subject the suggested contact
  for (const auto& a : plan)
    result.log.append({start_tick, EventKind::rec_sent, a.target, a.suggestion, a.category});

  // acceptance coins, in plan order
  for (auto& a : plan) {
    double p = category_probability(model, a.origin);
    if (a.reciprocated || a.category == Category::reciprocal)
      p = std::min(1.0, p + model.reciprocal_boost);
    a.accepted = rng.bernoulli(p);
  }

  const std::uint64_t response_tick = start_tick + 1;
  std::set<UserId> creators;
  std::set<UserId> followed;
  for (const auto& a : plan) {
    if (!a.accepted) continue;
    followed.insert(a.target);
    creators.insert(a.target);
    if (!g.has_social_arc(a.target, a.suggestion)) {
      g.add_social_arc(a.target, a.suggestion, TieType::neighborhood);
      result.log.append(
          {response_tick, EventKind::link_created, a.target, a.suggestion, a.category});
      ++result.summary.links_created;
    }
  }

  // users that link somebody other than the suggested contact
  if (model.p_offtarget_link > 0.0) {
    std::map<UserId, std::vector<UserId>> suggested_to;
    for (const auto& a : plan) suggested_to[a.target].push_back(a.suggestion);
    const auto nodes = g.nodes();
    for (const auto& [u, suggestions] : suggested_to) {
      if (!rng.bernoulli(model.p_offtarget_link)) continue;
      std::optional<UserId> w;
      for (int attempt = 0; attempt < 64 && !w; ++attempt) {
        const UserId candidate = nodes[rng.index(nodes.size())];
        if (candidate == u || g.has_social_arc(u, candidate)) continue;
        if (std::find(suggestions.begin(), suggestions.end(), candidate) != suggestions.end())
          continue;
        w = candidate;
      }
      if (!w) continue;
      g.add_social_arc(u, *w, TieType::neighborhood);
      result.log.append({response_tick, EventKind::link_created, u, *w, std::nullopt});
      ++result.summary.links_created;
      creators.insert(u);
    }
  }

  std::map<Category, CategoryOutcome> outcomes;
  for (const auto& a : plan) {
    auto& o = outcomes[a.category];
    o.category = a.category;
    ++o.sent;
    if (a.accepted) ++o.accepted;
  }
  std::size_t accepted_total = 0, accepted_random = 0;
  for (const auto& [c, o] : outcomes) {
    result.summary.outcomes.push_back(o);
    accepted_total += o.accepted;
    if (c == Category::follower_rand || c == Category::nonfollower_rand)
      accepted_random += o.accepted;
  }
  result.summary.link_creating_users = creators.size();
  result.summary.following_users = followed.size();
  result.summary.follow_rate =
      creators.empty() ? 0.0
                       : static_cast<double>(followed.size()) / static_cast<double>(creators.size());
  result.summary.random_share =
      accepted_total == 0
          ? 0.0
          : static_cast<double>(accepted_random) / static_cast<double>(accepted_total);
  result.assignments = std::move(plan);
  return result;
}

void save_campaign_summary(const CampaignSummary& summary, const std::string& path,
                           const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary " + path);
  if (!header.empty()) out << header;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", summary.follow_rate);
  out << "# follow_rate " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.6f", summary.random_share);
  out << "# random_share " << buf << '\n';
  out << "# link_creating_users " << summary.link_creating_users << '\n';
  out << "# following_users " << summary.following_users << '\n';
  out << "# links_created " << summary.links_created << '\n';
  for (const auto& o : summary.outcomes)
    out << to_string(o.category) << '\t' << o.sent << '\t' << o.accepted << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void save_assignments(const std::vector<RecommendationAssignment>& assignments,
                      const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write assignments " + path);
  if (!header.empty()) out << header;
  for (const auto& a : assignments) {
    out << a.target << '\t' << a.suggestion << '\t' << to_string(a.category) << '\t'
        << (a.accepted ? 1 : 0) << '\t' << (a.model_fallback ? 1 : 0) << '\t'
        << (a.reciprocated ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace sbw
