// Agent-based harness: synthetic two-layer network generation, the probing
// bot's visit rounds, and the recommendation campaign with configurable
// user-response models. Everything is a deterministic function of its seed.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbw/corpus.hpp"
#include "sbw/graph.hpp"
#include "sbw/linkpred.hpp"

namespace sbw {

// Growth model: each new node draws a library from a genre-structured
// catalog, then attaches by preferential attachment blended with
// library-cosine homophily. reciprocation_prob is the target measured
// reciprocation of the social layer (the per-arc reverse probability is
// derived internally). A communication baseline is synthesized on top of
// the social layer so message volume correlates with user activity.
struct GeneratorConfig {
  std::size_t n_nodes = 20000;
  double attachment_exponent = 1.0;
  double reciprocation_prob = 0.57;
  double homophily_strength = 3.0;
  std::size_t arcs_per_node = 6;  // forward arcs; reciprocation lifts mean k_out to ~8

  std::size_t catalog_size = 40000;
  std::size_t genre_count = 25;
  double books_mean = 40.0;
  std::size_t min_books = 2;
  double activity_bias = 0.6;  // attachment boost of large libraries

  std::size_t group_count = 400;
  double groups_mean = 3.0;

  double comm_arc_prob = 0.6;   // fraction of social arcs that carry messages
  double messages_mean = 4.0;   // mean messages on a communicating arc

  std::size_t candidate_pool = 24;   // attachment candidates rescored by homophily
  double densify_fraction = 0.15;    // extra arcs between snapshots, per social arc

  std::uint64_t seed = 1;
};

struct GeneratedNetwork {
  SocialGraph graph;
  ProfileStore profiles;
};

GeneratedNetwork generate_network(const GeneratorConfig& cfg);

// Two snapshots of one growing network: t0 right after growth, t1 after a
// densification pass that closes distance-2 pairs (preferring many common
// neighbors and similar libraries). Training sets are built across them.
struct Snapshots {
  SocialGraph t0;
  SocialGraph t1;
  ProfileStore profiles;
};

Snapshots grow_snapshots(const GeneratorConfig& cfg);

// Per-category acceptance probabilities plus the shout/linking behavior of
// visited users. Assignments in a reciprocal pair get reciprocal_boost
// added on both directions.
struct ResponseModel {
  double p_shout_per_visit = 0.02;
  double shout_decay = 0.85;           // multiplies shout probability per prior visit
  double p_follow_bot_per_visit = 0.003;  // visited user adds a social arc to the bot
  double p_offtarget_link = 0.145;     // recommended user links someone else instead

  double p_follower_rec = 0.28;
  double p_follower_rand = 0.030;
  double p_nonfollower_rec = 0.12;
  double p_nonfollower_rand = 0.014;
  double reciprocal_boost = 0.06;

  // Preset reproducing the campaign aggregates (52% follow rate among
  // link creators, 11% random-category share of successes).
  static ResponseModel calibrated() { return ResponseModel{}; }
};

enum class EventKind : std::uint8_t { visit, shout, rec_sent, link_created };

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view s);

enum class Category : std::uint8_t {
  follower_rec,
  follower_rand,
  nonfollower_rec,
  nonfollower_rand,
  reciprocal,
};

std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view s);
inline constexpr std::size_t kCategoryCount = 5;

struct Event {
  std::uint64_t tick = 0;
  EventKind kind = EventKind::visit;
  UserId actor = 0;
  UserId subject = 0;
  std::optional<Category> category;

  bool operator==(const Event&) const = default;
};

struct EventLog {
  std::vector<Event> events;

  void append(Event e);
  std::uint64_t last_tick() const { return events.empty() ? 0 : events.back().tick; }
  bool operator==(const EventLog&) const = default;
};

// tick<TAB>kind<TAB>actor<TAB>subject<TAB>category ('-' when absent)
void save_event_log(const EventLog& log, const std::string& path,
                    const std::string& header = {});
EventLog load_event_log(const std::string& path);
void write_event_log(const EventLog& log, std::ostream& out);
EventLog read_event_log(std::istream& in, std::string_view origin = "<stream>");

struct ProbeResult {
  UserId bot = 0;
  EventLog log;
};

// Adds the bot node and runs `rounds` visit rounds over all nodes
// BFS-reachable along social out-arcs from the smallest node id. Visited
// users shout with probability p_shout_per_visit * decay^(prior visits)
// (a shout is a message to the bot) and may add a social arc to the bot;
// nothing happens between rounds.
ProbeResult run_probe_rounds(SocialGraph& g, const ProfileStore& profiles,
                             const ResponseModel& model, std::size_t rounds,
                             std::uint64_t interval_ticks, std::uint64_t seed);

struct RecommendationAssignment {
  UserId target = 0;
  UserId suggestion = 0;
  Category category = Category::follower_rec;
  Category origin = Category::follower_rec;  // for reciprocal: partner's category
  bool reciprocated = false;                 // part of a reciprocal pair
  bool model_fallback = false;               // recommender had no candidate
  bool accepted = false;
};

struct CampaignPlan {
  std::vector<RecommendationAssignment> assignments;
  std::size_t category_size = 0;  // equalized size of every category
  std::size_t fallbacks = 0;
};

// The five-category protocol: followers (the shouters) paired with an
// equal number of sampled non-followers holding at least min_books books;
// frac_model of each pool gets the classifier's top-1 suggestion, the rest
// a uniform random non-linked user; frac_reciprocal of all pairs spawn the
// reverse assignment. Category sizes are equalized by down-sampling.
CampaignPlan assign_recommendations(const SocialGraph& g, const ProfileStore& profiles,
                                    const std::vector<UserId>& shouters,
                                    const ClassifierModel& model, std::size_t min_books,
                                    double frac_model, double frac_reciprocal,
                                    std::uint64_t seed,
                                    const std::optional<std::string>& eligible_tag = {});

struct CategoryOutcome {
  Category category = Category::follower_rec;
  std::size_t sent = 0;
  std::size_t accepted = 0;
};

struct CampaignSummary {
  std::vector<CategoryOutcome> outcomes;  // one row per category present
  std::size_t links_created = 0;
  std::size_t link_creating_users = 0;
  std::size_t following_users = 0;  // accepted at least one suggestion
  double follow_rate = 0.0;         // following / link-creating
  double random_share = 0.0;        // accepted in *_rand / accepted total
};

struct CampaignResult {
  std::vector<RecommendationAssignment> assignments;  // accepted flags set
  EventLog log;
  CampaignSummary summary;
};

// Flips one acceptance coin per assignment (category probability, plus
// reciprocal_boost for reciprocal pairs); accepted assignments create the
// suggested social arc. Targets may instead link a random other user with
// probability p_offtarget_link, which makes the follow rate among
// link-creating users meaningful.
CampaignResult simulate_responses(SocialGraph& g, std::vector<RecommendationAssignment> plan,
                                  const ResponseModel& model, std::uint64_t start_tick,
                                  std::uint64_t seed);

// category<TAB>sent<TAB>accepted rows.
void save_campaign_summary(const CampaignSummary& summary, const std::string& path,
                           const std::string& header = {});

void save_assignments(const std::vector<RecommendationAssignment>& assignments,
                      const std::string& path, const std::string& header = {});

}  // namespace sbw
