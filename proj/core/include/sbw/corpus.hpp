// User profile store and file ingestion: per-user libraries, group
// memberships, nationality tags, and labeled message streams.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbw/graph.hpp"

namespace sbw {

using ItemId = std::uint32_t;
using GroupId = std::uint32_t;

struct Profile {
  UserId user = 0;
  std::vector<ItemId> library;  // sorted, no duplicates
  std::vector<GroupId> groups;  // sorted, no duplicates
  std::optional<std::string> nationality;

  std::size_t book_count() const { return library.size(); }
  void add_book(ItemId item);
  void add_group(GroupId group);
  bool in_group(GroupId group) const;

  bool operator==(const Profile&) const = default;
};

class ProfileStore {
 public:
  Profile& ensure(UserId u);
  bool contains(UserId u) const { return profiles_.contains(u); }
  // Users absent from the store read as empty profiles.
  const Profile& at_or_empty(UserId u) const;
  std::size_t size() const { return profiles_.size(); }
  std::vector<UserId> users() const;

  // Number of members of a group. Indexed lazily; call once before any
  // concurrent reads.
  std::size_t group_size(GroupId group) const;

  auto begin() const { return profiles_.begin(); }
  auto end() const { return profiles_.end(); }

  bool operator==(const ProfileStore& other) const { return profiles_ == other.profiles_; }

 private:
  std::map<UserId, Profile> profiles_;
  mutable std::map<GroupId, std::size_t> group_sizes_;
  mutable bool group_index_fresh_ = false;
};

enum class Sentiment : std::uint8_t { positive, neutral, negative };

std::string_view to_string(Sentiment s);
std::optional<Sentiment> sentiment_from_string(std::string_view s);

struct MessageRecord {
  std::uint64_t time = 0;
  UserId author = 0;
  UserId recipient = 0;
  std::optional<Sentiment> sentiment;
  std::vector<std::string> keywords;  // sorted lowercase tokens, no duplicates

  bool has_keyword(std::string_view kw) const;
  bool operator==(const MessageRecord&) const = default;
};

// Profile file: user<TAB>books=<csv ids><TAB>groups=<csv ids><TAB>nat=<tag>.
// Empty lists and an empty tag are allowed; duplicate user lines are an
// error. '#' lines ignored.
ProfileStore load_profiles(const std::string& path);
void save_profiles(const ProfileStore& store, const std::string& path);
ProfileStore read_profiles(std::istream& in, std::string_view origin = "<stream>");
void write_profiles(const ProfileStore& store, std::ostream& out);

// Message file: time<TAB>author<TAB>recipient<TAB>sentiment<TAB>text-tokens.
// sentiment is positive/neutral/negative or '-' when unlabeled; tokens are
// space-separated and lowercased on load.
std::vector<MessageRecord> load_messages(const std::string& path);
void save_messages(const std::vector<MessageRecord>& messages, const std::string& path);
std::vector<MessageRecord> read_messages(std::istream& in, std::string_view origin = "<stream>");
void write_messages(const std::vector<MessageRecord>& messages, std::ostream& out);

// Users with at least min_books items in their library, ascending ids.
std::vector<UserId> filter_active(const ProfileStore& profiles, std::size_t min_books);

// Mean library size and mean sent-message count grouped by received-message
// count, ascending in msg_in.
struct InboxBucket {
  std::uint64_t msg_in = 0;
  double mean_books = 0.0;
  double mean_sent = 0.0;
};
std::vector<InboxBucket> books_messages_by_inbox(const SocialGraph& g,
                                                 const ProfileStore& profiles);

}  // namespace sbw
