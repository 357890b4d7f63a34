#include "sbw/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace sbw {

namespace {

template <typename T>
void sorted_insert_unique(std::vector<T>& v, T x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

[[noreturn]] void fail_at(std::string_view origin, std::size_t line_no, const std::string& what) {
  throw std::runtime_error(std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_int(std::string_view field, std::string_view origin, std::size_t line_no,
            const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail_at(origin, line_no, std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

void Profile::add_book(ItemId item) { sorted_insert_unique(library, item); }

void Profile::add_group(GroupId group) { sorted_insert_unique(groups, group); }

bool Profile::in_group(GroupId group) const {
  return std::binary_search(groups.begin(), groups.end(), group);
}

Profile& ProfileStore::ensure(UserId u) {
  group_index_fresh_ = false;
  auto [it, inserted] = profiles_.try_emplace(u);
  if (inserted) it->second.user = u;
  return it->second;
}

const Profile& ProfileStore::at_or_empty(UserId u) const {
  static const Profile empty{};
  auto it = profiles_.find(u);
  return it == profiles_.end() ? empty : it->second;
}

std::vector<UserId> ProfileStore::users() const {
  std::vector<UserId> out;
  out.reserve(profiles_.size());
  for (const auto& [u, p] : profiles_) out.push_back(u);
  return out;
}

std::size_t ProfileStore::group_size(GroupId group) const {
  if (!group_index_fresh_) {
    group_sizes_.clear();
    for (const auto& [u, p] : profiles_) {
      for (GroupId g : p.groups) ++group_sizes_[g];
    }
    group_index_fresh_ = true;
  }
  auto it = group_sizes_.find(group);
  return it == group_sizes_.end() ? 0 : it->second;
}

std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::positive: return "positive";
    case Sentiment::neutral: return "neutral";
    case Sentiment::negative: return "negative";
  }
  return "neutral";
}

std::optional<Sentiment> sentiment_from_string(std::string_view s) {
  if (s == "positive") return Sentiment::positive;
  if (s == "neutral") return Sentiment::neutral;
  if (s == "negative") return Sentiment::negative;
  return std::nullopt;
}

bool MessageRecord::has_keyword(std::string_view kw) const {
  return std::binary_search(keywords.begin(), keywords.end(), lowercase(kw));
}

ProfileStore read_profiles(std::istream& in, std::string_view origin) {
  ProfileStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) fail_at(origin, line_no, "expected user, books=, groups=, nat=");
    UserId user = parse_int<UserId>(fields[0], origin, line_no, "user id");
    if (store.contains(user)) fail_at(origin, line_no, "duplicate user " + std::to_string(user));
    if (!fields[1].starts_with("books=")) fail_at(origin, line_no, "missing books= field");
    if (!fields[2].starts_with("groups=")) fail_at(origin, line_no, "missing groups= field");
    if (!fields[3].starts_with("nat=")) fail_at(origin, line_no, "missing nat= field");

    Profile& p = store.ensure(user);
    auto books = fields[1].substr(6);
    if (!books.empty()) {
      for (auto item : split(books, ','))
        p.add_book(parse_int<ItemId>(item, origin, line_no, "book id"));
    }
    auto groups = fields[2].substr(7);
    if (!groups.empty()) {
      for (auto grp : split(groups, ','))
        p.add_group(parse_int<GroupId>(grp, origin, line_no, "group id"));
    }
    auto nat = fields[3].substr(4);
    if (!nat.empty()) p.nationality = std::string(nat);
  }
  return store;
}

void write_profiles(const ProfileStore& store, std::ostream& out) {
  for (const auto& [user, p] : store) {
    out << user << "\tbooks=";
    for (std::size_t i = 0; i < p.library.size(); ++i) {
      if (i) out << ',';
      out << p.library[i];
    }
    out << "\tgroups=";
    for (std::size_t i = 0; i < p.groups.size(); ++i) {
      if (i) out << ',';
      out << p.groups[i];
    }
    out << "\tnat=" << (p.nationality ? *p.nationality : "") << '\n';
  }
}

ProfileStore load_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file " + path);
  return read_profiles(in, path);
}

void save_profiles(const ProfileStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write profile file " + path);
  write_profiles(store, out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<MessageRecord> read_messages(std::istream& in, std::string_view origin) {
  std::vector<MessageRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 5)
      fail_at(origin, line_no, "expected time, author, recipient, sentiment, tokens");
    MessageRecord rec;
    rec.time = parse_int<std::uint64_t>(fields[0], origin, line_no, "time");
    rec.author = parse_int<UserId>(fields[1], origin, line_no, "author");
    rec.recipient = parse_int<UserId>(fields[2], origin, line_no, "recipient");
    if (fields[3] != "-") {
      auto s = sentiment_from_string(fields[3]);
      if (!s) fail_at(origin, line_no, "unknown sentiment '" + std::string(fields[3]) + "'");
      rec.sentiment = s;
    }
    if (!fields[4].empty()) {
      for (auto token : split(fields[4], ' ')) {
        if (token.empty()) continue;
        sorted_insert_unique(rec.keywords, lowercase(token));
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_messages(const std::vector<MessageRecord>& messages, std::ostream& out) {
  for (const auto& m : messages) {
    out << m.time << '\t' << m.author << '\t' << m.recipient << '\t'
        << (m.sentiment ? to_string(*m.sentiment) : "-") << '\t';
    for (std::size_t i = 0; i < m.keywords.size(); ++i) {
      if (i) out << ' ';
      out << m.keywords[i];
    }
    out << '\n';
  }
}

std::vector<MessageRecord> load_messages(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open message file " + path);
  return read_messages(in, path);
}

void save_messages(const std::vector<MessageRecord>& messages, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write message file " + path);
  write_messages(messages, out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<UserId> filter_active(const ProfileStore& profiles, std::size_t min_books) {
  std::vector<UserId> out;
  for (const auto& [user, p] : profiles) {
    if (p.book_count() >= min_books) out.push_back(user);
  }
  return out;
}

std::vector<InboxBucket> books_messages_by_inbox(const SocialGraph& g,
                                                 const ProfileStore& profiles) {
  struct Acc {
    double books = 0.0;
    double sent = 0.0;
    std::size_t users = 0;
  };
  std::map<std::uint64_t, Acc> buckets;
  for (UserId u : g.nodes()) {
    Acc& acc = buckets[g.msg_in(u)];
    acc.books += static_cast<double>(profiles.at_or_empty(u).book_count());
    acc.sent += static_cast<double>(g.msg_out(u));
    ++acc.users;
  }
  std::vector<InboxBucket> out;
  out.reserve(buckets.size());
  for (const auto& [msg_in, acc] : buckets) {
    out.push_back({msg_in, acc.books / static_cast<double>(acc.users),
                   acc.sent / static_cast<double>(acc.users)});
  }
  return out;
}

}  // namespace sbw
