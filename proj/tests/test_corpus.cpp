#include <doctest.h>

#include <stdexcept>

#include <sstream>

#include "oracles.hpp"
#include "sbw/corpus.hpp"
#include "sbw/simulator.hpp"

using namespace sbw;

TEST_SUITE("corpus") {

TEST_CASE("profile line parses books, groups and nationality") {
  std::istringstream in("7\tbooks=1,2,3\tgroups=9\tnat=it\n");
  const ProfileStore store = read_profiles(in);
  CHECK(store.size() == 1);
  CHECK(store.at_or_empty(7).book_count() == 3);
  CHECK(store.at_or_empty(7).groups == std::vector<GroupId>{9});
  CHECK(store.at_or_empty(7).nationality == "it");
}

TEST_CASE("empty file yields an empty store") {
  std::istringstream in("");
  CHECK(read_profiles(in).size() == 0);
}

TEST_CASE("duplicate user lines are an error") {
  std::istringstream in("7\tbooks=\tgroups=\tnat=\n7\tbooks=1\tgroups=\tnat=\n");
  CHECK_THROWS_WITH_AS(read_profiles(in, "p.tsv"), "p.tsv:2: duplicate user 7",
                       std::runtime_error);
}

TEST_CASE("malformed lines name their line number") {
  std::istringstream in("7\tbooks=1\tgroups=2\n");
  CHECK_THROWS_AS(read_profiles(in, "p.tsv"), std::runtime_error);
  std::istringstream bad_id("x\tbooks=\tgroups=\tnat=\n");
  CHECK_THROWS_AS(read_profiles(bad_id), std::runtime_error);
}

TEST_CASE("profiles round-trip") {
  ProfileStore store;
  Profile& a = store.ensure(3);
  a.add_book(10);
  a.add_book(4);
  a.add_group(2);
  a.nationality = "it";
  store.ensure(9);  // empty profile

  std::ostringstream out;
  write_profiles(store, out);
  std::istringstream in(out.str());
  const ProfileStore loaded = read_profiles(in);
  CHECK(loaded == store);
}

TEST_CASE("absent users read as empty profiles") {
  ProfileStore store;
  CHECK(store.at_or_empty(100).book_count() == 0);
  CHECK_FALSE(store.contains(100));
}

TEST_CASE("filter_active thresholds") {
  ProfileStore store;
  for (UserId u = 0; u < 12; ++u) {
    Profile& p = store.ensure(u);
    for (std::size_t b = 0; b < u; ++b) p.add_book(static_cast<ItemId>(b));
  }
  SUBCASE("below threshold is excluded") {
    const auto active = filter_active(store, 10);
    CHECK(std::find(active.begin(), active.end(), 9) == active.end());
  }
  SUBCASE("exactly at threshold is included") {
    const auto active = filter_active(store, 10);
    CHECK(std::find(active.begin(), active.end(), 10) != active.end());
    CHECK(active == std::vector<UserId>{10, 11});
  }
  SUBCASE("zero threshold keeps everyone") {
    CHECK(filter_active(store, 0).size() == store.size());
  }
  SUBCASE("raising the threshold never adds users") {
    auto previous = filter_active(store, 0);
    for (std::size_t min_books = 1; min_books < 14; ++min_books) {
      auto current = filter_active(store, min_books);
      for (UserId u : current)
        CHECK(std::find(previous.begin(), previous.end(), u) != previous.end());
      previous = std::move(current);
    }
  }
}

TEST_CASE("books_messages_by_inbox means") {
  SocialGraph g;
  ProfileStore store;
  SUBCASE("single user with empty inbox") {
    g.add_node(5);
    for (ItemId b = 0; b < 5; ++b) store.ensure(5).add_book(b);
    const auto rows = books_messages_by_inbox(g, store);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].msg_in == 0);
    CHECK(rows[0].mean_books == doctest::Approx(5.0));
    CHECK(rows[0].mean_sent == doctest::Approx(0.0));
  }
  SUBCASE("users sharing an inbox count average their libraries") {
    g.add_message(1, 2);
    g.add_message(3, 2);
    g.add_message(1, 4);
    g.add_message(3, 4);
    for (ItemId b = 0; b < 4; ++b) store.ensure(2).add_book(b);
    for (ItemId b = 0; b < 6; ++b) store.ensure(4).add_book(b);
    const auto rows = books_messages_by_inbox(g, store);
    // senders have msg_in 0; recipients 2 and 4 share msg_in=2
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].msg_in == 2);
    CHECK(rows[1].mean_books == doctest::Approx(5.0));
  }
}

TEST_CASE("homophilous generator output correlates inbox size with books") {
  GeneratorConfig cfg;
  cfg.n_nodes = 1500;
  cfg.catalog_size = 6000;
  cfg.group_count = 80;
  cfg.seed = 5;
  const GeneratedNetwork net = generate_network(cfg);
  const auto rows = books_messages_by_inbox(net.graph, net.profiles);
  REQUIRE(rows.size() >= 5);
  std::vector<double> inbox, books;
  for (const auto& row : rows) {
    inbox.push_back(static_cast<double>(row.msg_in));
    books.push_back(row.mean_books);
  }
  const double rho = oracle::spearman(inbox, books);
  CHECK(rho > 0.2);
}

TEST_CASE("message records parse sentiment and lowercase tokens") {
  std::istringstream in(
      "3\t1\t2\tpositive\tHello World\n"
      "5\t2\t1\t-\tviSitor again viSitor\n");
  const auto messages = read_messages(in);
  REQUIRE(messages.size() == 2);
  CHECK(messages[0].sentiment == Sentiment::positive);
  CHECK(messages[0].keywords == std::vector<std::string>{"hello", "world"});
  CHECK_FALSE(messages[1].sentiment.has_value());
  CHECK(messages[1].has_keyword("VISITOR"));
  CHECK(messages[1].keywords.size() == 2);  // duplicates collapse

  std::ostringstream out;
  write_messages(messages, out);
  std::istringstream back(out.str());
  CHECK(read_messages(back) == messages);
}

TEST_CASE("unknown sentiment labels are an error") {
  std::istringstream in("3\t1\t2\tmeh\twords\n");
  CHECK_THROWS_AS(read_messages(in), std::runtime_error);
}

}  // TEST_SUITE
