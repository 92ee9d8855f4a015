#include <gtest/gtest.h>

#include <sstream>

#include "trajtopo/ingest.hpp"

using namespace trajtopo;

namespace {

std::vector<Trajectory> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

std::string record(const std::string& user, const std::string& post, const std::string& ts,
                   const std::string& emb = "[0.1, 0.2, 0.3]") {
  return "{\"user_id\": \"" + user + "\", \"post_id\": \"" + post + "\", \"timestamp\": " + ts +
         ", \"embedding\": " + emb + "}\n";
}

Trajectory spaced(const std::string& user, std::size_t n, double span_days) {
  Trajectory t;
  t.user_id = user;
  for (std::size_t i = 0; i < n; ++i) {
    Post p;
    p.post_id = "p" + std::to_string(i);
    p.timestamp_seconds = n == 1 ? 0.0 : span_days * kSecondsPerDay * static_cast<double>(i) / (n - 1.0);
    p.embedding = {0.0, 1.0, 2.0};
    t.posts.push_back(p);
  }
  return t;
}

}  // namespace

TEST(ParseCorpus, SortsPostsByTime) {
  const auto c = parse(record("u", "a", "300") + record("u", "b", "100") + record("u", "c", "200"));
  ASSERT_EQ(c.size(), 1u);
  ASSERT_EQ(c[0].posts.size(), 3u);
  EXPECT_EQ(c[0].posts[0].post_id, "b");
  EXPECT_EQ(c[0].posts[1].post_id, "c");
  EXPECT_EQ(c[0].posts[2].post_id, "a");
}

TEST(ParseCorpus, EmptyStream) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("\n  \n").empty());
}

TEST(ParseCorpus, GroupsUsersInIdOrder) {
  const auto c = parse(record("zed", "1", "5") + record("amy", "1", "1") + record("zed", "2", "6") +
                       record("amy", "2", "2") + record("zed", "3", "7"));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].user_id, "amy");
  EXPECT_EQ(c[0].posts.size(), 2u);
  EXPECT_EQ(c[1].user_id, "zed");
  EXPECT_EQ(c[1].posts.size(), 3u);
}

TEST(ParseCorpus, TiesKeepInputOrder) {
  const auto c = parse(record("u", "second", "10") + record("u", "first", "10") + record("u", "early", "5"));
  EXPECT_EQ(c[0].posts[0].post_id, "early");
  EXPECT_EQ(c[0].posts[1].post_id, "second");
  EXPECT_EQ(c[0].posts[2].post_id, "first");
}

TEST(ParseCorpus, OptionalFieldsAndIsoTimestamps) {
  const auto c = parse(
      "{\"user_id\":\"u\",\"post_id\":\"p\",\"timestamp\":\"2019-01-01T00:00:00Z\",\"embedding\":[1,2,3],"
      "\"text\":\"hello\",\"comment_count\":4}\n"
      "{\"user_id\":\"u\",\"post_id\":\"q\",\"timestamp\":\"2019-01-02\",\"embedding\":[1,2,3]}\n");
  ASSERT_EQ(c[0].posts.size(), 2u);
  EXPECT_EQ(c[0].posts[0].timestamp_seconds, 1546300800.0);
  EXPECT_EQ(c[0].posts[0].text, "hello");
  EXPECT_EQ(c[0].posts[0].comment_count, 4);
  EXPECT_EQ(c[0].posts[1].timestamp_seconds, 1546300800.0 + 86400.0);
  EXPECT_FALSE(c[0].posts[1].text.has_value());
  EXPECT_DOUBLE_EQ(c[0].span_days(), 1.0);
}

TEST(ParseIso8601, OffsetsAndFractions) {
  EXPECT_EQ(parse_iso8601("1970-01-01T00:00:00Z"), 0.0);
  EXPECT_EQ(parse_iso8601("1970-01-01T01:00:00+01:00"), 0.0);
  EXPECT_EQ(parse_iso8601("2000-03-01T00:00:00.5Z"), 951868800.5);
  EXPECT_THROW(parse_iso8601("2019-13-01"), Error);
  EXPECT_THROW(parse_iso8601("yesterday"), Error);
  EXPECT_EQ(utc_year(1546300799.0), 2018);
  EXPECT_EQ(utc_year(1546300800.0), 2019);
}

TEST(ParseCorpus, ReportsLineNumbers) {
  const std::string good = record("u", "a", "1");
  auto expect_line = [&](const std::string& text, std::size_t line) {
    try {
      parse(text);
      FAIL() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
      EXPECT_NE(std::string(e.what()).find("line " + std::to_string(line)), std::string::npos);
    }
  };
  expect_line(good + "{not json}\n", 2);
  expect_line(good + "{\"user_id\":\"u\",\"post_id\":\"b\",\"embedding\":[1,2,3]}\n", 2);
  expect_line(good + good, 2);  // duplicate post id
  expect_line(good + record("v", "a", "1", "[1, 2]"), 2);  // dimension mismatch
  expect_line(record("u", "a", "1", "[1, \"x\", 3]"), 1);
  expect_line(record("u", "a", "1", "[]"), 1);
}

TEST(ParseCorpus, RejectsNonFinite) {
  // JSON has no literal for infinity, but overflowing numbers parse to it.
  EXPECT_THROW(parse(record("u", "a", "1", "[1e999, 0, 0]")), ParseError);
  EXPECT_THROW(parse(record("u", "a", "1e999")), ParseError);
}

TEST(ParseCorpus, SamePostIdAcrossUsersIsFine) {
  EXPECT_EQ(parse(record("u", "a", "1") + record("v", "a", "1")).size(), 2u);
}

TEST(WriteCorpus, RoundTrip) {
  std::vector<Trajectory> corpus{spaced("a", 4, 10.5), spaced("b", 3, 200)};
  corpus[0].posts[1].text = "quote \" and newline\n and unicode é";
  corpus[0].posts[2].comment_count = 0;
  corpus[1].posts[0].embedding = {0.1, -1e-300, 123456789.123456789};
  corpus[1].posts[2].timestamp_seconds = 1546300800.25;
  std::stringstream ss;
  write_corpus(ss, corpus);
  EXPECT_EQ(parse_corpus(ss), corpus);

  std::stringstream again, twice;
  write_corpus(again, corpus);
  write_corpus(twice, parse(again.str()));
  EXPECT_EQ(again.str(), twice.str());
}

TEST(ApplyFilter, BoundaryCases) {
  const CorpusFilter defaults;
  EXPECT_TRUE(apply_filter({spaced("a", 10, 89)}, defaults).empty());
  EXPECT_EQ(apply_filter({spaced("a", 10, 90)}, defaults).size(), 1u);
  EXPECT_TRUE(apply_filter({spaced("a", 9, 400)}, defaults).empty());
}

TEST(ApplyFilter, Idempotent) {
  std::vector<Trajectory> corpus;
  for (int i = 0; i < 20; ++i) corpus.push_back(spaced("u" + std::to_string(i), 5 + i, 10.0 * i));
  const CorpusFilter f{12, 60.0};
  const auto once = apply_filter(corpus, f);
  EXPECT_EQ(apply_filter(once, f), once);
  for (const auto& t : once) {
    EXPECT_GE(t.posts.size(), 12u);
    EXPECT_GE(t.span_days(), 60.0);
  }
}

TEST(CorpusFilter, Validates) {
  EXPECT_THROW((CorpusFilter{1, 90.0}.validate()), Error);
  EXPECT_THROW((CorpusFilter{10, -1.0}.validate()), Error);
  EXPECT_NO_THROW(CorpusFilter{}.validate());
}
