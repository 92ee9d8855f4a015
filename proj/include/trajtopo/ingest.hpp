#pragma once
// Line-delimited corpus parsing, validation and inclusion filtering.
//
// Input records are JSON objects, one per line:
//
//   {"user_id": "u1", "post_id": "p7", "timestamp": 1546300800,
//    "embedding": [0.1, ...], "text": "...", "comment_count": 3}
//
// `timestamp` is either epoch seconds (number) or an ISO-8601 string
// (`YYYY-MM-DD`, `YYYY-MM-DDThh:mm:ss[.fff][Z|+hh:mm]`). `text` and
// `comment_count` are optional. Blank lines are skipped.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajtopo/types.hpp"

namespace trajtopo {

struct Post {
  std::string post_id;
  double timestamp_seconds = 0.0;  // UTC epoch seconds
  std::vector<double> embedding;
  std::optional<std::string> text;
  std::optional<long long> comment_count;

  double days() const { return timestamp_seconds / kSecondsPerDay; }

  bool operator==(const Post&) const = default;
};

struct Trajectory {
  std::string user_id;
  std::vector<Post> posts;  // non-decreasing timestamps, unique post ids

  double span_days() const {
    return posts.empty() ? 0.0
                        : (posts.back().timestamp_seconds - posts.front().timestamp_seconds) /
                              kSecondsPerDay;
  }

  bool operator==(const Trajectory&) const = default;
};

struct CorpusFilter {
  std::size_t min_posts = 10;
  double min_span_days = 90.0;

  void validate() const;
};

/// Raised for malformed input; `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Epoch seconds from an ISO-8601 date or date-time string.
double parse_iso8601(std::string_view text);

/// Calendar year (UTC) of an epoch-seconds instant.
int utc_year(double timestamp_seconds);

/// Reads a whole corpus. Trajectories are sorted by user id; posts within a
/// trajectory are stable-sorted by timestamp (ties keep input order).
std::vector<Trajectory> parse_corpus(std::istream& in);

/// Writes the canonical form: one record per line, users in order, posts in
/// time order, timestamps as epoch seconds. Parsing the output reproduces the
/// input trajectories exactly.
void write_corpus(std::ostream& out, const std::vector<Trajectory>& trajectories);

/// Keeps trajectories with at least `min_posts` posts spanning at least
/// `min_span_days`.
std::vector<Trajectory> apply_filter(const std::vector<Trajectory>& trajectories,
                                     const CorpusFilter& filter);

}  // namespace trajtopo
