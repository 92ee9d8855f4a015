#include "trajtopo/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

namespace trajtopo {

using nlohmann::json;

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

void CorpusFilter::validate() const {
  if (min_posts < 2) throw Error("min_posts must be at least 2");
  if (!(min_span_days > 0.0) || !std::isfinite(min_span_days))
    throw Error("min_span_days must be a positive number");
}

namespace {

bool read_int(std::string_view s, std::size_t& pos, std::size_t width, int& out) {
  if (pos + width > s.size()) return false;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + width, out);
  if (ec != std::errc() || ptr != s.data() + pos + width) return false;
  pos += width;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) return false;
  ++pos;
  return true;
}

}  // namespace

double parse_iso8601(std::string_view s) {
  using namespace std::chrono;
  auto fail = [&]() -> double {
    throw Error("invalid ISO-8601 timestamp '" + std::string(s) + "'");
  };

  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0;
  if (!read_int(s, pos, 4, y) || !expect(s, pos, '-') || !read_int(s, pos, 2, mo) ||
      !expect(s, pos, '-') || !read_int(s, pos, 2, d))
    return fail();
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return fail();
  double seconds = static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * kSecondsPerDay;
  if (pos == s.size()) return seconds;

  if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return fail();
  ++pos;
  int hh = 0, mm = 0, ss = 0;
  if (!read_int(s, pos, 2, hh) || !expect(s, pos, ':') || !read_int(s, pos, 2, mm))
    return fail();
  if (pos < s.size() && s[pos] == ':' && !(++pos, read_int(s, pos, 2, ss))) return fail();
  if (hh > 23 || mm > 59 || ss > 60) return fail();
  seconds += hh * 3600.0 + mm * 60.0 + ss;

  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    double scale = 0.1;
    std::size_t digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      seconds += (s[pos] - '0') * scale;
      scale /= 10.0;
      ++pos;
      ++digits;
    }
    if (digits == 0) return fail();
  }

  if (pos == s.size()) return seconds;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '+' ? 1 : -1;
    ++pos;
    int oh = 0, om = 0;
    if (!read_int(s, pos, 2, oh)) return fail();
    if (pos < s.size() && s[pos] == ':') ++pos;
    if (pos < s.size() && !read_int(s, pos, 2, om)) return fail();
    seconds -= sign * (oh * 3600.0 + om * 60.0);
  } else {
    return fail();
  }
  if (pos != s.size()) return fail();
  return seconds;
}

int utc_year(double timestamp_seconds) {
  using namespace std::chrono;
  const auto day_count = static_cast<long>(std::floor(timestamp_seconds / kSecondsPerDay));
  const year_month_day ymd{sys_days{days{day_count}}};
  return static_cast<int>(ymd.year());
}

namespace {

struct Record {
  std::string user_id;
  Post post;
};

Record parse_record(const std::string& line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(line_no, std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line_no, "record is not an object");

  auto require = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(line_no, std::string("missing field '") + key + "'");
    return *it;
  };

  Record r;
  const json& user = require("user_id");
  const json& post = require("post_id");
  if (!user.is_string()) throw ParseError(line_no, "user_id must be a string");
  if (!post.is_string()) throw ParseError(line_no, "post_id must be a string");
  r.user_id = user.get<std::string>();
  r.post.post_id = post.get<std::string>();

  const json& ts = require("timestamp");
  if (ts.is_number()) {
    r.post.timestamp_seconds = ts.get<double>();
  } else if (ts.is_string()) {
    try {
      r.post.timestamp_seconds = parse_iso8601(ts.get<std::string>());
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  } else {
    throw ParseError(line_no, "timestamp must be a number or an ISO-8601 string");
  }
  if (!std::isfinite(r.post.timestamp_seconds))
    throw ParseError(line_no, "timestamp is not finite");

  const json& emb = require("embedding");
  if (!emb.is_array() || emb.empty())
    throw ParseError(line_no, "embedding must be a non-empty array of numbers");
  r.post.embedding.reserve(emb.size());
  for (const auto& v : emb) {
    // nlohmann parses NaN/Infinity literals as errors, but huge exponents overflow to inf.
    if (!v.is_number()) throw ParseError(line_no, "embedding must contain only numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(line_no, "embedding contains a non-finite value");
    r.post.embedding.push_back(x);
  }

  if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line_no, "text must be a string");
    r.post.text = it->get<std::string>();
  }
  if (auto it = j.find("comment_count"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 0)
      throw ParseError(line_no, "comment_count must be a non-negative integer");
    r.post.comment_count = it->get<long long>();
  }
  return r;
}

}  // namespace

std::vector<Trajectory> parse_corpus(std::istream& in) {
  std::map<std::string, Trajectory> by_user;
  std::map<std::string, std::unordered_set<std::string>> seen_ids;
  std::optional<std::size_t> dim;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    Record r = parse_record(line, line_no);
    if (!dim) {
      dim = r.post.embedding.size();
    } else if (*dim != r.post.embedding.size()) {
      throw ParseError(line_no, "embedding dimension " + std::to_string(r.post.embedding.size()) +
                                    " differs from corpus dimension " + std::to_string(*dim));
    }
    if (!seen_ids[r.user_id].insert(r.post.post_id).second)
      throw ParseError(line_no, "duplicate post_id '" + r.post.post_id + "' for user '" +
                                    r.user_id + "'");

    Trajectory& t = by_user[r.user_id];
    t.user_id = r.user_id;
    t.posts.push_back(std::move(r.post));
  }

  std::vector<Trajectory> out;
  out.reserve(by_user.size());
  for (auto& [user, t] : by_user) {
    std::stable_sort(t.posts.begin(), t.posts.end(), [](const Post& a, const Post& b) {
      return a.timestamp_seconds < b.timestamp_seconds;
    });
    out.push_back(std::move(t));
  }
  return out;
}

void write_corpus(std::ostream& out, const std::vector<Trajectory>& trajectories) {
  for (const auto& t : trajectories) {
    for (const auto& p : t.posts) {
      json j;
      j["user_id"] = t.user_id;
      j["post_id"] = p.post_id;
      const double whole = std::trunc(p.timestamp_seconds);
      if (whole == p.timestamp_seconds && std::fabs(whole) < 9.0e15)
        j["timestamp"] = static_cast<long long>(whole);
      else
        j["timestamp"] = p.timestamp_seconds;
      j["embedding"] = p.embedding;
      if (p.text) j["text"] = *p.text;
      if (p.comment_count) j["comment_count"] = *p.comment_count;
      out << j.dump() << '\n';
    }
  }
}

std::vector<Trajectory> apply_filter(const std::vector<Trajectory>& trajectories,
                                     const CorpusFilter& filter) {
  std::vector<Trajectory> kept;
  for (const auto& t : trajectories) {
    if (t.posts.size() >= filter.min_posts && t.span_days() >= filter.min_span_days)
      kept.push_back(t);
  }
  return kept;
}

}  // namespace trajtopo
