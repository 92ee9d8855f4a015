#include "trajtopo/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "trajtopo/io.hpp"

namespace trajtopo {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kImproved: return "improved";
    case Label::kNotImproved: return "not_improved";
    case Label::kUnclear: return "unclear";
  }
  return "unclear";
}

std::string_view to_string(LabelSource source) {
  switch (source) {
    case LabelSource::kPattern: return "pattern";
    case LabelSource::kBehaviorFrequency: return "behavior_frequency";
    case LabelSource::kBehaviorResponse: return "behavior_response";
    case LabelSource::kSyntheticTruth: return "synthetic_truth";
  }
  return "pattern";
}

Label parse_label(std::string_view name) {
  for (auto l : {Label::kImproved, Label::kNotImproved, Label::kUnclear})
    if (to_string(l) == name) return l;
  throw Error("unknown label '" + std::string(name) + "'");
}

LabelSource parse_label_source(std::string_view name) {
  for (auto s : {LabelSource::kPattern, LabelSource::kBehaviorFrequency,
                 LabelSource::kBehaviorResponse, LabelSource::kSyntheticTruth})
    if (to_string(s) == name) return s;
  throw Error("unknown label source '" + std::string(name) + "'");
}

PatternSet::PatternSet(std::vector<std::string> patterns) : sources_(std::move(patterns)) {
  if (sources_.empty()) throw Error("pattern set is empty");
  for (const auto& p : sources_) {
    try {
      compiled_.emplace_back(p, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error("invalid pattern '" + p + "': " + e.what());
    }
  }
}

PatternSet PatternSet::defaults() {
  return PatternSet({
      R"(\bi(?:'|’|\s+a)?m\s+(?:feeling|doing)\s+(?:a\s+(?:little|bit|lot)\s+)?better\b)",
      R"(\bi(?:'|’)?ve\s+been\s+(?:feeling|doing)\s+better\b)",
      R"(\bi\s+(?:feel|felt)\s+better\b)",
      R"(\bthings\s+(?:are|have\s+been)\s+improving\b)",
      R"(\bthings\s+(?:have\s+)?improved\b)",
      R"(\bthings\s+are\s+getting\s+better\b)",
      R"(\btherapy\s+(?:is|has\s+been)\s+helping\b)",
      R"(\btherapy\s+(?:has\s+)?(?:helped|helps)\b)",
  });
}

PatternSet PatternSet::parse(std::istream& in) {
  std::vector<std::string> patterns;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    patterns.push_back(line.substr(first, last - first + 1));
  }
  return PatternSet(std::move(patterns));
}

bool PatternSet::matches(std::string_view text) const {
  return std::any_of(compiled_.begin(), compiled_.end(), [&](const std::regex& re) {
    return std::regex_search(text.begin(), text.end(), re);
  });
}

std::size_t edge_slice_size(std::size_t n) { return (n + 4) / 5; }

LabelRecord pattern_label(const Trajectory& trajectory, const PatternSet& patterns) {
  const std::size_t n = trajectory.posts.size();
  if (n < 5) throw Error("pattern labels need at least 5 posts");
  const std::size_t slice = edge_slice_size(n);
  LabelRecord rec{trajectory.user_id, Label::kUnclear, LabelSource::kPattern};

  auto any_match = [&](std::size_t begin, std::size_t end, bool& missing) {
    bool hit = false;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& text = trajectory.posts[i].text;
      if (!text) {
        missing = true;
        continue;
      }
      hit = hit || patterns.matches(*text);
    }
    return hit;
  };
  bool missing = false;
  const bool early = any_match(0, slice, missing);
  const bool late = any_match(n - slice, n, missing);
  if (missing) return rec;
  rec.label = (late && !early) ? Label::kImproved : Label::kNotImproved;
  return rec;
}

namespace {

double midpoint_seconds(const Trajectory& t) {
  return 0.5 * (t.posts.front().timestamp_seconds + t.posts.back().timestamp_seconds);
}

}  // namespace

LabelRecord frequency_label(const Trajectory& trajectory, double theta) {
  if (trajectory.posts.empty() || trajectory.span_days() < 2.0)
    throw Error("frequency label needs a span of at least 2 days");
  const double mid = midpoint_seconds(trajectory);
  std::size_t early = 0, late = 0;
  for (const auto& p : trajectory.posts) (p.timestamp_seconds < mid ? early : late)++;
  // Both halves cover the same duration, so counts compare as rates.
  const bool improved = static_cast<double>(late) <= (1.0 - theta) * static_cast<double>(early);
  return {trajectory.user_id, improved ? Label::kImproved : Label::kNotImproved,
          LabelSource::kBehaviorFrequency};
}

LabelRecord response_label(const Trajectory& trajectory, double theta) {
  LabelRecord rec{trajectory.user_id, Label::kUnclear, LabelSource::kBehaviorResponse};
  const std::size_t n = trajectory.posts.size();
  if (n == 0) return rec;
  std::size_t with_counts = 0;
  for (const auto& p : trajectory.posts)
    if (p.comment_count) ++with_counts;
  if (static_cast<double>(with_counts) < 0.8 * static_cast<double>(n)) return rec;

  const double mid = midpoint_seconds(trajectory);
  double early_sum = 0, late_sum = 0;
  std::size_t early_n = 0, late_n = 0;
  for (const auto& p : trajectory.posts) {
    if (!p.comment_count) continue;
    if (p.timestamp_seconds < mid) {
      early_sum += static_cast<double>(*p.comment_count);
      ++early_n;
    } else {
      late_sum += static_cast<double>(*p.comment_count);
      ++late_n;
    }
  }
  if (early_n == 0 || late_n == 0) return rec;
  const double early = early_sum / static_cast<double>(early_n);
  const double late = late_sum / static_cast<double>(late_n);
  rec.label = (late > 0.0 && late >= (1.0 + theta) * early) ? Label::kImproved : Label::kNotImproved;
  return rec;
}

Kappa cohens_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw Error("kappa: label sequences differ in length");
  if (a.empty()) throw Error("kappa: no labels");
  const double n = static_cast<double>(a.size());
  std::map<Label, double> count_a, count_b;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    count_a[a[i]] += 1.0;
    count_b[b[i]] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [label, ca] : count_a)
    if (auto it = count_b.find(label); it != count_b.end()) p_e += (ca / n) * (it->second / n);
  if (p_e >= 1.0) return {p_o >= 1.0 ? 1.0 : 0.0, true};
  return {(p_o - p_e) / (1.0 - p_e), false};
}

void write_label_table(std::ostream& out, const std::vector<LabelRecord>& rows,
                       const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "user_id,source,label\n";
  for (const auto& r : rows)
    out << r.user_id << ',' << to_string(r.source) << ',' << to_string(r.label) << '\n';
}

std::vector<LabelRecord> read_label_table(std::istream& in) {
  std::vector<LabelRecord> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      if (line != "user_id,source,label") throw Error("label table: unexpected header '" + line + "'");
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 3) throw Error("label table line " + std::to_string(line_no) + ": expected 3 fields");
    rows.push_back({f[0], parse_label(f[2]), parse_label_source(f[1])});
  }
  return rows;
}

}  // namespace trajtopo
