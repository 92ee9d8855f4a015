#pragma once
// Proxy improvement labels from post text and posting behaviour, and
// agreement between label sources.

#include <iosfwd>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajtopo/ingest.hpp"

namespace trajtopo {

enum class Label { kImproved, kNotImproved, kUnclear };
enum class LabelSource { kPattern, kBehaviorFrequency, kBehaviorResponse, kSyntheticTruth };

std::string_view to_string(Label label);
std::string_view to_string(LabelSource source);
Label parse_label(std::string_view name);
LabelSource parse_label_source(std::string_view name);

/// Case-insensitive improvement phrases, matched anywhere in a post.
class PatternSet {
 public:
  explicit PatternSet(std::vector<std::string> patterns);

  /// The three canonical phrases with tense/contraction variants.
  static PatternSet defaults();
  /// One pattern per line; blank lines and lines starting with `#` skipped.
  static PatternSet parse(std::istream& in);

  bool matches(std::string_view text) const;
  const std::vector<std::string>& patterns() const { return sources_; }

 private:
  std::vector<std::string> sources_;
  std::vector<std::regex> compiled_;
};

struct LabelRecord {
  std::string user_id;
  Label label = Label::kUnclear;
  LabelSource source = LabelSource::kPattern;

  bool operator==(const LabelRecord&) const = default;
};

inline constexpr double kDefaultBehaviorTheta = 0.25;

/// Slice size used for the first/final fraction of posts: ceil(0.2 n).
std::size_t edge_slice_size(std::size_t n);

/// Improved iff a pattern matches a post in the final slice and none matches
/// in the first slice. Missing text in either slice gives unclear.
LabelRecord pattern_label(const Trajectory& trajectory, const PatternSet& patterns);

/// Improved iff the posting rate after the temporal midpoint is at most
/// (1 - theta) times the rate before it. Needs a span of at least 2 days.
LabelRecord frequency_label(const Trajectory& trajectory, double theta = kDefaultBehaviorTheta);

/// Improved iff mean comments per post after the temporal midpoint is
/// positive and at least (1 + theta) times the mean before it. Unclear when
/// fewer than 80% of posts carry a comment count.
LabelRecord response_label(const Trajectory& trajectory, double theta = kDefaultBehaviorTheta);

struct Kappa {
  double value = 0.0;
  bool degenerate = false;  // expected agreement was 1
};

/// Cohen's kappa between two label sequences of equal length.
Kappa cohens_kappa(std::span<const Label> a, std::span<const Label> b);

/// Label table: header `user_id,source,label`, one row per (user, source).
/// A non-empty comment is written as a leading `#` line; readers skip those.
void write_label_table(std::ostream& out, const std::vector<LabelRecord>& rows,
                       const std::string& comment = "");
std::vector<LabelRecord> read_label_table(std::istream& in);

}  // namespace trajtopo
