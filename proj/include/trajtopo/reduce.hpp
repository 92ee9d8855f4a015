#pragma once
// Deterministic linear reduction of post embeddings to 3D.
//
// The reducer is fit once on the pooled embeddings of a whole corpus so
// every user lives in the same projected space.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "trajtopo/ingest.hpp"
#include "trajtopo/types.hpp"

namespace trajtopo {

enum class ReducerMode { kPca3, kPassthrough };

ReducerMode parse_reducer_mode(std::string_view name);
std::string_view to_string(ReducerMode mode);

struct ReducerModel {
  std::vector<double> mean;
  std::array<std::vector<double>, 3> components;  // orthonormal rows
  std::array<double, 3> explained_variance_ratio{};
  // Fewer than three non-zero principal directions; trailing components
  // are arbitrary orthonormal completions.
  bool rank_deficient = false;

  std::size_t dim() const { return mean.size(); }
};

/// Top-3 principal components of mean-centred data. Each component is signed
/// so that its largest-magnitude coordinate is positive. Requires D >= 3 and
/// at least 4 distinct embeddings.
ReducerModel fit_reducer(std::span<const std::vector<double>> embeddings);

/// Pools every post embedding of a corpus and fits a reducer.
ReducerModel fit_reducer(const std::vector<Trajectory>& corpus);

Point3 project(const ReducerModel& model, std::span<const double> embedding);

ReducedTrajectory transform(const ReducerModel& model, const Trajectory& trajectory);

/// Uses embeddings that are already 3D (e.g. produced by an external reducer).
ReducedTrajectory passthrough(const Trajectory& trajectory);

/// Flat text format:
///   trajtopo-reducer 1
///   dim <D>
///   rank_deficient <0|1>
///   ratios <r1> <r2> <r3>
///   mean <D values>
///   component <D values>     (three lines)
void write_reducer(std::ostream& out, const ReducerModel& model);
ReducerModel read_reducer(std::istream& in);

}  // namespace trajtopo
