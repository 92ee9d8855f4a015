#include "trajtopo/homology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "trajtopo/io.hpp"

namespace trajtopo {

DistanceMatrix distance_matrix(std::span<const Point3> points) {
  for (const auto& p : points)
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2]))
      throw Error("distance_matrix: non-finite coordinate");
  DistanceMatrix dm(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) dm.set(i, j, distance(points[i], points[j]));
  return dm;
}

double enclosing_radius(const DistanceMatrix& dm) {
  double best = kInfinity;
  for (std::size_t i = 0; i < dm.size(); ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < dm.size(); ++j) row_max = std::max(row_max, dm(i, j));
    best = std::min(best, row_max);
  }
  return dm.size() == 0 ? 0.0 : best;
}

namespace {

constexpr std::size_t kMaxVertices = 65535;

std::uint64_t simplex_key(std::span<const std::uint32_t> verts) {
  std::uint64_t key = 0;
  for (std::size_t k = 0; k < verts.size(); ++k)
    key |= static_cast<std::uint64_t>(verts[k] + 1) << (16 * k);
  return key;
}

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.size != b.size) return a.size < b.size;
  return std::lexicographical_compare(a.vertices.begin(), a.vertices.begin() + a.size,
                                      b.vertices.begin(), b.vertices.begin() + b.size);
}

}  // namespace

Filtration vietoris_rips(const DistanceMatrix& dm, int max_homology_dim, double max_eps) {
  if (max_homology_dim < 0 || max_homology_dim > 2)
    throw Error("max homology dimension must be 0, 1 or 2");
  if (std::isnan(max_eps) || max_eps < 0.0) throw Error("max_eps must be non-negative");
  const std::size_t n = dm.size();
  if (n > kMaxVertices) throw Error("too many points for a Rips filtration");

  Filtration f;
  f.n_vertices = n;
  f.max_homology_dim = max_homology_dim;
  const int max_simplex_size = max_homology_dim + 2;

  for (std::uint32_t i = 0; i < n; ++i) f.simplices.push_back({{i, 0, 0, 0}, 1, 0.0});

  std::vector<std::vector<std::uint32_t>> upper(n);  // neighbours j > i
  std::vector<char> adjacent(n * n, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (dm(i, j) <= max_eps) {
        upper[i].push_back(j);
        adjacent[i * n + j] = adjacent[j * n + i] = 1;
      }

  if (max_simplex_size >= 2) {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j : upper[i]) {
        const double dij = dm(i, j);
        f.simplices.push_back({{i, j, 0, 0}, 2, dij});
        if (max_simplex_size < 3) continue;
        for (std::uint32_t k : upper[j]) {
          if (!adjacent[i * n + k]) continue;
          const double dijk = std::max({dij, dm(i, k), dm(j, k)});
          f.simplices.push_back({{i, j, k, 0}, 3, dijk});
          if (max_simplex_size < 4) continue;
          for (std::uint32_t l : upper[k]) {
            if (!adjacent[i * n + l] || !adjacent[j * n + l]) continue;
            const double dijkl = std::max({dijk, dm(i, l), dm(j, l), dm(k, l)});
            f.simplices.push_back({{i, j, k, l}, 4, dijkl});
          }
        }
      }
    }
  }
  std::sort(f.simplices.begin(), f.simplices.end(), filtration_less);
  return f;
}

std::vector<Interval> PersistenceDiagram::of_dim(int dim) const {
  std::vector<Interval> out;
  for (const auto& iv : intervals)
    if (iv.dim == dim) out.push_back(iv);
  return out;
}

void PersistenceDiagram::canonicalize() {
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
}

namespace {

using Column = std::vector<std::uint32_t>;  // ascending row indices

std::vector<Column> boundary_columns(const Filtration& f) {
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  index.reserve(f.simplices.size() * 2);
  for (std::uint32_t i = 0; i < f.simplices.size(); ++i)
    index.emplace(simplex_key(f.simplices[i].verts()), i);

  std::vector<Column> cols(f.simplices.size());
  for (std::size_t j = 0; j < f.simplices.size(); ++j) {
    const Simplex& s = f.simplices[j];
    if (s.size < 2) continue;
    std::array<std::uint32_t, 3> face{};
    for (std::size_t drop = 0; drop < s.size; ++drop) {
      std::size_t w = 0;
      for (std::size_t k = 0; k < s.size; ++k)
        if (k != drop) face[w++] = s.vertices[k];
      auto it = index.find(simplex_key({face.data(), w}));
      if (it == index.end()) throw Error("filtration is not closed under faces");
      if (it->second >= j) throw Error("face appears after its coface in the filtration");
      cols[j].push_back(it->second);
    }
    std::sort(cols[j].begin(), cols[j].end());
  }
  return cols;
}

void add_into(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

PersistenceDiagram persistence(const Filtration& filtration, Reduction reduction) {
  const auto& simplices = filtration.simplices;
  const std::size_t n = simplices.size();
  std::vector<Column> cols = boundary_columns(filtration);
  std::vector<std::int64_t> pivot_owner(n, -1);  // row -> column whose low it is
  std::vector<char> cleared(n, 0);
  Column scratch;

  auto reduce_column = [&](std::size_t j) {
    Column& col = cols[j];
    while (!col.empty()) {
      const std::int64_t owner = pivot_owner[col.back()];
      if (owner < 0) break;
      add_into(col, cols[static_cast<std::size_t>(owner)], scratch);
    }
    if (!col.empty()) {
      pivot_owner[col.back()] = static_cast<std::int64_t>(j);
      cleared[col.back()] = 1;
    }
  };

  if (reduction == Reduction::kTwist) {
    const int top = filtration.max_homology_dim + 1;
    for (int d = top; d >= 1; --d)
      for (std::size_t j = 0; j < n; ++j) {
        if (simplices[j].dim() != d) continue;
        if (cleared[j]) {
          cols[j].clear();
          continue;
        }
        reduce_column(j);
      }
  } else {
    for (std::size_t j = 0; j < n; ++j) reduce_column(j);
  }

  PersistenceDiagram diagram;
  for (std::size_t i = 0; i < n; ++i) {
    const int dim = simplices[i].dim();
    if (dim > filtration.max_homology_dim) continue;
    if (pivot_owner[i] >= 0) {
      const double birth = simplices[i].value;
      const double death = simplices[static_cast<std::size_t>(pivot_owner[i])].value;
      if (death > birth) diagram.intervals.push_back({birth, death, dim});
    } else if (cols[i].empty()) {
      diagram.intervals.push_back({simplices[i].value, kInfinity, dim});
    }
  }
  diagram.canonicalize();
  return diagram;
}

namespace {

class BitVec {
 public:
  explicit BitVec(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void flip(const BitVec& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
  }
  // Index of the highest set bit, or -1 when zero.
  long lead() const {
    for (std::size_t w = words_.size(); w-- > 0;)
      if (words_[w]) return static_cast<long>(w * 64 + 63 - __builtin_clzll(words_[w]));
    return -1;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Incremental GF(2) row-echelon basis.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t bits) : by_lead_(bits) {}
  // Returns true if `v` was independent of the current span.
  bool insert(BitVec v) {
    for (long l = v.lead(); l >= 0; l = v.lead()) {
      auto& slot = by_lead_[static_cast<std::size_t>(l)];
      if (!slot) {
        slot = std::move(v);
        ++rank_;
        return true;
      }
      v.flip(*slot);
    }
    return false;
  }
  std::size_t rank() const { return rank_; }

 private:
  std::vector<std::optional<BitVec>> by_lead_;
  std::size_t rank_ = 0;
};

}  // namespace

PersistenceDiagram persistence_bruteforce(const Filtration& filtration) {
  if (filtration.n_vertices > kBruteforceMaxPoints)
    throw Error("brute-force persistence is limited to " + std::to_string(kBruteforceMaxPoints) +
                " points");
  const auto& simplices = filtration.simplices;

  // Simplices of each dimension, with their position inside that dimension.
  std::vector<std::vector<std::size_t>> by_dim(5);
  std::vector<std::size_t> local(simplices.size());
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    auto& bucket = by_dim[static_cast<std::size_t>(simplices[i].dim())];
    local[i] = bucket.size();
    bucket.push_back(i);
    index.emplace(simplex_key(simplices[i].verts()), i);
  }

  auto boundary = [&](std::size_t s) {
    const Simplex& sx = simplices[s];
    BitVec v(by_dim[static_cast<std::size_t>(sx.dim() - 1)].size());
    for (std::size_t drop = 0; drop < sx.size; ++drop) {
      std::array<std::uint32_t, 3> face{};
      std::size_t w = 0;
      for (std::size_t k = 0; k < sx.size; ++k)
        if (k != drop) face[w++] = sx.vertices[k];
      v.set(local[index.at(simplex_key({face.data(), w}))]);
    }
    return v;
  };

  std::vector<double> values;
  for (const auto& s : simplices) values.push_back(s.value);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t m = values.size();

  PersistenceDiagram diagram;
  for (int p = 0; p <= filtration.max_homology_dim; ++p) {
    const auto& cells = by_dim[static_cast<std::size_t>(p)];
    const auto& cofaces = by_dim[static_cast<std::size_t>(p + 1)];
    const std::size_t width = cells.size();
    if (width == 0) continue;

    // Cycle basis of the sublevel complex at each critical value.
    std::vector<std::vector<BitVec>> cycles(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (p == 0) {
        for (std::size_t c : cells)
          if (simplices[c].value <= values[i]) {
            BitVec unit(width);
            unit.set(local[c]);
            cycles[i].push_back(unit);
          }
        continue;
      }
      // Kernel of the boundary map via elimination with a tracking vector.
      const std::size_t face_width = by_dim[static_cast<std::size_t>(p - 1)].size();
      std::vector<std::optional<std::pair<BitVec, BitVec>>> pivots(face_width);
      for (std::size_t c : cells) {
        if (simplices[c].value > values[i]) continue;
        BitVec col = boundary(c);
        BitVec track(width);
        track.set(local[c]);
        for (long l = col.lead(); l >= 0; l = col.lead()) {
          auto& slot = pivots[static_cast<std::size_t>(l)];
          if (!slot) break;
          col.flip(slot->first);
          track.flip(slot->second);
        }
        const long l = col.lead();
        if (l < 0)
          cycles[i].push_back(track);
        else
          pivots[static_cast<std::size_t>(l)] = std::make_pair(col, track);
      }
    }

    auto boundaries_upto = [&](std::size_t j) {
      std::vector<BitVec> out;
      for (std::size_t c : cofaces)
        if (simplices[c].value <= values[j]) out.push_back(boundary(c));
      return out;
    };

    // beta[i][j] = rank of H_p(K_i) -> H_p(K_j), 1-based with beta[0][*] = 0.
    std::vector<std::vector<long>> beta(m + 1, std::vector<long>(m + 1, 0));
    for (std::size_t j = 0; j < m; ++j) {
      const auto bounds = boundaries_upto(j);
      EchelonBasis b_only(width);
      for (const auto& v : bounds) b_only.insert(v);
      for (std::size_t i = 0; i <= j; ++i) {
        EchelonBasis combined(width);
        for (const auto& v : bounds) combined.insert(v);
        for (const auto& z : cycles[i]) combined.insert(z);
        beta[i + 1][j + 1] = static_cast<long>(combined.rank()) - static_cast<long>(b_only.rank());
      }
    }

    for (std::size_t i = 1; i <= m; ++i) {
      for (std::size_t j = i + 1; j <= m; ++j) {
        const long mu = beta[i][j - 1] - beta[i][j] - beta[i - 1][j - 1] + beta[i - 1][j];
        if (mu < 0) throw Error("brute-force persistence: negative multiplicity");
        for (long c = 0; c < mu; ++c) diagram.intervals.push_back({values[i - 1], values[j - 1], p});
      }
      const long essential = beta[i][m] - beta[i - 1][m];
      if (essential < 0) throw Error("brute-force persistence: negative multiplicity");
      for (long c = 0; c < essential; ++c) diagram.intervals.push_back({values[i - 1], kInfinity, p});
    }
  }
  diagram.canonicalize();
  return diagram;
}

PersistenceDiagram compute_diagram(std::span<const Point3> points, const HomologyConfig& config) {
  if (points.empty()) throw Error("cannot compute homology of an empty point cloud");
  const DistanceMatrix dm = distance_matrix(points);
  const double eps = config.max_eps.value_or(enclosing_radius(dm));
  return persistence(vietoris_rips(dm, config.max_dim, eps));
}

BettiCurve betti_curve(const PersistenceDiagram& diagram, int dim, std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw Error("Betti grid must be ascending");
  BettiCurve curve;
  curve.dim = dim;
  curve.grid.assign(grid.begin(), grid.end());
  curve.counts.assign(grid.size(), 0);
  for (const auto& iv : diagram.intervals) {
    if (iv.dim != dim) continue;
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (iv.birth <= grid[j] && grid[j] < iv.death) ++curve.counts[j];
  }
  return curve;
}

std::vector<double> default_grid(const PersistenceDiagram& diagram, std::size_t steps) {
  if (steps < 2) throw Error("Betti grid needs at least 2 steps");
  double top = 0.0;
  for (const auto& iv : diagram.intervals) {
    top = std::max(top, iv.birth);
    if (std::isfinite(iv.death)) top = std::max(top, iv.death);
  }
  if (top <= 0.0) top = 1.0;
  top *= 1.05;
  std::vector<double> grid(steps);
  for (std::size_t j = 0; j < steps; ++j)
    grid[j] = top * static_cast<double>(j) / static_cast<double>(steps - 1);
  return grid;
}

std::vector<std::size_t> window_starts(std::size_t length, std::size_t window, std::size_t stride) {
  if (window < 4) throw Error("window must be at least 4 points");
  if (stride < 1) throw Error("stride must be at least 1");
  if (length < window)
    throw Error("trajectory of " + std::to_string(length) + " points is shorter than window " +
                std::to_string(window));
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + window <= length; s += stride) starts.push_back(s);
  if (starts.back() + window < length) starts.push_back(length - window);
  return starts;
}

std::vector<WindowDiagram> sliding_window_diagrams(const ReducedTrajectory& reduced,
                                                   std::size_t window, std::size_t stride,
                                                   const HomologyConfig& config) {
  std::vector<WindowDiagram> out;
  for (std::size_t s : window_starts(reduced.points.size(), window, stride)) {
    std::span<const Point3> slice(reduced.points.data() + s, window);
    out.push_back({s, compute_diagram(slice, config)});
  }
  return out;
}

void write_diagram(std::ostream& out, const PersistenceDiagram& diagram) {
  for (const auto& iv : diagram.intervals)
    out << iv.dim << ' ' << format_real(iv.birth) << ' ' << format_real(iv.death) << '\n';
}

PersistenceDiagram read_diagram(std::istream& in) {
  PersistenceDiagram d;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 3) throw Error("diagram line " + std::to_string(line_no) + ": expected 3 fields");
    Interval iv;
    iv.dim = static_cast<int>(parse_real(tok[0]));
    iv.birth = parse_real(tok[1]);
    iv.death = parse_real(tok[2]);
    if (iv.dim < 0 || iv.dim > 2 || iv.death < iv.birth)
      throw Error("diagram line " + std::to_string(line_no) + ": invalid interval");
    d.intervals.push_back(iv);
  }
  return d;
}

void write_betti_curve(std::ostream& out, const BettiCurve& curve) {
  out << "# betti dim " << curve.dim << '\n';
  for (std::size_t j = 0; j < curve.grid.size(); ++j)
    out << format_real(curve.grid[j]) << ' ' << curve.counts[j] << '\n';
}

BettiCurve read_betti_curve(std::istream& in) {
  BettiCurve c;
  std::string line;
  while (std::getline(in, line)) {
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0][0] == '#') {
      if (tok.size() == 4 && tok[1] == "betti" && tok[2] == "dim")
        c.dim = static_cast<int>(parse_real(tok[3]));
      continue;
    }
    if (tok.size() != 2) throw Error("Betti curve rows must have 2 fields");
    c.grid.push_back(parse_real(tok[0]));
    c.counts.push_back(static_cast<std::size_t>(parse_real(tok[1])));
  }
  return c;
}

std::vector<Point3> read_points(std::istream& in) {
  std::vector<Point3> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 3) throw Error("points line " + std::to_string(line_no) + ": expected x y z");
    Point3 p{parse_real(tok[0]), parse_real(tok[1]), parse_real(tok[2])};
    for (double c : p)
      if (!std::isfinite(c)) throw Error("points line " + std::to_string(line_no) + ": non-finite");
    pts.push_back(p);
  }
  return pts;
}

}  // namespace trajtopo
