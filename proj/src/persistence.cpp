#include "niph/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "niph/error.hpp"

namespace niph {

namespace {

struct Edge {
  double length;
  std::uint32_t i;  // i < j
  std::uint32_t j;
};

bool edge_before(const Edge& a, const Edge& b) {
  if (a.length != b.length) return a.length < b.length;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

void require_points(std::size_t n) {
  if (n < 2) throw InvalidInput("persistence: at least 2 points required");
  if (n >= (std::size_t{1} << 21)) throw ResourceError("persistence: more than 2^21 points are not supported");
}

void sort_pairs(std::vector<PersistencePair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
}

PersistenceDiagram finish_h0(std::vector<PersistencePair> pairs) {
  PersistenceDiagram diagram;
  diagram.dim = 0;
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const PersistencePair& a, const PersistencePair& b) { return a.death < b.death; });
  diagram.pairs = std::move(pairs);
  PersistencePair essential;
  essential.dim = 0;
  diagram.pairs.push_back(essential);
  return diagram;
}

PersistencePair h0_pair(double length, std::size_t a, std::size_t b) {
  PersistencePair p;
  p.birth = 0.0;
  p.death = length;
  p.dim = 0;
  p.death_edge = std::array<std::size_t, 2>{std::min(a, b), std::max(a, b)};
  return p;
}

// Collects all edges of length <= r_max, enforcing the edge budget.
template <typename Dist>
std::vector<Edge> edges_within_all_pairs(std::size_t n, Dist&& dist, double r_max, std::size_t max_edges) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double d = dist(i, j);
      if (d <= r_max) {
        if (edges.size() >= max_edges) {
          std::ostringstream msg;
          msg << "persistence: more than max_edges = " << max_edges << " edges below r_max = " << r_max;
          throw ResourceError(msg.str());
        }
        edges.push_back({d, i, j});
      }
    }
  }
  return edges;
}

// Same as above for coordinates, sweeping along the first axis.
std::vector<Edge> edges_within_cloud(const PointCloud& cloud, double r_max, std::size_t max_edges) {
  const std::size_t n = cloud.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double xa = cloud[a][0];
    const double xb = cloud[b][0];
    return xa != xb ? xa < xb : a < b;
  });
  std::vector<Edge> edges;
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint32_t a = order[p];
    const double xa = cloud[a][0];
    for (std::size_t q = p + 1; q < n; ++q) {
      const std::uint32_t b = order[q];
      if (cloud[b][0] - xa > r_max) break;
      const double d = euclidean_distance(cloud[a], cloud[b]);
      if (d <= r_max) {
        if (edges.size() >= max_edges) {
          std::ostringstream msg;
          msg << "persistence: more than max_edges = " << max_edges << " edges below r_max = " << r_max;
          throw ResourceError(msg.str());
        }
        edges.push_back({d, std::min(a, b), std::max(a, b)});
      }
    }
  }
  return edges;
}

// A triangle in the filtration: diameter, then sorted vertex triple packed
// into 63 bits so integer order equals lexicographic order.
struct Triangle {
  double diameter;
  std::uint64_t key;

  bool operator<(const Triangle& o) const { return diameter != o.diameter ? diameter < o.diameter : key < o.key; }
  bool operator==(const Triangle& o) const { return key == o.key; }
};

std::uint64_t pack(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 42) | (std::uint64_t{b} << 21) | std::uint64_t{c};
}

std::array<std::uint32_t, 3> unpack(std::uint64_t key) {
  const std::uint64_t mask = (std::uint64_t{1} << 21) - 1;
  return {static_cast<std::uint32_t>(key >> 42), static_cast<std::uint32_t>((key >> 21) & mask),
          static_cast<std::uint32_t>(key & mask)};
}

// Z/2 sum of two sorted columns.
void add_column(std::vector<Triangle>& target, const std::vector<Triangle>& source, std::vector<Triangle>& scratch) {
  scratch.clear();
  scratch.reserve(target.size() + source.size());
  auto a = target.begin();
  auto b = source.begin();
  while (a != target.end() && b != source.end()) {
    if (*a < *b) {
      scratch.push_back(*a++);
    } else if (*b < *a) {
      scratch.push_back(*b++);
    } else {
      ++a;
      ++b;
    }
  }
  scratch.insert(scratch.end(), a, target.end());
  scratch.insert(scratch.end(), b, source.end());
  target.swap(scratch);
}

// Persistent cohomology in degree 1 on the capped flag complex given by
// `edges` (already within r_max). Returns H1 bars.
template <typename Dist>
PersistenceDiagram reduce_h1(std::size_t n, std::vector<Edge> edges, Dist&& dist, double r_max) {
  PersistenceDiagram diagram;
  diagram.dim = 1;
  diagram.r_max = r_max;
  if (edges.empty()) {
    diagram.no_edges_warning = true;
    return diagram;
  }
  std::sort(edges.begin(), edges.end(), edge_before);

  // Edges that merge components are paired in degree 0 and never carry a
  // degree-1 class; their columns are cleared.
  std::vector<bool> cleared(edges.size(), false);
  {
    UnionFind uf(n);
    for (std::size_t e = 0; e < edges.size(); ++e) cleared[e] = uf.unite(edges[e].i, edges[e].j);
  }

  // Neighbors sorted by vertex id, each with the filtration index of the edge.
  struct Neighbor {
    std::uint32_t vertex;
    std::uint32_t edge;
  };
  std::vector<std::vector<Neighbor>> adjacency(n);
  for (std::uint32_t e = 0; e < edges.size(); ++e) {
    adjacency[edges[e].i].push_back({edges[e].j, e});
    adjacency[edges[e].j].push_back({edges[e].i, e});
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  auto coboundary = [&](std::uint32_t e, std::vector<Triangle>& out) {
    out.clear();
    const auto& ni = adjacency[edges[e].i];
    const auto& nj = adjacency[edges[e].j];
    auto a = ni.begin();
    auto b = nj.begin();
    while (a != ni.end() && b != nj.end()) {
      if (a->vertex < b->vertex) {
        ++a;
      } else if (b->vertex < a->vertex) {
        ++b;
      } else {
        const double diam = std::max({edges[e].length, edges[a->edge].length, edges[b->edge].length});
        out.push_back({diam, pack(edges[e].i, edges[e].j, a->vertex)});
        ++a;
        ++b;
      }
    }
    std::sort(out.begin(), out.end());
  };

  std::unordered_map<std::uint64_t, std::uint32_t> pivot_owner;
  std::vector<std::vector<Triangle>> reduced;
  std::vector<Triangle> column;
  std::vector<Triangle> scratch;

  for (std::size_t idx = edges.size(); idx-- > 0;) {
    if (cleared[idx]) continue;
    const auto e = static_cast<std::uint32_t>(idx);
    coboundary(e, column);
    while (!column.empty()) {
      const auto it = pivot_owner.find(column.front().key);
      if (it == pivot_owner.end()) break;
      add_column(column, reduced[it->second], scratch);
    }
    const double birth = edges[e].length;
    if (column.empty()) {
      PersistencePair p;
      p.birth = birth;
      p.death = kInfinity;
      p.dim = 1;
      p.truncated = true;
      diagram.pairs.push_back(p);
      continue;
    }
    const Triangle pivot = column.front();
    if (pivot.diameter > birth) {
      // Longest edge of the death triangle, ties broken by filtration order.
      const auto v = unpack(pivot.key);
      Edge best{-1.0, 0, 0};
      for (auto [x, y] : {std::pair{v[0], v[1]}, std::pair{v[0], v[2]}, std::pair{v[1], v[2]}}) {
        const Edge cand{dist(x, y), x, y};
        if (best.length < 0.0 || edge_before(best, cand)) best = cand;
      }
      PersistencePair p;
      p.birth = birth;
      p.death = pivot.diameter;
      p.dim = 1;
      p.death_edge = std::array<std::size_t, 2>{best.i, best.j};
      diagram.pairs.push_back(p);
    }
    pivot_owner.emplace(pivot.key, static_cast<std::uint32_t>(reduced.size()));
    reduced.push_back(std::move(column));
    column = {};
  }
  sort_pairs(diagram.pairs);
  return diagram;
}

void check_r_max(double r_max) {
  if (!(r_max > 0.0)) throw InvalidInput("persistence: r_max must be > 0");
}

}  // namespace

std::size_t PersistenceDiagram::finite_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const PersistencePair& p) { return p.finite(); }));
}

std::size_t PersistenceDiagram::truncated_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const PersistencePair& p) { return p.truncated; }));
}

std::string_view to_string(Weighting w) {
  switch (w) {
    case Weighting::unit: return "unit";
    case Weighting::persistence_diff: return "persistence-diff";
    case Weighting::persistence_ratio: return "persistence-ratio";
  }
  return "unit";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "unit") return Weighting::unit;
  if (name == "persistence-diff" || name == "diff") return Weighting::persistence_diff;
  if (name == "persistence-ratio" || name == "ratio") return Weighting::persistence_ratio;
  throw InvalidInput("unknown weighting '" + std::string(name) +
                     "' (expected unit, persistence-diff or persistence-ratio)");
}

double WeightedDeaths::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

void WeightedDeaths::validate() const {
  if (deaths.empty()) throw InvalidInput("death distribution: empty");
  if (weights.size() != deaths.size()) throw InvalidInput("death distribution: length mismatch");
  for (std::size_t i = 0; i < deaths.size(); ++i) {
    if (!std::isfinite(deaths[i]) || !(deaths[i] > 0.0)) {
      throw InvalidInput("death distribution: death times must be finite and > 0");
    }
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw InvalidInput("death distribution: weights must be finite and >= 0");
    }
  }
  if (!(total_weight() > 0.0)) throw InvalidInput("death distribution: total weight must be > 0");
}

PersistenceDiagram vr_persistence_0(const DissimilarityMatrix& d) {
  const std::size_t n = d.size();
  require_points(n);
  auto edges = edges_within_all_pairs(
      n, [&](std::uint32_t i, std::uint32_t j) { return d(i, j); }, kInfinity,
      std::numeric_limits<std::size_t>::max());
  std::sort(edges.begin(), edges.end(), edge_before);
  UnionFind uf(n);
  std::vector<PersistencePair> pairs;
  pairs.reserve(n - 1);
  for (const auto& e : edges) {
    if (uf.unite(e.i, e.j) && e.length > 0.0) pairs.push_back(h0_pair(e.length, e.i, e.j));
  }
  return finish_h0(std::move(pairs));
}

PersistenceDiagram vr_persistence_0(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  require_points(n);
  std::vector<double> key(n, kInfinity);
  std::vector<std::size_t> parent(n, 0);
  std::vector<bool> in_tree(n, false);
  std::vector<PersistencePair> pairs;
  pairs.reserve(n - 1);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const auto pc = cloud[current];
    std::size_t best = n;
    double best_key = kInfinity;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double d = euclidean_distance(pc, cloud[v]);
      if (d < key[v]) {
        key[v] = d;
        parent[v] = current;
      }
      if (key[v] < best_key || best == n) {
        best_key = key[v];
        best = v;
      }
    }
    in_tree[best] = true;
    if (best_key > 0.0) pairs.push_back(h0_pair(best_key, parent[best], best));
    current = best;
  }
  return finish_h0(std::move(pairs));
}

PersistenceDiagram vr_persistence_0(const PointCloud& cloud, const Probe& probe) {
  return vr_persistence_0(scale_points(cloud, probe));
}

PersistenceDiagram vr_persistence_1(const DissimilarityMatrix& d, double r_max, const PersistenceBudget& budget) {
  check_r_max(r_max);
  const std::size_t n = d.size();
  require_points(n);
  auto dist = [&](std::uint32_t i, std::uint32_t j) { return d(i, j); };
  auto edges = edges_within_all_pairs(n, dist, r_max, budget.max_edges);
  return reduce_h1(n, std::move(edges), dist, r_max);
}

PersistenceDiagram vr_persistence_1(const PointCloud& cloud, double r_max, const PersistenceBudget& budget) {
  check_r_max(r_max);
  const std::size_t n = cloud.size();
  require_points(n);
  auto edges = edges_within_cloud(cloud, r_max, budget.max_edges);
  auto dist = [&](std::uint32_t i, std::uint32_t j) { return euclidean_distance(cloud[i], cloud[j]); };
  return reduce_h1(n, std::move(edges), dist, r_max);
}

PersistenceDiagram vr_persistence_1(const PointCloud& cloud, const Probe& probe, double r_max,
                                    const PersistenceBudget& budget) {
  return vr_persistence_1(scale_points(cloud, probe), r_max, budget);
}

PersistenceDiagram vr_persistence(const PointCloud& cloud, int dim, double r_max, const PersistenceBudget& budget) {
  switch (dim) {
    case 0: return vr_persistence_0(cloud);
    case 1: return vr_persistence_1(cloud, r_max, budget);
    default: throw InvalidInput("persistence: only homology dimensions 0 and 1 are supported");
  }
}

double pair_weight(const PersistencePair& pair, Weighting weighting) {
  switch (weighting) {
    case Weighting::unit: return 1.0;
    case Weighting::persistence_diff: return pair.death - pair.birth;
    case Weighting::persistence_ratio:
      if (!(pair.birth > 0.0)) {
        throw InvalidInput("death distribution: persistence-ratio weighting needs birth > 0 (not usable in dimension 0)");
      }
      return pair.death / pair.birth;
  }
  return 1.0;
}

WeightedDeaths death_distribution(const PersistenceDiagram& diagram, Weighting weighting) {
  if (weighting == Weighting::persistence_ratio && diagram.dim == 0) {
    throw InvalidInput("death distribution: persistence-ratio weighting is invalid for dimension 0 (births are 0)");
  }
  WeightedDeaths out;
  for (std::size_t k = 0; k < diagram.pairs.size(); ++k) {
    const auto& p = diagram.pairs[k];
    if (!p.finite()) continue;
    out.deaths.push_back(p.death);
    out.weights.push_back(pair_weight(p, weighting));
    out.pair_refs.push_back(k);
  }
  if (out.deaths.empty()) throw InvalidInput("death distribution: diagram has no finite pairs");
  return out;
}

AngularSample death_edge_orientations(const PersistenceDiagram& diagram, const PointCloud& cloud,
                                      Weighting weighting) {
  if (cloud.dim() != 2) throw InvalidInput("death edge orientations: cloud must be 2D");
  AngularSample sample;
  for (const auto& p : diagram.pairs) {
    if (!p.finite()) continue;
    if (!p.death_edge) throw InvalidInput("death edge orientations: finite pair without death edge");
    const auto [a, b] = *p.death_edge;
    if (a >= cloud.size() || b >= cloud.size()) {
      throw InvalidInput("death edge orientations: death edge index outside the cloud");
    }
    const double dx = cloud.x(b) - cloud.x(a);
    const double dy = cloud.y(b) - cloud.y(a);
    sample.angles.push_back(canonical_angle(std::atan2(dy, dx)));
    sample.weights.push_back(pair_weight(p, weighting));
  }
  return sample;
}

CircularSummary axial_summary(const AngularSample& sample) {
  double c = 0.0;
  double s = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < sample.angles.size(); ++k) {
    c += sample.weights[k] * std::cos(2.0 * sample.angles[k]);
    s += sample.weights[k] * std::sin(2.0 * sample.angles[k]);
    total += sample.weights[k];
  }
  if (!(total > 0.0)) throw InvalidInput("axial summary: empty sample");
  CircularSummary out;
  out.mean = canonical_angle(0.5 * std::atan2(s, c));
  out.variance = 1.0 - std::hypot(c, s) / total;
  return out;
}

std::vector<double> axial_histogram(const AngularSample& sample, int bins) {
  if (bins < 1) throw InvalidInput("axial histogram: bins must be >= 1");
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t k = 0; k < sample.angles.size(); ++k) {
    auto b = static_cast<std::size_t>(sample.angles[k] / std::numbers::pi * bins);
    hist[std::min(b, hist.size() - 1)] += sample.weights[k];
  }
  return hist;
}

}  // namespace niph
