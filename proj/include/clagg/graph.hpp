#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "clagg/clustering.hpp"

namespace clagg {

// Measurement outcome / candidate solution: one bit per cluster vertex,
// bits[i] pairs with global cluster label i. Text form prints label 0 first,
// matching the convention that "111111100000" selects labels 0..6.
struct Bitstring {
  std::vector<std::uint8_t> bits;

  Bitstring() = default;
  explicit Bitstring(std::size_t n) : bits(n, 0) {}

  static Bitstring from_string(const std::string& s) {
    Bitstring b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1')
        throw std::invalid_argument("Bitstring: invalid character");
      b.bits[i] = (s[i] == '1');
    }
    return b;
  }

  // Basis-state index with vertex 0 as the most significant bit.
  static Bitstring from_index(std::uint64_t index, std::size_t n) {
    Bitstring b(n);
    for (std::size_t i = 0; i < n; ++i)
      b.bits[i] = (index >> (n - 1 - i)) & 1u;
    return b;
  }

  std::uint64_t to_index() const {
    std::uint64_t v = 0;
    for (std::uint8_t bit : bits) v = (v << 1) | bit;
    return v;
  }

  std::string to_string() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) s[i] = '1';
    return s;
  }

  std::size_t size() const { return bits.size(); }
  int count() const {
    return static_cast<int>(std::count(bits.begin(), bits.end(), 1));
  }
  auto operator<=>(const Bitstring&) const = default;
};

// Vertices are clusters, edges are nonempty member intersections, vertex
// weights are silhouette sums.
struct OverlapGraph {
  std::size_t n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted
  std::vector<double> weights;
  std::vector<int> global_labels;
  std::vector<std::vector<int>> members;

  bool has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
  }

  // Neighbor masks for n <= 64; handy for enumeration-style checks.
  std::vector<std::uint64_t> neighbor_masks() const {
    std::vector<std::uint64_t> masks(n, 0);
    for (auto [i, j] : edges) {
      masks[i] |= 1ULL << j;
      masks[j] |= 1ULL << i;
    }
    return masks;
  }
};

inline OverlapGraph build_overlap_graph(const ClusterSet& cs) {
  if (cs.clusters.empty())
    throw std::invalid_argument("build_overlap_graph: empty cluster set");
  OverlapGraph g;
  g.n = cs.clusters.size();
  g.weights.reserve(g.n);
  for (const ClusterInfo& c : cs.clusters) {
    g.weights.push_back(c.silhouette_sum);
    g.global_labels.push_back(c.global_label);
    g.members.push_back(c.members);
  }
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = i + 1; j < g.n; ++j) {
      const auto& a = g.members[i];
      const auto& b = g.members[j];
      // membership lists are ascending; linear merge-intersection test
      auto ia = a.begin();
      auto ib = b.begin();
      bool overlap = false;
      while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { overlap = true; break; }
      }
      if (overlap) g.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return g;
}

// Upper-triangular 0/1 adjacency with unit diagonal: A[i][i] = 1,
// A[i][j] = 1 iff edge (i,j) with i < j, zero below the diagonal.
inline std::vector<std::vector<int>> adjacency_matrix(const OverlapGraph& g) {
  std::vector<std::vector<int>> a(g.n, std::vector<int>(g.n, 0));
  for (std::size_t i = 0; i < g.n; ++i) a[i][i] = 1;
  for (auto [i, j] : g.edges) a[i][j] = 1;
  return a;
}

// Upper-triangular QUBO; diagonal stores the linear coefficients.
struct QuboMatrix {
  std::size_t n = 0;
  std::vector<double> q;  // row-major, only entries with i <= j used
  double penalty = 0.0;

  explicit QuboMatrix(std::size_t size = 0) : n(size), q(size * size, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return q[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return q[i * n + j]; }
};

// Minimize x^T Q x: diagonal -w_i (or -1 when unweighted, plain MIS) and
// +penalty on every edge. The default penalty 2*max|w|+1 makes any edge
// violation cost more than any single vertex can contribute.
inline QuboMatrix build_qubo(const OverlapGraph& g, bool use_weights,
                             std::optional<double> penalty = std::nullopt) {
  QuboMatrix q(g.n);
  double max_w = 1.0;
  if (use_weights) {
    max_w = 0.0;
    for (double w : g.weights) {
      if (!std::isfinite(w))
        throw std::invalid_argument("build_qubo: non-finite weight");
      max_w = std::max(max_w, std::abs(w));
    }
  }
  if (penalty) {
    if (!(*penalty > 0.0))
      throw std::invalid_argument("build_qubo: penalty must be > 0");
    q.penalty = *penalty;
  } else {
    q.penalty = 2.0 * max_w + 1.0;
  }
  for (std::size_t i = 0; i < g.n; ++i)
    q.at(i, i) = use_weights ? -g.weights[i] : -1.0;
  for (auto [i, j] : g.edges) q.at(i, j) = q.penalty;
  return q;
}

inline bool is_independent(const Bitstring& x, const OverlapGraph& g) {
  if (x.size() != g.n)
    throw std::invalid_argument("is_independent: length mismatch");
  for (auto [i, j] : g.edges)
    if (x.bits[i] && x.bits[j]) return false;
  return true;
}

inline double weight_of(const Bitstring& x, const OverlapGraph& g) {
  if (x.size() != g.n) throw std::invalid_argument("weight_of: length mismatch");
  double w = 0.0;
  for (std::size_t i = 0; i < g.n; ++i)
    if (x.bits[i]) w += g.weights[i];
  return w;
}

// A solver bitstring read back as a clustering.
struct DecodedClustering {
  std::vector<int> selected_labels;   // global labels with bit 1
  std::vector<int> point_labels;      // global label per point, kNoise if uncovered
  int uncovered = 0;
  std::vector<int> multiply_assigned; // points in >1 selected cluster
};

inline DecodedClustering decode(const Bitstring& x, const ClusterSet& cs) {
  if (x.size() != cs.clusters.size())
    throw std::invalid_argument("decode: bitstring/cluster-set length mismatch");
  DecodedClustering out;
  out.point_labels.assign(cs.n_points, kNoise);
  std::vector<int> hits(cs.n_points, 0);
  for (std::size_t v = 0; v < cs.clusters.size(); ++v) {
    if (!x.bits[v]) continue;
    const ClusterInfo& c = cs.clusters[v];
    out.selected_labels.push_back(c.global_label);
    for (int p : c.members) {
      ++hits[p];
      out.point_labels[p] = c.global_label;
    }
  }
  for (std::size_t p = 0; p < cs.n_points; ++p) {
    if (hits[p] == 0) ++out.uncovered;
    if (hits[p] > 1) out.multiply_assigned.push_back(static_cast<int>(p));
  }
  return out;
}

// Multiset of measured bitstrings; the common output of every backend.
struct SampleSet {
  std::map<Bitstring, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::string backend;
  std::int64_t timing_us = 0;

  void add(const Bitstring& b, std::uint64_t count = 1) {
    counts[b] += count;
    shots += count;
  }

  void merge(const SampleSet& other) {
    for (const auto& [b, c] : other.counts) add(b, c);
  }
};

inline std::map<int, double> cluster_count_histogram(const SampleSet& s) {
  if (s.shots == 0)
    throw std::invalid_argument("cluster_count_histogram: empty sample set");
  std::map<int, double> h;
  for (const auto& [b, c] : s.counts)
    h[b.count()] += static_cast<double>(c) / static_cast<double>(s.shots);
  return h;
}

// Most frequent bitstrings, ties broken lexicographically.
inline std::vector<std::pair<Bitstring, double>> top_k(const SampleSet& s,
                                                       std::size_t k) {
  if (s.shots == 0) throw std::invalid_argument("top_k: empty sample set");
  std::vector<std::pair<Bitstring, std::uint64_t>> items(s.counts.begin(),
                                                         s.counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::pair<Bitstring, double>> out;
  for (std::size_t i = 0; i < items.size() && i < k; ++i)
    out.emplace_back(items[i].first,
                     static_cast<double>(items[i].second) /
                         static_cast<double>(s.shots));
  return out;
}

// Classical post-selection: the heaviest independent sample. When nothing
// sampled is independent, empty_valid is set and the best that can be said
// is the most frequent sample.
struct BestSample {
  bool empty_valid = false;
  Bitstring best;
  Bitstring most_frequent;
  double weight = 0.0;
};

inline BestSample select_best(const SampleSet& s, const OverlapGraph& g) {
  if (s.shots == 0) throw std::invalid_argument("select_best: empty sample set");
  BestSample out;
  std::uint64_t best_count = 0;
  bool found = false;
  for (const auto& [b, c] : s.counts) {
    if (c > best_count) {
      best_count = c;
      out.most_frequent = b;
    }
    if (!is_independent(b, g)) continue;
    const double w = weight_of(b, g);
    if (!found || w > out.weight || (w == out.weight && b < out.best)) {
      found = true;
      out.best = b;
      out.weight = w;
    }
  }
  if (!found) {
    out.empty_valid = true;
    out.best = Bitstring(g.n);
    out.weight = 0.0;
  }
  return out;
}

// ---- exports -------------------------------------------------------------

inline void write_edge_list(const OverlapGraph& g,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_edge_list: cannot write " + path.string());
  for (auto [i, j] : g.edges) out << i << ' ' << j << '\n';
}

inline nlohmann::ordered_json graph_json(const OverlapGraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.n;
  j["weights"] = g.weights;
  j["global_labels"] = g.global_labels;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [a, b] : g.edges) edges.push_back({a, b});
  j["edges"] = edges;
  return j;
}

// COO text: one `i j value` per line, diagonal included.
inline void write_qubo_coo(const QuboMatrix& q,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_qubo_coo: cannot write " + path.string());
  char buf[96];
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t j = i; j < q.n; ++j)
      if (q.at(i, j) != 0.0) {
        std::snprintf(buf, sizeof(buf), "%zu %zu %.17g\n", i, j, q.at(i, j));
        out << buf;
      }
}

inline nlohmann::ordered_json sampleset_json(const SampleSet& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [b, c] : s.counts) j[b.to_string()] = c;
  return j;
}

inline SampleSet sampleset_from_json(const nlohmann::json& j,
                                     std::string backend = "") {
  SampleSet s;
  s.backend = std::move(backend);
  for (auto it = j.begin(); it != j.end(); ++it)
    s.add(Bitstring::from_string(it.key()), it.value().get<std::uint64_t>());
  return s;
}

}  // namespace clagg
