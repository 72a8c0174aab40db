#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "clagg/dataset.hpp"
#include "clagg/jacobi.hpp"
#include "clagg/rng.hpp"

namespace clagg {

inline constexpr int kNoise = -1;

// One partition of a dataset. labels[i] is the cluster id of point i
// (contiguous 0..k-1) or kNoise.
struct Clustering {
  std::vector<int> labels;
  std::string algorithm;
  std::map<std::string, std::string> params;

  int num_clusters() const {
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    return k;
  }
};

namespace detail {

// Remap cluster ids so that ids appear in order of first occurrence.
// Keeps seeded runs stable under internal centroid reordering.
inline void relabel_first_occurrence(std::vector<int>& labels) {
  std::map<int, int> remap;
  int next = 0;
  for (int& l : labels) {
    if (l == kNoise) continue;
    auto [it, inserted] = remap.emplace(l, next);
    if (inserted) ++next;
    l = it->second;
  }
}

struct KmeansNd {
  std::vector<int> labels;
  std::vector<double> inertia_trace;
};

// Lloyd's algorithm with k-means++ seeding on n rows of dimension d.
// Nearest-centroid ties break toward the lowest centroid index; an emptied
// centroid is reseeded at the point farthest from its assigned centroid.
inline KmeansNd kmeans_nd(const std::vector<double>& rows, std::size_t n,
                          std::size_t d, int k, std::uint64_t seed,
                          int max_iter, double tol) {
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kmeans: k out of range");
  Xoshiro256pp rng(seed);
  const auto row = [&](std::size_t i) { return rows.data() + i * d; };
  const auto dist2 = [&](const double* a, const double* b) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double t = a[j] - b[j];
      s += t * t;
    }
    return s;
  };

  // k-means++ seeding
  std::vector<double> centroids(static_cast<std::size_t>(k) * d);
  std::vector<double> best_d2(n, std::numeric_limits<double>::infinity());
  {
    const std::size_t first = rng.below(n);
    std::copy_n(row(first), d, centroids.begin());
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        best_d2[i] = std::min(best_d2[i], dist2(row(i), centroids.data() + (c - 1) * d));
        total += best_d2[i];
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          acc += best_d2[i];
          if (acc > target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<std::size_t>(c) % n;  // all points coincide
      }
      std::copy_n(row(pick), d, centroids.begin() + static_cast<std::size_t>(c) * d);
    }
  }

  KmeansNd out;
  out.labels.assign(n, 0);
  std::vector<double> sums(static_cast<std::size_t>(k) * d);
  std::vector<std::size_t> counts(k);
  for (int iter = 0; iter < max_iter; ++iter) {
    // assignment
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double d2 = dist2(row(i), centroids.data() + static_cast<std::size_t>(c) * d);
        if (d2 < best) {
          best = d2;
          arg = c;
        }
      }
      out.labels[i] = arg;
      inertia += best;
    }
    if (!out.inertia_trace.empty() &&
        inertia > out.inertia_trace.back() * (1.0 + 1e-9) + 1e-12)
      throw std::logic_error("kmeans: inertia increased");
    out.inertia_trace.push_back(inertia);

    // update
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const int c = out.labels[i];
      ++counts[c];
      const double* r = row(i);
      double* s = sums.data() + static_cast<std::size_t>(c) * d;
      for (std::size_t j = 0; j < d; ++j) s[j] += r[j];
    }
    double shift2 = 0.0;
    for (int c = 0; c < k; ++c) {
      double* ctr = centroids.data() + static_cast<std::size_t>(c) * d;
      if (counts[c] == 0) {
        // farthest point from its centroid, lowest index on ties
        std::size_t far = 0;
        double far_d2 = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d2 = dist2(row(i), centroids.data() +
                                  static_cast<std::size_t>(out.labels[i]) * d);
          if (d2 > far_d2) {
            far_d2 = d2;
            far = i;
          }
        }
        std::copy_n(row(far), d, ctr);
        shift2 = std::numeric_limits<double>::infinity();
        continue;
      }
      double moved = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double nc = sums[static_cast<std::size_t>(c) * d + j] /
                          static_cast<double>(counts[c]);
        const double t = nc - ctr[j];
        moved += t * t;
        ctr[j] = nc;
      }
      shift2 = std::max(shift2, moved);
    }
    if (shift2 < tol * tol) break;
  }
  relabel_first_occurrence(out.labels);
  return out;
}

}  // namespace detail

inline Clustering kmeans(const Dataset& data, int k, std::uint64_t seed,
                         int max_iter = 100, double tol = 1e-6) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("kmeans: empty dataset");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kmeans: k out of range");
  std::vector<double> rows(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    rows[2 * i] = data[i].x;
    rows[2 * i + 1] = data[i].y;
  }
  auto res = detail::kmeans_nd(rows, n, 2, k, seed, max_iter, tol);
  Clustering out;
  out.labels = std::move(res.labels);
  out.algorithm = "kmeans";
  out.params = {{"k", std::to_string(k)},
                {"seed", std::to_string(seed)},
                {"max_iter", std::to_string(max_iter)},
                {"tol", std::to_string(tol)}};
  return out;
}

// Density clustering. A point is core when its eps-ball (itself included)
// holds at least min_samples points; border points join the first core
// cluster that reaches them, scanning in point-index order.
inline Clustering dbscan(const Dataset& data, double eps, int min_samples = 5) {
  if (!(eps > 0.0)) throw std::invalid_argument("dbscan: eps must be > 0");
  if (min_samples < 1) throw std::invalid_argument("dbscan: min_samples must be >= 1");
  const std::size_t n = data.size();
  const double eps2 = eps * eps;

  std::vector<std::vector<int>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (distance_sq(data[i], data[j]) <= eps2) nbrs[i].push_back(static_cast<int>(j));

  constexpr int kUnset = -2;
  std::vector<int> labels(n, kUnset);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnset) continue;
    if (nbrs[i].size() < static_cast<std::size_t>(min_samples)) {
      labels[i] = kNoise;
      continue;
    }
    labels[i] = cluster;
    std::deque<int> queue(nbrs[i].begin(), nbrs[i].end());
    while (!queue.empty()) {
      const int j = queue.front();
      queue.pop_front();
      if (labels[j] == kNoise) labels[j] = cluster;  // border point
      if (labels[j] != kUnset) continue;
      labels[j] = cluster;
      if (nbrs[j].size() >= static_cast<std::size_t>(min_samples))
        queue.insert(queue.end(), nbrs[j].begin(), nbrs[j].end());
    }
    ++cluster;
  }
  Clustering out;
  out.labels = std::move(labels);
  out.algorithm = "dbscan";
  out.params = {{"eps", std::to_string(eps)},
                {"min_samples", std::to_string(min_samples)}};
  return out;
}

// RBF affinity, symmetric normalized Laplacian, bottom-k eigenvectors via
// Jacobi, row-normalized embedding, then k-means with a fixed internal seed.
inline Clustering spectral_clustering(const Dataset& data, int k,
                                      double gamma = 1.0) {
  const std::size_t n = data.size();
  if (k < 2 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("spectral_clustering: k out of range");
  if (n > 5000)
    throw std::invalid_argument("spectral_clustering: dataset over dense-size guard (5000)");
  if (!(gamma > 0.0)) throw std::invalid_argument("spectral_clustering: gamma must be > 0");

  DenseMatrix lap(n);
  {
    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double a = std::exp(-gamma * distance_sq(data[i], data[j]));
        lap.at(i, j) = a;
        degree[i] += a;
      }
    }
    for (std::size_t i = 0; i < n; ++i) degree[i] = 1.0 / std::sqrt(degree[i]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        lap.at(i, j) = (i == j ? 1.0 : 0.0) - degree[i] * lap.at(i, j) * degree[j];
  }

  const EigenDecomposition eig = jacobi_eigh(std::move(lap));

  std::vector<double> rows(n * static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    double norm2 = 0.0;
    for (int c = 0; c < k; ++c) {
      const double v = eig.vectors[c][i];
      rows[i * k + c] = v;
      norm2 += v * v;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (int c = 0; c < k; ++c) rows[i * k + c] *= inv;
    }
  }

  constexpr std::uint64_t kEmbeddingSeed = 1;
  auto res = detail::kmeans_nd(rows, n, static_cast<std::size_t>(k), k,
                               kEmbeddingSeed, 300, 1e-10);
  Clustering out;
  out.labels = std::move(res.labels);
  out.algorithm = "spectral";
  out.params = {{"k", std::to_string(k)}, {"gamma", std::to_string(gamma)}};
  return out;
}

struct SilhouetteResult {
  std::vector<double> point_scores;  // 0 for noise points; noise never summed
  std::vector<double> cluster_sums;  // indexed by cluster id
  std::vector<double> cluster_avgs;
};

// Standard silhouette s(i) = (b-a)/max(a,b) with Euclidean distance.
// Singleton clusters score 0; noise points are excluded everywhere.
inline SilhouetteResult silhouette(const Dataset& data, const Clustering& c) {
  const std::size_t n = data.size();
  if (c.labels.size() != n)
    throw std::invalid_argument("silhouette: labels/dataset size mismatch");
  const int k = c.num_clusters();
  if (k < 2) throw std::invalid_argument("silhouette: needs at least 2 clusters");

  std::vector<std::size_t> sizes(k, 0);
  for (int l : c.labels)
    if (l != kNoise) ++sizes[l];

  SilhouetteResult out;
  out.point_scores.assign(n, 0.0);
  out.cluster_sums.assign(k, 0.0);
  out.cluster_avgs.assign(k, 0.0);

  std::vector<double> dist_sum(k);
  for (std::size_t i = 0; i < n; ++i) {
    const int ci = c.labels[i];
    if (ci == kNoise) continue;
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const int cj = c.labels[j];
      if (cj == kNoise || j == i) continue;
      dist_sum[cj] += distance(data[i], data[j]);
    }
    double s = 0.0;
    if (sizes[ci] > 1) {
      const double a = dist_sum[ci] / static_cast<double>(sizes[ci] - 1);
      double b = std::numeric_limits<double>::infinity();
      for (int other = 0; other < k; ++other) {
        if (other == ci || sizes[other] == 0) continue;
        b = std::min(b, dist_sum[other] / static_cast<double>(sizes[other]));
      }
      const double m = std::max(a, b);
      s = (m > 0.0) ? (b - a) / m : 0.0;
    }
    out.point_scores[i] = s;
    out.cluster_sums[ci] += s;
  }
  for (int cl = 0; cl < k; ++cl)
    out.cluster_avgs[cl] =
        sizes[cl] ? out.cluster_sums[cl] / static_cast<double>(sizes[cl]) : 0.0;
  return out;
}

// One cluster of the unified ensemble: globally labeled, silhouette-weighted.
struct ClusterInfo {
  int global_label = 0;
  std::vector<int> members;  // ascending point indices
  double silhouette_sum = 0.0;
  double silhouette_avg = 0.0;
  int source = 0;  // index of the originating clustering
};

struct ClusterSet {
  std::size_t n_points = 0;
  std::vector<ClusterInfo> clusters;

  std::size_t size() const { return clusters.size(); }
};

// Global labels are assigned clustering-by-clustering, then cluster-by-
// cluster, so clustering 0 owns labels 0..k0-1, clustering 1 the next k1, ...
// Noise never becomes a cluster.
inline ClusterSet unify_labels(const std::vector<Clustering>& clusterings,
                               const std::vector<SilhouetteResult>& silhouettes) {
  if (clusterings.empty())
    throw std::invalid_argument("unify_labels: no clusterings");
  if (silhouettes.size() != clusterings.size())
    throw std::invalid_argument("unify_labels: silhouettes/clusterings mismatch");
  const std::size_t n = clusterings.front().labels.size();
  for (const Clustering& c : clusterings)
    if (c.labels.size() != n)
      throw std::invalid_argument("unify_labels: clusterings cover different datasets");

  ClusterSet out;
  out.n_points = n;
  int next_label = 0;
  for (std::size_t s = 0; s < clusterings.size(); ++s) {
    const Clustering& c = clusterings[s];
    const int k = c.num_clusters();
    for (int local = 0; local < k; ++local) {
      ClusterInfo info;
      info.global_label = next_label++;
      info.source = static_cast<int>(s);
      for (std::size_t i = 0; i < n; ++i)
        if (c.labels[i] == local) info.members.push_back(static_cast<int>(i));
      info.silhouette_sum = silhouettes[s].cluster_sums[local];
      info.silhouette_avg = silhouettes[s].cluster_avgs[local];
      out.clusters.push_back(std::move(info));
    }
  }
  return out;
}

inline void write_clustering_csv(const Clustering& c,
                                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_clustering_csv: cannot write " + path.string());
  out << "point_index,label\n";
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    out << i << ',' << c.labels[i] << '\n';
}

inline nlohmann::ordered_json clustering_json(const Clustering& c,
                                              const SilhouetteResult* sil = nullptr) {
  nlohmann::ordered_json j;
  j["algorithm"] = c.algorithm;
  j["params"] = c.params;
  j["labels"] = c.labels;
  if (sil) {
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (std::size_t cl = 0; cl < sil->cluster_sums.size(); ++cl)
      table.push_back({{"cluster", cl},
                       {"silhouette_avg", sil->cluster_avgs[cl]},
                       {"silhouette_sum", sil->cluster_sums[cl]}});
    j["silhouette"] = table;
  }
  return j;
}

}  // namespace clagg
