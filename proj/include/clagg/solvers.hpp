#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "clagg/graph.hpp"
#include "clagg/rng.hpp"

namespace clagg {

// Geometric inverse-temperature ramp for the Metropolis sampler.
struct AnnealSchedule {
  int sweeps = 2000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  int reads = 1000;
  std::uint64_t seed = 0;
  bool zero_init = false;  // start every read from all-zeros (greedy-descent studies)

  void validate() const {
    if (sweeps < 1) throw std::invalid_argument("AnnealSchedule: sweeps must be >= 1");
    if (reads < 1) throw std::invalid_argument("AnnealSchedule: reads must be >= 1");
    if (!(beta_start > 0.0) || beta_end < beta_start)
      throw std::invalid_argument("AnnealSchedule: need beta_end >= beta_start > 0");
  }
};

struct BruteForceResult {
  Bitstring best;
  double weight = 0.0;
  bool unique = false;
  std::vector<Bitstring> optima;
  std::int64_t timing_us = 0;
};

// Exact optimum over all 2^n subsets. Weighted mode maximizes the silhouette
// weight, unweighted mode the cardinality. Guarded at n <= 25.
inline BruteForceResult brute_force_mwis(const OverlapGraph& g,
                                         bool use_weights) {
  if (g.n > 25)
    throw std::invalid_argument("brute_force_mwis: n over enumeration guard (25)");
  const auto t0 = std::chrono::steady_clock::now();
  const auto masks = g.neighbor_masks();
  const std::uint64_t total = 1ULL << g.n;

  double best = -1.0;  // empty set scores 0, so any independent set >= 0 wins
  std::vector<std::uint64_t> optima;
  for (std::uint64_t x = 0; x < total; ++x) {
    bool independent = true;
    double w = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      if (!((x >> i) & 1ULL)) continue;
      if (masks[i] & x) {
        independent = false;
        break;
      }
      w += use_weights ? g.weights[i] : 1.0;
    }
    if (!independent) continue;
    if (w > best) {
      best = w;
      optima.clear();
      optima.push_back(x);
    } else if (w == best) {
      optima.push_back(x);
    }
  }

  // enumeration above used bit i = vertex i; convert to the label-ordered form
  const auto to_bitstring = [&](std::uint64_t x) {
    Bitstring b(g.n);
    for (std::size_t i = 0; i < g.n; ++i) b.bits[i] = (x >> i) & 1ULL;
    return b;
  };
  BruteForceResult out;
  for (std::uint64_t x : optima) out.optima.push_back(to_bitstring(x));
  std::sort(out.optima.begin(), out.optima.end());
  out.best = out.optima.front();
  out.weight = best;
  out.unique = out.optima.size() == 1;
  out.timing_us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return out;
}

// x^T Q x with the upper-triangular storage convention.
inline double qubo_energy(const QuboMatrix& q, const Bitstring& x) {
  if (x.size() != q.n) throw std::invalid_argument("qubo_energy: length mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < q.n; ++i) {
    if (!x.bits[i]) continue;
    e += q.at(i, i);
    for (std::size_t j = i + 1; j < q.n; ++j)
      if (x.bits[j]) e += q.at(i, j);
  }
  return e;
}

namespace detail {

// One Metropolis chain: geometric beta ramp, single-spin flips, full sweeps.
// The read owns its PRNG stream, so reads can run in any order or in
// parallel without changing the sample.
inline Bitstring sa_single_read(const QuboMatrix& q, const AnnealSchedule& sch,
                                std::uint64_t read_seed) {
  const std::size_t n = q.n;
  Xoshiro256pp rng(read_seed);
  std::vector<std::uint8_t> x(n, 0);
  if (!sch.zero_init)
    for (auto& b : x) b = static_cast<std::uint8_t>(rng.next() & 1ULL);

  // Flip cost of bit i given current x: linear term plus coupled neighbors.
  const auto flip_delta = [&](std::size_t i) {
    double field = q.at(i, i);
    for (std::size_t j = 0; j < i; ++j)
      if (x[j]) field += q.at(j, i);
    for (std::size_t j = i + 1; j < n; ++j)
      if (x[j]) field += q.at(i, j);
    return x[i] ? -field : field;
  };

  const double ratio = sch.beta_end / sch.beta_start;
  for (int sweep = 0; sweep < sch.sweeps; ++sweep) {
    const double frac =
        sch.sweeps > 1 ? static_cast<double>(sweep) / (sch.sweeps - 1) : 1.0;
    const double beta = sch.beta_start * std::pow(ratio, frac);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = flip_delta(i);
      if (d <= 0.0 || rng.uniform() < std::exp(-beta * d)) x[i] ^= 1u;
    }
  }
  Bitstring b;
  b.bits = std::move(x);
  return b;
}

}  // namespace detail

// `reads` independent Metropolis chains over the QUBO. Deterministic for a
// given (qubo, schedule); per-read streams derive from (seed, read index).
inline SampleSet simulated_annealing(const QuboMatrix& q,
                                     const AnnealSchedule& sch) {
  sch.validate();
  SampleSet out;
  out.backend = "sa";
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < sch.reads; ++r)
    out.add(detail::sa_single_read(q, sch, mix_seed(sch.seed, r)));
  out.timing_us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return out;
}

}  // namespace clagg
