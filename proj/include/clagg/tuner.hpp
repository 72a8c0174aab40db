#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "clagg/rng.hpp"
#include "clagg/rydberg.hpp"

namespace clagg {

struct PulseParams {
  double omega = 0.0;   // rad/us
  double delta0 = 0.0;  // rad/us
  double t_ns = 0.0;
};

struct ParamBounds {
  std::pair<double, double> omega{0.1, 5.0};
  std::pair<double, double> delta0{-6.0, -0.5};
  std::pair<double, double> t_ns{500.0, 6000.0};

  void validate() const {
    const auto ok = [](const std::pair<double, double>& b) {
      return b.first < b.second;
    };
    if (!ok(omega) || !ok(delta0) || !ok(t_ns))
      throw std::invalid_argument("ParamBounds: need low < high");
    if (omega.first < 0.0)
      throw std::invalid_argument("ParamBounds: omega must be non-negative");
    if (t_ns.first <= 0.0)
      throw std::invalid_argument("ParamBounds: T must be positive");
  }
};

struct TraceEntry {
  int iter = 0;
  PulseParams params;
  double score = 0.0;
  bool failed = false;
};

struct TuneResult {
  PulseParams best;
  double best_score = 0.0;
  std::vector<TraceEntry> trace;
};

// Pulse quality on one instance: drive the emulator, post-select the best
// independent sample, score its silhouette weight. An empty-valid outcome
// scores 0. Deterministic for a given seed.
inline double tuner_objective(const PulseParams& p, const OverlapGraph& graph,
                              std::uint64_t shots, std::uint64_t seed,
                              const EmulatorParams& emu = {}) {
  const PulseSequence seq = adiabatic_sequence(p.omega, p.delta0, p.t_ns);
  const RunMisResult run = run_mis(graph, seq, shots, seed, emu);
  const BestSample best = select_best(run.samples, graph);
  return best.empty_valid ? 0.0 : best.weight;
}

// Derivative-free maximizer: Latin-hypercube seeding over the box, then
// shrinking coordinate steps around the incumbent. Never exceeds `budget`
// objective calls; evaluations that throw are recorded as failed.
inline TuneResult optimize(const ParamBounds& bounds, int budget,
                           std::uint64_t seed,
                           const std::function<double(const PulseParams&)>& objective) {
  bounds.validate();
  if (budget < 1) throw std::invalid_argument("optimize: budget must be >= 1");

  const double lo[3] = {bounds.omega.first, bounds.delta0.first, bounds.t_ns.first};
  const double hi[3] = {bounds.omega.second, bounds.delta0.second, bounds.t_ns.second};
  const auto clamp_dim = [&](int d, double v) {
    return std::min(hi[d], std::max(lo[d], v));
  };

  TuneResult out;
  out.best_score = -std::numeric_limits<double>::infinity();
  int evals = 0;
  int failures = 0;
  const auto evaluate = [&](const PulseParams& p) {
    TraceEntry e;
    e.iter = evals;
    e.params = p;
    try {
      e.score = objective(p);
    } catch (const std::exception&) {
      e.failed = true;
      e.score = -std::numeric_limits<double>::infinity();
      ++failures;
    }
    ++evals;
    out.trace.push_back(e);
    if (!e.failed && e.score > out.best_score) {
      out.best_score = e.score;
      out.best = p;
    }
  };

  Xoshiro256pp rng(seed);
  const int n_seed = std::max(1, (budget + 1) / 2);
  // Latin hypercube: one shuffled stratum per dimension and sample.
  std::vector<std::vector<int>> strata(3, std::vector<int>(n_seed));
  for (auto& col : strata) {
    for (int i = 0; i < n_seed; ++i) col[i] = i;
    for (int i = n_seed - 1; i > 0; --i)
      std::swap(col[i], col[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  for (int s = 0; s < n_seed && evals < budget; ++s) {
    PulseParams p;
    double* fields[3] = {&p.omega, &p.delta0, &p.t_ns};
    for (int d = 0; d < 3; ++d) {
      const double u = (strata[d][s] + rng.uniform()) / n_seed;
      *fields[d] = lo[d] + u * (hi[d] - lo[d]);
    }
    evaluate(p);
  }

  double step = 0.25;
  while (evals < budget) {
    bool improved = false;
    for (int d = 0; d < 3 && evals < budget; ++d) {
      for (const double dir : {+1.0, -1.0}) {
        if (evals >= budget) break;
        PulseParams p = out.best;
        double* fields[3] = {&p.omega, &p.delta0, &p.t_ns};
        *fields[d] = clamp_dim(d, *fields[d] + dir * step * (hi[d] - lo[d]));
        const double prev = out.best_score;
        evaluate(p);
        if (out.best_score > prev) {
          improved = true;
          break;  // accept, move on to the next coordinate
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-3) step = 0.25;  // re-expand instead of stalling
  }

  if (failures == evals)
    throw std::runtime_error("optimize: all objective evaluations failed");
  return out;
}

}  // namespace clagg
