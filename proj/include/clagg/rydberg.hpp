#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "clagg/graph.hpp"
#include "clagg/rng.hpp"
#include "clagg/waveform.hpp"

namespace clagg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Planar atom arrangement. The unit-disk graph induced by blockade_radius
// must reproduce the problem graph's edge set exactly.
struct Register {
  std::vector<Vec2> positions_um;
  double blockade_radius_um = 0.0;
  double min_spacing_um = 0.0;

  std::size_t size() const { return positions_um.size(); }

  double distance(std::size_t i, std::size_t j) const {
    const double dx = positions_um[i].x - positions_um[j].x;
    const double dy = positions_um[i].y - positions_um[j].y;
    return std::sqrt(dx * dx + dy * dy);
  }
};

// Drive pulse: Rabi amplitude and detuning waveforms of equal duration.
struct PulseSequence {
  Waveform omega;  // rad/us, >= 0
  Waveform delta;  // rad/us

  PulseSequence(Waveform o, Waveform d) : omega(std::move(o)), delta(std::move(d)) {
    if (omega.duration() != delta.duration())
      throw std::invalid_argument("PulseSequence: waveform durations differ");
    for (double a : omega.anchors())
      if (a < 0.0)
        throw std::invalid_argument("PulseSequence: omega anchors must be >= 0");
  }

  double duration_ns() const { return omega.duration(); }
};

// The single-pulse ramp used throughout: Rabi rises from ~0 to omega_peak
// and back, detuning sweeps linearly-shaped from delta0 through 0 to -delta0.
inline PulseSequence adiabatic_sequence(double omega_peak, double delta0,
                                        double t_ns) {
  return PulseSequence(Waveform(t_ns, {1e-9, omega_peak, 1e-9}),
                       Waveform(t_ns, {delta0, 0.0, -delta0}));
}

struct EmulatorParams {
  double c6 = 5.42e6;  // rad * um^6 / us
  std::optional<double> blockade_radius_um;  // default derived from omega peak
  double min_spacing_um = 5.0;
  double dt_ns = 0.5;
  int max_restarts = 32;
  std::uint64_t embed_seed = 1;
};

// Operational blockade radius: interaction equals the peak drive there.
inline double default_blockade_radius(double c6, double omega_max) {
  if (!(omega_max > 0.0))
    throw std::invalid_argument("default_blockade_radius: omega_max must be > 0");
  return std::pow(c6 / omega_max, 1.0 / 6.0);
}

struct EmbedError : std::runtime_error {
  std::vector<std::pair<int, int>> missing;  // target edges not realized
  std::vector<std::pair<int, int>> extra;    // realized edges not in target

  EmbedError(std::string msg, std::vector<std::pair<int, int>> miss,
             std::vector<std::pair<int, int>> ext)
      : std::runtime_error(std::move(msg)),
        missing(std::move(miss)),
        extra(std::move(ext)) {}
};

namespace detail {

// Edge test used everywhere: entangled iff within the blockade radius.
inline bool unit_disk_edge(const Register& reg, std::size_t i, std::size_t j) {
  return reg.distance(i, j) <= reg.blockade_radius_um;
}

inline bool layout_matches(const Register& reg, const OverlapGraph& g,
                           std::vector<std::pair<int, int>>* missing = nullptr,
                           std::vector<std::pair<int, int>>* extra = nullptr) {
  bool ok = true;
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = i + 1; j < g.n; ++j) {
      const bool want = g.has_edge(static_cast<int>(i), static_cast<int>(j));
      const bool have = unit_disk_edge(reg, i, j);
      if (want == have) continue;
      ok = false;
      if (want && missing) missing->push_back({static_cast<int>(i), static_cast<int>(j)});
      if (!want && extra) extra->push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return ok;
}

inline bool spacing_holds(const Register& reg) {
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = i + 1; j < reg.size(); ++j)
      if (reg.distance(i, j) < reg.min_spacing_um) return false;
  return true;
}

}  // namespace detail

// Force-directed embedding. Edges are pulled toward a comfortable fraction of
// the blockade radius, non-edges pushed well outside it, everything kept
// min_spacing apart; the candidate is accepted only if the induced unit-disk
// graph equals the target edge set exactly. Restarts with fresh seeds.
inline Register embed_register(const OverlapGraph& g, double blockade_radius_um,
                               double min_spacing_um, std::uint64_t seed,
                               int max_restarts = 32) {
  if (!(blockade_radius_um > min_spacing_um))
    throw std::invalid_argument("embed_register: blockade radius must exceed min spacing");
  const std::size_t n = g.n;
  const double edge_target = std::max(0.62 * blockade_radius_um, min_spacing_um * 1.02);
  const double gap_target = 1.45 * blockade_radius_um;

  std::vector<std::pair<int, int>> missing, extra;
  for (int restart = 0; restart < std::max(1, max_restarts); ++restart) {
    Xoshiro256pp rng(mix_seed(seed, restart));
    Register reg;
    reg.blockade_radius_um = blockade_radius_um;
    reg.min_spacing_um = min_spacing_um;
    reg.positions_um.resize(n);
    const double span = gap_target * std::sqrt(static_cast<double>(n));
    for (Vec2& p : reg.positions_um)
      p = {span * (rng.uniform() - 0.5), span * (rng.uniform() - 0.5)};

    const int iters = 600 + 200 * static_cast<int>(n);
    for (int it = 0; it < iters; ++it) {
      const double step = 0.08 * (1.0 - 0.85 * it / iters);
      std::vector<Vec2> force(n, {0.0, 0.0});
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double dx = reg.positions_um[j].x - reg.positions_um[i].x;
          double dy = reg.positions_um[j].y - reg.positions_um[i].y;
          double d = std::sqrt(dx * dx + dy * dy);
          if (d < 1e-9) {  // coincident: nudge apart deterministically
            dx = 1e-3 * (1.0 + static_cast<double>(i));
            dy = 1e-3 * (1.0 + static_cast<double>(j));
            d = std::sqrt(dx * dx + dy * dy);
          }
          const bool adjacent = g.has_edge(static_cast<int>(i), static_cast<int>(j));
          const double target = adjacent ? edge_target : gap_target;
          double f = 0.0;
          if (adjacent)
            f = (d - target);  // spring both ways
          else if (d < target)
            f = (d - target);  // repel only while too close
          if (d < min_spacing_um * 1.05)
            f -= 2.0 * (min_spacing_um * 1.05 - d);
          const double scale = f / d;
          force[i].x += scale * dx;
          force[i].y += scale * dy;
          force[j].x -= scale * dx;
          force[j].y -= scale * dy;
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        reg.positions_um[i].x += step * force[i].x;
        reg.positions_um[i].y += step * force[i].y;
      }
    }

    missing.clear();
    extra.clear();
    if (detail::layout_matches(reg, g, &missing, &extra) &&
        detail::spacing_holds(reg))
      return reg;
  }
  std::ostringstream msg;
  msg << "NOT_UNIT_DISK_EMBEDDABLE: no valid layout after " << max_restarts
      << " restarts (" << missing.size() << " missing / " << extra.size()
      << " extra edges in last candidate)";
  throw EmbedError(msg.str(), std::move(missing), std::move(extra));
}

using StateVector = std::vector<std::complex<double>>;

inline StateVector ground_state(std::size_t n_qubits) {
  StateVector psi(std::size_t{1} << n_qubits, {0.0, 0.0});
  psi[0] = {1.0, 0.0};
  return psi;
}

inline double norm(const StateVector& psi) {
  double s = 0.0;
  for (const auto& a : psi) s += std::norm(a);
  return std::sqrt(s);
}

// H(t)/hbar = sum_i (Omega(t)/2) sigma_x^(i) - delta(t) n_i
//           + sum_{i<j} (C6/R_ij^6) n_i n_j,      [rad/us]
// with n = |r><r| and basis index bit i (qubit 0 most significant) = 1 for
// |r>. The diagonal interaction part is cached; the drive terms are scaled
// per evaluation. apply() works matrix-free so 2^n stays the only big object.
class RydbergHamiltonian {
 public:
  RydbergHamiltonian(const Register& reg, PulseSequence seq, double c6)
      : n_(reg.size()), seq_(std::move(seq)) {
    if (n_ == 0) throw std::invalid_argument("RydbergHamiltonian: empty register");
    if (n_ > 14)
      throw std::invalid_argument("RydbergHamiltonian: n over statevector guard (14)");
    const std::size_t dim = std::size_t{1} << n_;
    interaction_.assign(dim, 0.0);
    excitations_.assign(dim, 0);
    for (std::size_t b = 0; b < dim; ++b) {
      int exc = 0;
      double v = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!((b >> (n_ - 1 - i)) & 1ULL)) continue;
        ++exc;
        for (std::size_t j = i + 1; j < n_; ++j) {
          if (!((b >> (n_ - 1 - j)) & 1ULL)) continue;
          const double r = reg.distance(i, j);
          v += c6 / std::pow(r, 6.0);
        }
      }
      interaction_[b] = v;
      excitations_[b] = exc;
    }
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t dim() const { return interaction_.size(); }
  double duration_ns() const { return seq_.duration_ns(); }

  // out = H(t) psi, in rad/us.
  void apply(double t_ns, const StateVector& psi, StateVector& out) const {
    const double omega = seq_.omega(t_ns);
    const double delta = seq_.delta(t_ns);
    const double half_omega = 0.5 * omega;
    const std::size_t dim = interaction_.size();
    out.resize(dim);
    for (std::size_t b = 0; b < dim; ++b)
      out[b] = (interaction_[b] - delta * excitations_[b]) * psi[b];
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t mask = std::size_t{1} << (n_ - 1 - i);
      for (std::size_t b = 0; b < dim; ++b)
        out[b] += half_omega * psi[b ^ mask];
    }
  }

  // Dense materialization for inspection and small-n oracles.
  std::vector<std::complex<double>> matrix(double t_ns) const {
    const std::size_t dim = interaction_.size();
    std::vector<std::complex<double>> h(dim * dim, {0.0, 0.0});
    StateVector unit(dim), col(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      std::fill(unit.begin(), unit.end(), std::complex<double>{0.0, 0.0});
      unit[c] = {1.0, 0.0};
      apply(t_ns, unit, col);
      for (std::size_t r = 0; r < dim; ++r) h[r * dim + c] = col[r];
    }
    return h;
  }

  double interaction_diagonal(std::size_t basis_index) const {
    return interaction_[basis_index];
  }

 private:
  std::size_t n_;
  PulseSequence seq_;
  std::vector<double> interaction_;  // rad/us, diagonal n_i n_j part
  std::vector<int> excitations_;     // popcount per basis state
};

struct NormDriftError : std::runtime_error {
  double drift;
  explicit NormDriftError(double d)
      : std::runtime_error("NORM_DRIFT: statevector norm drifted by " +
                           std::to_string(d) + "; dt too large"),
        drift(d) {}
};

namespace detail {

// Classic RK4 on i dpsi/dt = H(t) psi; H is rad/us, t is ns, hence the 1e-3.
inline StateVector evolve_rk4(const RydbergHamiltonian& h, double t_ns,
                              double dt_ns, StateVector psi,
                              double norm_tol = 1e-6) {
  const std::size_t dim = psi.size();
  if (dim != h.dim())
    throw std::invalid_argument("evolve: state dimension mismatch");
  const std::complex<double> minus_i{0.0, -1.0};
  StateVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim), hpsi(dim);

  const auto rhs = [&](double t, const StateVector& y, StateVector& k) {
    h.apply(std::min(t, h.duration_ns()), y, hpsi);
    for (std::size_t b = 0; b < dim; ++b) k[b] = minus_i * 1e-3 * hpsi[b];
  };

  double t = 0.0;
  while (t < t_ns - 1e-12) {
    const double step = std::min(dt_ns, t_ns - t);
    rhs(t, psi, k1);
    for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + 0.5 * step * k1[b];
    rhs(t + 0.5 * step, tmp, k2);
    for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + 0.5 * step * k2[b];
    rhs(t + 0.5 * step, tmp, k3);
    for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + step * k3[b];
    rhs(t + step, tmp, k4);
    for (std::size_t b = 0; b < dim; ++b)
      psi[b] += (step / 6.0) * (k1[b] + 2.0 * k2[b] + 2.0 * k3[b] + k4[b]);
    t += step;
  }
  const double drift = std::abs(norm(psi) - 1.0);
  if (drift > norm_tol) throw NormDriftError(drift);
  return psi;
}

}  // namespace detail

// RK4 endpoint of the pulse, with one automatic dt halving on norm drift.
inline StateVector evolve(const RydbergHamiltonian& h, double t_ns,
                          double dt_ns, StateVector initial) {
  if (!(dt_ns > 0.0) || dt_ns > 1.0)
    throw std::invalid_argument("evolve: dt must be in (0, 1] ns");
  if (std::abs(norm(initial) - 1.0) > 1e-9)
    throw std::invalid_argument("evolve: initial state not normalized");
  try {
    return detail::evolve_rk4(h, t_ns, dt_ns, initial);
  } catch (const NormDriftError&) {
    return detail::evolve_rk4(h, t_ns, 0.5 * dt_ns, std::move(initial));
  }
}

// Multinomial measurement of |amplitude|^2. Per-shot derived streams keep
// the draw order irrelevant.
inline SampleSet sample(const StateVector& psi, std::uint64_t shots,
                        std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  const double total = norm(psi);
  if (std::abs(total - 1.0) > 1e-6)
    throw std::invalid_argument("sample: state not normalized");
  std::size_t n_qubits = 0;
  while ((std::size_t{1} << n_qubits) < psi.size()) ++n_qubits;

  std::vector<double> cdf(psi.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    acc += std::norm(psi[b]) / (total * total);
    cdf[b] = acc;
  }
  cdf.back() = 1.0;

  SampleSet out;
  out.backend = "rydberg";
  for (std::uint64_t s = 0; s < shots; ++s) {
    Xoshiro256pp rng(mix_seed(seed, s));
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t b = static_cast<std::size_t>(it - cdf.begin());
    out.add(Bitstring::from_index(b, n_qubits));
  }
  return out;
}

struct RunMisResult {
  SampleSet samples;
  Register atom_register;
};

// Full analog backend: embed the graph, drive the ramp from all-ground,
// measure. Unweighted MIS only; weights re-enter in classical post-selection.
inline RunMisResult run_mis(const OverlapGraph& g, const PulseSequence& seq,
                            std::uint64_t shots, std::uint64_t seed,
                            const EmulatorParams& params = {}) {
  double omega_peak = 0.0;
  for (double a : seq.omega.anchors()) omega_peak = std::max(omega_peak, a);
  const double rb = params.blockade_radius_um
                        ? *params.blockade_radius_um
                        : default_blockade_radius(params.c6, omega_peak);
  RunMisResult out;
  out.atom_register = embed_register(g, rb, params.min_spacing_um,
                                     params.embed_seed, params.max_restarts);
  const auto t0 = std::chrono::steady_clock::now();
  RydbergHamiltonian h(out.atom_register, seq, params.c6);
  const StateVector end =
      evolve(h, seq.duration_ns(), params.dt_ns, ground_state(g.n));
  out.samples = sample(end, shots, seed);
  out.samples.timing_us = std::chrono::duration_cast<std::chrono::microseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  return out;
}

// ---- register / sequence serialization (versioned) ------------------------

inline nlohmann::ordered_json register_json(const Register& reg) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["blockade_radius_um"] = reg.blockade_radius_um;
  j["min_spacing_um"] = reg.min_spacing_um;
  nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < reg.size(); ++i)
    atoms.push_back({{"label", i},
                     {"x_um", reg.positions_um[i].x},
                     {"y_um", reg.positions_um[i].y}});
  j["atoms"] = atoms;
  return j;
}

inline Register register_from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != 1)
    throw std::runtime_error("register_from_json: unsupported version");
  Register reg;
  reg.blockade_radius_um = j.at("blockade_radius_um").get<double>();
  reg.min_spacing_um = j.at("min_spacing_um").get<double>();
  for (const auto& a : j.at("atoms"))
    reg.positions_um.push_back({a.at("x_um").get<double>(), a.at("y_um").get<double>()});
  return reg;
}

inline nlohmann::ordered_json sequence_json(const PulseSequence& seq) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["t_ns"] = seq.duration_ns();
  j["omega_anchors"] = seq.omega.anchors();
  j["delta_anchors"] = seq.delta.anchors();
  return j;
}

inline PulseSequence sequence_from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != 1)
    throw std::runtime_error("sequence_from_json: unsupported version");
  const double t = j.at("t_ns").get<double>();
  return PulseSequence(Waveform(t, j.at("omega_anchors").get<std::vector<double>>()),
                       Waveform(t, j.at("delta_anchors").get<std::vector<double>>()));
}

}  // namespace clagg
