#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace clagg {

// Shape-preserving (Fritsch-Carlson) cubic through anchors placed at equally
// spaced times over [0, duration]. Monotone between anchors, so a ramp like
// [1e-9, peak, 1e-9] never overshoots its peak value.
class Waveform {
 public:
  Waveform(double duration_ns, std::vector<double> anchors)
      : duration_ns_(duration_ns), anchors_(std::move(anchors)) {
    if (!(duration_ns_ > 0.0))
      throw std::invalid_argument("Waveform: duration must be > 0");
    if (anchors_.empty())
      throw std::invalid_argument("Waveform: needs at least one anchor");
    compute_slopes();
  }

  double duration() const { return duration_ns_; }
  const std::vector<double>& anchors() const { return anchors_; }

  double operator()(double t_ns) const {
    if (t_ns < 0.0 || t_ns > duration_ns_)
      throw std::out_of_range("Waveform: t outside [0, duration]");
    const std::size_t m = anchors_.size();
    if (m == 1) return anchors_[0];
    const double h = duration_ns_ / static_cast<double>(m - 1);
    std::size_t seg = static_cast<std::size_t>(t_ns / h);
    if (seg >= m - 1) seg = m - 2;
    const double u = (t_ns - static_cast<double>(seg) * h) / h;  // [0,1]
    const double y0 = anchors_[seg];
    const double y1 = anchors_[seg + 1];
    const double m0 = slopes_[seg] * h;
    const double m1 = slopes_[seg + 1] * h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 +
           (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * m1;
  }

 private:
  void compute_slopes() {
    const std::size_t m = anchors_.size();
    slopes_.assign(m, 0.0);
    if (m < 2) return;
    const double h = duration_ns_ / static_cast<double>(m - 1);
    std::vector<double> sec(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
      sec[i] = (anchors_[i + 1] - anchors_[i]) / h;
    if (m == 2) {
      slopes_[0] = slopes_[1] = sec[0];
      return;
    }
    // interior: harmonic mean of neighboring secants, zero across extrema
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (sec[i - 1] * sec[i] <= 0.0)
        slopes_[i] = 0.0;
      else
        slopes_[i] = 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);
    }
    slopes_[0] = edge_slope(sec[0], sec[1]);
    slopes_[m - 1] = edge_slope(sec[m - 2], sec[m - 3]);
  }

  // One-sided three-point endpoint slope with the usual monotonicity clamps.
  static double edge_slope(double s_near, double s_far) {
    double d = (3.0 * s_near - s_far) / 2.0;
    if (d * s_near <= 0.0) return 0.0;
    if (s_near * s_far < 0.0 && std::abs(d) > 3.0 * std::abs(s_near))
      return 3.0 * s_near;
    return d;
  }

  double duration_ns_;
  std::vector<double> anchors_;
  std::vector<double> slopes_;
};

}  // namespace clagg
