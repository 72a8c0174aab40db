#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace clagg {

// Dense square matrix, row-major.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit DenseMatrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct EigenDecomposition {
  std::vector<double> values;                 // ascending
  std::vector<std::vector<double>> vectors;   // vectors[k] pairs with values[k]
};

// Cyclic Jacobi for symmetric matrices. Quadratically convergent; plenty for
// the dense Laplacians this project builds (n <= 5000 guard upstream).
inline EigenDecomposition jacobi_eigh(DenseMatrix m, int max_sweeps = 100) {
  const std::size_t n = m.n;
  EigenDecomposition out;
  if (n == 0) return out;
  std::vector<double> v(n * n, 0.0);  // accumulated rotations, column k = vec k
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += m.at(i, j) * m.at(i, j);
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (double x : m.a) scale = std::max(scale, std::abs(x));
  const double tol = 1e-13 * std::max(1.0, scale) * static_cast<double>(n);
  // Pivots below this cannot push off_norm above tol even if all survive.
  const double skip = tol / (2.0 * static_cast<double>(n));

  int sweep = 0;
  while (off_norm() > tol) {
    if (++sweep > max_sweeps)
      throw std::runtime_error("jacobi_eigh: no convergence within sweep cap");
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m.at(p, q);
        if (std::abs(apq) <= skip) continue;
        const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // rows p and q
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m.at(p, k);
          const double mqk = m.at(q, k);
          m.at(p, k) = c * mpk - s * mqk;
          m.at(q, k) = s * mpk + c * mqk;
        }
        // columns p and q
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m.at(k, p);
          const double mkq = m.at(k, q);
          m.at(k, p) = c * mkp - s * mkq;
          m.at(k, q) = s * mkp + c * mkq;
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
        m.at(p, q) = 0.0;
        m.at(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return m.at(a, a) < m.at(b, b);
  });
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = m.at(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = v[i * n + order[k]];
  }
  return out;
}

}  // namespace clagg
