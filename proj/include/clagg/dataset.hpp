#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "clagg/rng.hpp"

namespace clagg {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline double distance_sq(const Point2D& a, const Point2D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const Point2D& a, const Point2D& b) {
  return std::sqrt(distance_sq(a, b));
}

// Ordered 2-D point set. Point order is stable and defines the point indices
// used by every downstream stage.
struct Dataset {
  std::string name;
  std::vector<Point2D> points;

  std::size_t size() const { return points.size(); }
  const Point2D& operator[](std::size_t i) const { return points[i]; }
};

// n_points Gaussian samples assigned round-robin to centers (point i belongs
// to center i mod k). Same seed, same dataset, on any platform.
inline Dataset generate_blobs(std::size_t n_points,
                              const std::vector<Point2D>& centers,
                              double stddev, std::uint64_t seed,
                              std::string name = "blobs") {
  if (centers.empty()) throw std::invalid_argument("generate_blobs: no centers");
  if (!(stddev > 0.0)) throw std::invalid_argument("generate_blobs: stddev must be > 0");
  if (n_points < centers.size() || n_points < 2)
    throw std::invalid_argument("generate_blobs: too few points");
  Dataset out;
  out.name = std::move(name);
  out.points.reserve(n_points);
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < n_points; ++i) {
    const Point2D& c = centers[i % centers.size()];
    const auto [z0, z1] = rng.gaussian_pair();
    out.points.push_back({c.x + stddev * z0, c.y + stddev * z1});
  }
  return out;
}

namespace detail {

inline std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

inline bool parse_double(const std::string& tok, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size() && std::isfinite(out);
}

}  // namespace detail

// CSV: UTF-8, one `x,y` pair per line, optional `x,y` header (auto-detected).
inline Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path.string());
  Dataset out;
  out.name = path.stem().string();
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::string t = detail::trim(line);
    if (row == 1 && t.size() >= 3 && t[0] == '\xEF') t = t.substr(3);  // BOM
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("load_csv: malformed row " + std::to_string(row));
    const std::string xs = detail::trim(t.substr(0, comma));
    const std::string ys = detail::trim(t.substr(comma + 1));
    double x = 0.0, y = 0.0;
    if (!detail::parse_double(xs, x) || !detail::parse_double(ys, y)) {
      std::string lx = xs, ly = ys;
      for (auto& c : lx) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      for (auto& c : ly) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (row == 1 && lx == "x" && ly == "y") continue;  // header
      throw std::runtime_error("load_csv: malformed row " + std::to_string(row));
    }
    out.points.push_back({x, y});
  }
  if (out.points.size() < 2)
    throw std::runtime_error("load_csv: fewer than 2 points in " + path.string());
  return out;
}

// Writes with 17 significant digits so load_csv(save_csv(d)) is exact.
inline void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot write " + path.string());
  out << "x,y\n";
  char buf[80];
  for (const Point2D& p : data.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x, p.y);
    out << buf;
  }
}

// Synthetic stand-in for the 788-point aggregation benchmark: seven Gaussian
// groups of uneven size arranged in two chains. NOT the published dataset
// (see README); group sizes sum to 788 and the geometry is chosen so that
// density clustering at eps 1.2 recovers the seven groups.
inline Dataset make_benchmark_like(std::uint64_t seed = 20240788ULL) {
  struct Group {
    Point2D center;
    std::size_t count;
  };
  const std::vector<Group> groups = {
      {{3.0, 3.0}, 45},  {{9.0, 3.0}, 170},  {{15.0, 3.0}, 102},
      {{21.0, 3.0}, 127}, {{6.0, 10.0}, 273}, {{12.0, 10.0}, 34},
      {{18.0, 10.0}, 37}};
  const double stddev = 0.65;
  Dataset out;
  out.name = "benchmark788";
  Xoshiro256pp rng(seed);
  for (const Group& g : groups) {
    for (std::size_t i = 0; i < g.count; ++i) {
      const auto [z0, z1] = rng.gaussian_pair();
      out.points.push_back({g.center.x + stddev * z0, g.center.y + stddev * z1});
    }
  }
  return out;
}

}  // namespace clagg
