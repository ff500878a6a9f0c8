#ifndef WARDLAB_INSTANCES_HPP
#define WARDLAB_INSTANCES_HPP

#include <random>

#include "wardlab/certify.hpp"
#include "wardlab/core.hpp"

namespace wardlab {

/// z_i^2 = 3^(i-2) / 2^(i-1); both powers are exactly representable for the
/// supported range, so the quotient is exact.
inline double z_squared(int i) {
  if (i < 2) throw std::invalid_argument("z_squared needs i >= 2");
  if (i > 34) throw std::invalid_argument("z_squared argument too large");
  return std::pow(3.0, i - 2) / std::pow(2.0, i - 1);
}

/// Ideal optimal cost of the lower-bound family: 2^d * (2 - sqrt(2))^2.
inline double closed_form_opt(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  const double q = (2.0 - kSqrt2) * (2.0 - kSqrt2);
  return std::pow(2.0, d) * q;
}

/// Ideal Ward cost of the lower-bound family at k = 2^d:
/// 4 * 3^(d-1) + 2^(d-1) * (2 - sqrt(2))^2 - 2^d.
inline double closed_form_ward(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  const double q = (2.0 - kSqrt2) * (2.0 - kSqrt2);
  return 4.0 * std::pow(3.0, d - 1) + std::pow(2.0, d - 1) * q - std::pow(2.0, d);
}

/// Parameters of the adversarial family. The heavy weight realizes the
/// idealized infinite weight; eps pushes the heavy points outward along the
/// first coordinate so every tie of the idealized run becomes strict.
struct LowerBoundParams {
  int d = 2;
  double heavy_weight = 1e9;
  double eps = 1e-4;

  void validate() const {
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (d > 20) throw std::invalid_argument("d must be <= 20");
    if (!(heavy_weight >= 1e6)) throw std::invalid_argument("heavy_weight must be >= 1e6");
    if (!(eps > 0.0) || eps >= (2.0 - kSqrt2) / 100.0)
      throw std::invalid_argument("eps outside validity window");
  }
};

/// The 2^(d+1)-point family: first coordinate in {±(1+eps)} (heavy, weight W)
/// or {±(sqrt(2)-1)} (light, weight 1); coordinate i in {±z_i} for i >= 2.
/// Planted labels pair each light point with its nearest heavy point.
inline Dataset gen_lowerbound(const LowerBoundParams& params) {
  params.validate();
  const int d = params.d;
  const int tails = 1 << (d - 1);  // sign patterns of coordinates 2..d

  Dataset ds;
  ds.dim = d;
  ds.points.reserve(std::size_t{4} * tails);
  std::vector<int> labels;
  labels.reserve(std::size_t{4} * tails);

  for (int p = 0; p < tails; ++p) {
    Vec tail(d - 1);
    for (int j = 0; j < d - 1; ++j) {
      const double z = std::sqrt(z_squared(j + 2));
      tail[j] = (p >> j) & 1 ? z : -z;
    }
    for (int s = 0; s < 2; ++s) {
      const double sign = s == 0 ? -1.0 : 1.0;
      const int label = 2 * p + s;
      Vec heavy(d), light(d);
      heavy[0] = sign * (1.0 + params.eps);
      light[0] = sign * (kSqrt2 - 1.0);
      for (int j = 0; j < d - 1; ++j) heavy[j + 1] = light[j + 1] = tail[j];
      ds.points.push_back({std::move(heavy), params.heavy_weight});
      labels.push_back(label);
      ds.points.push_back({std::move(light), 1.0});
      labels.push_back(label);
    }
  }
  ds.labels = std::move(labels);
  ds.meta = {{"generator", "lowerbound"},
             {"d", std::to_string(d)},
             {"heavy_weight", std::to_string(params.heavy_weight)},
             {"eps", std::to_string(params.eps)}};
  return ds;
}

/// Whether a point of the lower-bound instance is heavy (weight > 1).
inline bool is_heavy_point(const WeightedPoint& p) { return p.weight > 1.0; }

/// A finite metric with per-point weights (discrete k-median setting).
struct FiniteMetricInstance {
  int n = 0;
  std::vector<std::vector<double>> dist;
  std::vector<double> weights;

  void validate() const {
    if (n < 1 || static_cast<int>(dist.size()) != n ||
        static_cast<int>(weights.size()) != n)
      throw std::invalid_argument("metric invariant violation: bad sizes");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(dist[i].size()) != n)
        throw std::invalid_argument("metric invariant violation: bad row");
      if (dist[i][i] != 0.0)
        throw std::invalid_argument("metric invariant violation: nonzero diagonal");
      if (!(weights[i] > 0.0))
        throw std::invalid_argument("metric invariant violation: nonpositive weight");
      for (int j = 0; j < n; ++j) {
        if (!(dist[i][j] >= 0.0) || dist[i][j] != dist[j][i])
          throw std::invalid_argument("metric invariant violation: asymmetry");
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          if (dist[i][j] > dist[i][l] + dist[l][j] + 1e-12)
            throw std::invalid_argument("metric invariant violation: triangle inequality");
  }
};

/// Weighted star: center (weight 1) at unit distance from three outer points
/// (weight 2); outer-outer distances are shortest paths (= 2).
inline FiniteMetricInstance star_graph_instance() {
  FiniteMetricInstance inst;
  inst.n = 4;
  inst.weights = {1.0, 2.0, 2.0, 2.0};
  inst.dist.assign(4, std::vector<double>(4, 2.0));
  for (int i = 0; i < 4; ++i) inst.dist[i][i] = 0.0;
  for (int i = 1; i < 4; ++i) inst.dist[0][i] = inst.dist[i][0] = 1.0;
  return inst;
}

/// Unit-side equilateral triangle in the plane.
inline Dataset triangle_instance() {
  Dataset ds;
  ds.dim = 2;
  ds.points = {{{0.0, 0.0}, 1.0},
               {{1.0, 0.0}, 1.0},
               {{0.5, std::sqrt(3.0) / 2.0}, 1.0}};
  ds.meta = {{"generator", "triangle"}};
  return ds;
}

enum class RandomDistribution { uniform_cube, gaussian, mixture };

inline const char* distribution_name(RandomDistribution d) {
  switch (d) {
    case RandomDistribution::uniform_cube: return "uniform-cube";
    case RandomDistribution::gaussian: return "gaussian";
    default: return "mixture";
  }
}

/// Unit-weight random points; mixture attaches planted labels.
inline Dataset gen_random(int n, int d, std::uint64_t seed, RandomDistribution dist,
                          int components = 3) {
  if (n < 2) throw std::invalid_argument("need at least two points");
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset ds;
  ds.dim = d;
  ds.points.reserve(n);
  ds.meta = {{"generator", "random"},
             {"distribution", distribution_name(dist)},
             {"n", std::to_string(n)},
             {"seed", std::to_string(seed)}};

  if (dist == RandomDistribution::mixture) {
    const int comp = std::min(std::max(components, 1), n);
    std::vector<Vec> centers(comp, Vec(d));
    for (auto& c : centers)
      for (double& x : c) x = 10.0 * unit(rng);
    std::vector<int> labels(n);
    std::uniform_int_distribution<int> pick(0, comp - 1);
    for (int i = 0; i < n; ++i) {
      // Pin the first `comp` points one per component so no class is empty.
      const int c = i < comp ? i : pick(rng);
      labels[i] = c;
      Vec x(d);
      for (int j = 0; j < d; ++j) x[j] = centers[c][j] + 0.5 * normal(rng);
      ds.points.push_back({std::move(x), 1.0});
    }
    ds.labels = std::move(labels);
    ds.meta["components"] = std::to_string(comp);
    return ds;
  }

  for (int i = 0; i < n; ++i) {
    Vec x(d);
    for (int j = 0; j < d; ++j)
      x[j] = dist == RandomDistribution::uniform_cube ? unit(rng) : normal(rng);
    ds.points.push_back({std::move(x), 1.0});
  }
  return ds;
}

/// Certified well-separated instance: sizes[i] unit-weight points uniform in
/// a unit ball around center gamma_i; centers are laid out deterministically
/// on a line and their spacing is rescaled (offsets fixed) until the measured
/// separation of the planted labeling reaches target_delta. `target_strong`
/// selects which measured delta (strong vs weak) has to reach the target.
inline Dataset gen_separated(int k, int d, const std::vector<int>& sizes,
                             double target_delta, std::uint64_t seed,
                             bool target_strong = false) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  if (static_cast<int>(sizes.size()) != k) throw std::invalid_argument("sizes/k mismatch");
  for (int s : sizes)
    if (s < 1) throw std::invalid_argument("cluster sizes must be positive");
  if (!(target_delta > 0.0)) throw std::invalid_argument("target_delta must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto unit_ball = [&]() {
    Vec v(d);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& x : v) {
        x = normal(rng);
        norm2 += x * x;
      }
    } while (norm2 == 0.0);
    const double r = std::pow(unit(rng), 1.0 / d) / std::sqrt(norm2);
    for (double& x : v) x *= r;
    return v;
  };

  std::vector<Vec> offsets;
  std::vector<int> labels;
  for (int c = 0; c < k; ++c)
    for (int s = 0; s < sizes[c]; ++s) {
      offsets.push_back(unit_ball());
      labels.push_back(c);
    }

  double spacing = target_delta + 2.0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Dataset ds;
    ds.dim = d;
    ds.labels = labels;
    ds.points.reserve(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      Vec x = offsets[i];
      x[0] += spacing * labels[i];
      ds.points.push_back({std::move(x), 1.0});
    }
    const SeparationCertificate cert = certify(ds);
    const double measured = target_strong ? cert.delta_strong : cert.delta_weak;
    if (measured >= target_delta) {
      ds.meta = {{"generator", "separated"},
                 {"k", std::to_string(k)},
                 {"target_delta", std::to_string(target_delta)},
                 {"target", target_strong ? "strong" : "weak"},
                 {"seed", std::to_string(seed)},
                 {"spacing", std::to_string(spacing)}};
      return ds;
    }
    spacing *= 1.5;
  }
  throw std::runtime_error("separated instance generation did not reach the target margin");
}

}  // namespace wardlab

#endif  // WARDLAB_INSTANCES_HPP
