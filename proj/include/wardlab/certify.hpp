#ifndef WARDLAB_CERTIFY_HPP
#define WARDLAB_CERTIFY_HPP

#include "wardlab/oracles.hpp"

namespace wardlab {

/// Measured clusterability of a labeled dataset. All quantities use the
/// weighted centroids of the provided labeling as centers (these are the
/// optimal centers for that partition).
struct SeparationCertificate {
  double delta_weak = 0.0;    // min over j of min_i dist(c_j,c_i)/radius_j
  double delta_strong = 0.0;  // min pairwise center distance / max radius
  double alpha = 1.0;         // min over x of other-center/own-center distance
  double nu = 1.0;            // max class-weight ratio
  bool strict_separation = false;
  std::optional<double> eps_separation;
  std::vector<Vec> centers_used;
};

inline SeparationCertificate certify(const Dataset& ds) {
  if (!ds.labels) throw std::invalid_argument("missing labels");
  ds.validate();
  const int k = ds.num_label_classes();
  if (k < 2) throw std::invalid_argument("need at least two label classes");
  const int n = ds.size();
  const std::vector<int>& lab = *ds.labels;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < n; ++i) members[lab[i]].push_back(i);

  SeparationCertificate cert;
  cert.centers_used.resize(k);
  std::vector<double> class_weight(k, 0.0), radius(k, 0.0);
  for (int c = 0; c < k; ++c) {
    const std::vector<WeightedPoint> pts = gather_points(ds, members[c]);
    cert.centers_used[c] = centroid(pts);
    for (const WeightedPoint& p : pts) {
      class_weight[c] += p.weight;
      radius[c] = std::max(radius[c],
                           std::sqrt(squared_distance(p.coords, cert.centers_used[c])));
    }
  }

  std::vector<double> nearest_center(k, inf);
  double min_center_dist = inf;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double dist =
          std::sqrt(squared_distance(cert.centers_used[i], cert.centers_used[j]));
      nearest_center[i] = std::min(nearest_center[i], dist);
      nearest_center[j] = std::min(nearest_center[j], dist);
      min_center_dist = std::min(min_center_dist, dist);
    }

  const double max_radius = *std::max_element(radius.begin(), radius.end());
  cert.delta_strong = max_radius == 0.0 ? inf : min_center_dist / max_radius;
  cert.delta_weak = inf;
  for (int c = 0; c < k; ++c)
    if (radius[c] > 0.0)
      cert.delta_weak = std::min(cert.delta_weak, nearest_center[c] / radius[c]);

  cert.alpha = inf;
  for (int i = 0; i < n; ++i) {
    const double own = std::sqrt(squared_distance(ds.points[i].coords,
                                                  cert.centers_used[lab[i]]));
    if (own == 0.0) continue;  // coincides with its center: contributes +inf
    for (int c = 0; c < k; ++c) {
      if (c == lab[i]) continue;
      const double other =
          std::sqrt(squared_distance(ds.points[i].coords, cert.centers_used[c]));
      cert.alpha = std::min(cert.alpha, other / own);
    }
  }

  const double w_min = *std::min_element(class_weight.begin(), class_weight.end());
  const double w_max = *std::max_element(class_weight.begin(), class_weight.end());
  cert.nu = w_max / w_min;

  cert.strict_separation = true;
  for (int i = 0; i < n && cert.strict_separation; ++i) {
    double same_max = -inf, other_min = inf;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist = squared_distance(ds.points[i].coords, ds.points[j].coords);
      if (lab[j] == lab[i])
        same_max = std::max(same_max, dist);
      else
        other_min = std::min(other_min, dist);
    }
    if (!(same_max < other_min)) cert.strict_separation = false;
  }
  return cert;
}

/// sqrt(opt_k / opt_{k-1}); the smaller the value, the better separated the
/// dataset is at k clusters. Oracles: exhaustive for n <= 14, DP for d = 1.
inline double certify_eps_separation(const Dataset& ds, int k, OracleMethod oracle) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  auto solve = [&](int kk) {
    switch (oracle) {
      case OracleMethod::brute_force: return brute_force_opt(ds, kk).clustering.cost;
      case OracleMethod::dp_1d: return opt_1d_dp(ds, kk).clustering.cost;
      default: throw std::invalid_argument("unsupported oracle");
    }
  };
  const double opt_k = solve(k);
  const double opt_km1 = solve(k - 1);
  if (opt_km1 <= 0.0) throw std::domain_error("degenerate: opt_{k-1} is zero");
  return std::sqrt(std::max(0.0, opt_k) / opt_km1);
}

enum class WardQuality { optimal_recovery, two_approx, no_guarantee };

inline const char* ward_quality_name(WardQuality q) {
  switch (q) {
    case WardQuality::optimal_recovery: return "optimal-recovery";
    case WardQuality::two_approx: return "two-approx";
    default: return "no-guarantee";
  }
}

/// Map a certificate onto the proven guarantees: strong separation above
/// 2+2*sqrt(2*nu) recovers the optimum; weak separation above 2+2*sqrt(2) or
/// proximity above 3+2*sqrt(2) gives a 2-approximation.
inline WardQuality predict_ward_quality(const SeparationCertificate& cert) {
  if (cert.delta_strong > 2.0 + 2.0 * std::sqrt(2.0 * cert.nu))
    return WardQuality::optimal_recovery;
  if (cert.delta_weak > 2.0 + 2.0 * kSqrt2 || cert.alpha > 3.0 + 2.0 * kSqrt2)
    return WardQuality::two_approx;
  return WardQuality::no_guarantee;
}

}  // namespace wardlab

#endif  // WARDLAB_CERTIFY_HPP
