#ifndef WARDLAB_CORE_HPP
#define WARDLAB_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wardlab {

using Vec = std::vector<double>;

inline constexpr double kSqrt2 = 1.4142135623730951;

/// A point in R^d with a positive real weight (multiplicity).
struct WeightedPoint {
  Vec coords;
  double weight = 1.0;
};

/// A weighted point set, optionally carrying a planted clustering and
/// free-form provenance (generator name, seed, parameters).
struct Dataset {
  int dim = 0;
  std::vector<WeightedPoint> points;
  std::optional<std::vector<int>> labels;  // class ids in [0, k)
  std::map<std::string, std::string> meta;

  int size() const { return static_cast<int>(points.size()); }

  /// Number of label classes (0 when unlabeled).
  int num_label_classes() const {
    if (!labels || labels->empty()) return 0;
    return *std::max_element(labels->begin(), labels->end()) + 1;
  }

  void validate() const {
    if (dim < 1) throw std::invalid_argument("dataset dimension must be positive");
    for (const WeightedPoint& p : points) {
      if (static_cast<int>(p.coords.size()) != dim)
        throw std::invalid_argument("dimension mismatch in dataset");
      if (!(p.weight > 0.0) || !std::isfinite(p.weight))
        throw std::invalid_argument("point weight must be positive and finite");
      for (double c : p.coords)
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
    }
    if (labels) {
      if (labels->size() != points.size())
        throw std::invalid_argument("label list length mismatch");
      const int k = num_label_classes();
      if (k < 1) throw std::invalid_argument("labels present but empty");
      std::vector<int> count(k, 0);
      for (int l : *labels) {
        if (l < 0 || l >= k) throw std::invalid_argument("label out of range");
        ++count[l];
      }
      for (int c : count)
        if (c == 0) throw std::invalid_argument("empty label class");
    }
  }
};

/// Sufficient statistics of a cluster: total weight, centroid and internal
/// 1-means cost. Merge costs are O(d) given two of these.
struct ClusterSummary {
  double weight = 0.0;
  Vec centroid;
  double internal_cost = 0.0;
  std::vector<int> members;  // sorted indices into the owning Dataset
};

// Pairwise (tree) summation; error grows O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

/// Weighted mean of a non-empty point list.
inline Vec centroid(std::span<const WeightedPoint> pts) {
  if (pts.empty()) throw std::invalid_argument("empty cluster");
  const std::size_t d = pts[0].coords.size();
  std::vector<double> scratch(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].coords.size() != d) throw std::invalid_argument("dimension mismatch");
    scratch[i] = pts[i].weight;
  }
  const double total = pairwise_sum(scratch);
  Vec mu(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < pts.size(); ++i) scratch[i] = pts[i].weight * pts[i].coords[j];
    mu[j] = pairwise_sum(scratch) / total;
  }
  return mu;
}

/// Exact weighted sum of squared distances to a fixed center c.
inline double cost_to_center(std::span<const WeightedPoint> pts, std::span<const double> c) {
  std::vector<double> terms(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    terms[i] = pts[i].weight * squared_distance(pts[i].coords, c);
  return pairwise_sum(terms);
}

/// 1-means cost: weighted squared distances to the centroid.
inline double one_means_cost(std::span<const WeightedPoint> pts) {
  if (pts.empty()) throw std::invalid_argument("empty cluster");
  const Vec mu = centroid(pts);
  return cost_to_center(pts, mu);
}

/// Cost of merging two clusters given only (weight, centroid) pairs:
/// w_a w_b / (w_a + w_b) * ||mu_a - mu_b||^2.
inline double merge_cost(double weight_a, std::span<const double> centroid_a,
                         double weight_b, std::span<const double> centroid_b) {
  return weight_a * weight_b / (weight_a + weight_b) *
         squared_distance(centroid_a, centroid_b);
}

namespace detail {
inline bool members_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) ++i; else ++j;
  }
  return true;
}
}  // namespace detail

/// D(A,B) = Delta(A ∪ B) − Delta(A) − Delta(B), evaluated in O(d) from the
/// summaries. Requires disjoint member sets.
inline double merge_delta(const ClusterSummary& a, const ClusterSummary& b) {
  if (a.centroid.size() != b.centroid.size())
    throw std::invalid_argument("dimension mismatch");
  if (!detail::members_disjoint(a.members, b.members))
    throw std::invalid_argument("non-disjoint merge");
  return merge_cost(a.weight, a.centroid, b.weight, b.centroid);
}

inline ClusterSummary merge_summaries(const ClusterSummary& a, const ClusterSummary& b) {
  const double d = merge_delta(a, b);  // also validates
  ClusterSummary out;
  out.weight = a.weight + b.weight;
  out.centroid.resize(a.centroid.size());
  for (std::size_t j = 0; j < out.centroid.size(); ++j)
    out.centroid[j] = (a.weight * a.centroid[j] + b.weight * b.centroid[j]) / out.weight;
  out.internal_cost = a.internal_cost + b.internal_cost + d;
  out.members.resize(a.members.size() + b.members.size());
  std::merge(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
             out.members.begin());
  return out;
}

inline std::vector<WeightedPoint> gather_points(const Dataset& ds,
                                                std::span<const int> members) {
  std::vector<WeightedPoint> pts;
  pts.reserve(members.size());
  for (int idx : members) {
    if (idx < 0 || idx >= ds.size()) throw std::out_of_range("member index out of range");
    pts.push_back(ds.points[idx]);
  }
  return pts;
}

/// Build a summary from scratch (pairwise summation throughout).
inline ClusterSummary make_summary(const Dataset& ds, std::vector<int> members) {
  if (members.empty()) throw std::invalid_argument("empty cluster");
  std::sort(members.begin(), members.end());
  const std::vector<WeightedPoint> pts = gather_points(ds, members);
  ClusterSummary s;
  s.centroid = centroid(pts);
  s.internal_cost = cost_to_center(pts, s.centroid);
  std::vector<double> w(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) w[i] = pts[i].weight;
  s.weight = pairwise_sum(w);
  s.members = std::move(members);
  return s;
}

/// Content hash over dim, coordinates, weights and labels (FNV-1a 64).
/// Provenance metadata is deliberately excluded.
inline std::uint64_t dataset_digest(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_double = [&](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    mix(bits);
  };
  mix(static_cast<std::uint64_t>(ds.dim));
  mix(static_cast<std::uint64_t>(ds.points.size()));
  for (const WeightedPoint& p : ds.points) {
    for (double c : p.coords) mix_double(c);
    mix_double(p.weight);
  }
  if (ds.labels) {
    mix(1);
    for (int l : *ds.labels) mix(static_cast<std::uint64_t>(l));
  } else {
    mix(0);
  }
  return h;
}

}  // namespace wardlab

#endif  // WARDLAB_CORE_HPP
