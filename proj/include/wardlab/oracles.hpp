#ifndef WARDLAB_ORACLES_HPP
#define WARDLAB_ORACLES_HPP

#include <random>

#include "wardlab/ward.hpp"

namespace wardlab {

enum class OracleMethod { brute_force, dp_1d, closed_form };

struct OracleResult {
  Clustering clustering;
  OracleMethod method = OracleMethod::brute_force;
  std::uint64_t work = 0;  // candidate partitions / DP cells evaluated
};

namespace detail {

// Mutable per-block statistics for the partition search.
// Delta(block) = T - ||S||^2 / W with S = sum w x, T = sum w ||x||^2.
struct BlockStats {
  double weight = 0.0;
  Vec coord_sum;
  double sq_sum = 0.0;
  int count = 0;

  double delta() const {
    if (count == 0) return 0.0;
    double s2 = 0.0;
    for (double s : coord_sum) s2 += s * s;
    return std::max(0.0, sq_sum - s2 / weight);
  }
};

struct BruteForceSearch {
  const Dataset& ds;
  int n, k;
  std::vector<BlockStats> blocks;
  std::vector<int> assignment;
  std::vector<int> best_assignment;
  double best_cost = std::numeric_limits<double>::infinity();
  double current_cost = 0.0;
  std::uint64_t completed = 0;

  BruteForceSearch(const Dataset& d, int k_) : ds(d), n(d.size()), k(k_) {
    blocks.assign(k, BlockStats{});
    for (auto& b : blocks) b.coord_sum.assign(ds.dim, 0.0);
    assignment.assign(n, -1);
  }

  // Adds point i to block b; returns the Delta increase.
  double push(int i, int b) {
    BlockStats& blk = blocks[b];
    const double before = blk.delta();
    const WeightedPoint& p = ds.points[i];
    blk.weight += p.weight;
    double sq = 0.0;
    for (int j = 0; j < ds.dim; ++j) {
      blk.coord_sum[j] += p.weight * p.coords[j];
      sq += p.coords[j] * p.coords[j];
    }
    blk.sq_sum += p.weight * sq;
    ++blk.count;
    return blk.delta() - before;
  }

  void pop(int i, int b) {
    BlockStats& blk = blocks[b];
    const WeightedPoint& p = ds.points[i];
    blk.weight -= p.weight;
    double sq = 0.0;
    for (int j = 0; j < ds.dim; ++j) {
      blk.coord_sum[j] -= p.weight * p.coords[j];
      sq += p.coords[j] * p.coords[j];
    }
    blk.sq_sum -= p.weight * sq;
    --blk.count;
  }

  // Restricted-growth enumeration with branch-and-bound on the partial cost.
  void recurse(int i, int used) {
    if (i == n) {
      ++completed;
      if (used == k && current_cost < best_cost) {
        best_cost = current_cost;
        best_assignment = assignment;
      }
      return;
    }
    if (used + (n - i) < k) return;  // cannot fill all k blocks
    const int limit = std::min(used + 1, k);
    for (int b = 0; b < limit; ++b) {
      const double inc = push(i, b);
      current_cost += inc;
      assignment[i] = b;
      if (current_cost < best_cost) recurse(i + 1, std::max(used, b + 1));
      current_cost -= inc;
      pop(i, b);
    }
    assignment[i] = -1;
  }
};

inline Clustering clustering_from_assignment(const Dataset& ds, const std::vector<int>& raw) {
  Clustering cl;
  cl.assignment = canonical_assignment(raw, &cl.k);
  std::vector<std::vector<int>> members(cl.k);
  for (int i = 0; i < ds.size(); ++i) members[cl.assignment[i]].push_back(i);
  std::vector<double> costs(cl.k);
  cl.centers.resize(cl.k);
  for (int c = 0; c < cl.k; ++c) {
    const std::vector<WeightedPoint> pts = gather_points(ds, members[c]);
    cl.centers[c] = centroid(pts);
    costs[c] = cost_to_center(pts, cl.centers[c]);
  }
  cl.cost = pairwise_sum(costs);
  return cl;
}

}  // namespace detail

/// Exact optimum by enumerating all partitions of [n] into exactly k
/// non-empty blocks (restricted-growth strings, branch and bound).
inline OracleResult brute_force_opt(const Dataset& ds, int k) {
  ds.validate();
  const int n = ds.size();
  if (n < 2) throw std::invalid_argument("need at least two points");
  if (n > 14) throw std::invalid_argument("instance too large for brute force");
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");

  detail::BruteForceSearch search(ds, k);
  search.recurse(0, 0);
  OracleResult res;
  res.method = OracleMethod::brute_force;
  res.work = search.completed;
  res.clustering = detail::clustering_from_assignment(ds, search.best_assignment);
  return res;
}

namespace detail {

// Shared 1D DP state: layer[j][i] = optimal cost of clustering the first
// i+1 sorted points into j intervals; split[j][i] = start of the last one.
struct Dp1d {
  std::vector<int> order;  // point indices sorted by coordinate
  std::vector<long double> pw, ps, pt;
  std::vector<std::vector<double>> layer;
  std::vector<std::vector<int>> split;
  std::uint64_t work = 0;

  double interval_cost(int l, int r) const {  // sorted positions l..r inclusive
    const long double w = pw[r + 1] - pw[l];
    const long double s = ps[r + 1] - ps[l];
    const long double t = pt[r + 1] - pt[l];
    return std::max(0.0, static_cast<double>(t - s * s / w));
  }
};

inline Dp1d build_dp_1d(const Dataset& ds, int kmax) {
  const int n = ds.size();
  Dp1d dp;
  dp.order.resize(n);
  for (int i = 0; i < n; ++i) dp.order[i] = i;
  std::sort(dp.order.begin(), dp.order.end(), [&](int a, int b) {
    if (ds.points[a].coords[0] != ds.points[b].coords[0])
      return ds.points[a].coords[0] < ds.points[b].coords[0];
    return a < b;
  });
  dp.pw.assign(n + 1, 0.0L);
  dp.ps.assign(n + 1, 0.0L);
  dp.pt.assign(n + 1, 0.0L);
  for (int i = 0; i < n; ++i) {
    const WeightedPoint& p = ds.points[dp.order[i]];
    dp.pw[i + 1] = dp.pw[i] + p.weight;
    dp.ps[i + 1] = dp.ps[i] + static_cast<long double>(p.weight) * p.coords[0];
    dp.pt[i + 1] = dp.pt[i] + static_cast<long double>(p.weight) * p.coords[0] * p.coords[0];
  }

  dp.layer.assign(kmax + 1, {});
  dp.split.assign(kmax + 1, {});
  dp.layer[1].resize(n);
  for (int i = 0; i < n; ++i) dp.layer[1][i] = dp.interval_cost(0, i);

  for (int j = 2; j <= kmax; ++j) {
    dp.layer[j].assign(n, std::numeric_limits<double>::infinity());
    dp.split[j].assign(n, -1);
    // Divide-and-conquer over the row; the interval cost satisfies the
    // quadrangle inequality so the (largest) argmin is monotone in i.
    // Scanning m downward keeps the largest optimal split, which makes the
    // last interval as short as possible.
    auto fill = [&](auto&& self, int lo, int hi, int opt_lo, int opt_hi) -> void {
      if (lo > hi) return;
      const int mid = lo + (hi - lo) / 2;
      double best = std::numeric_limits<double>::infinity();
      int best_m = -1;
      const int m_hi = std::min(mid - 1, opt_hi);
      const int m_lo = std::max(j - 2, opt_lo);
      for (int m = m_hi; m >= m_lo; --m) {
        ++dp.work;
        const double c = dp.layer[j - 1][m] + dp.interval_cost(m + 1, mid);
        if (c < best) {
          best = c;
          best_m = m;
        }
      }
      dp.layer[j][mid] = best;
      dp.split[j][mid] = best_m;
      self(self, lo, mid - 1, opt_lo, best_m);
      self(self, mid + 1, hi, best_m, opt_hi);
    };
    fill(fill, j - 1, n - 1, j - 2, n - 2);
  }
  return dp;
}

}  // namespace detail

/// Exact 1D optimum through interval DP over the sorted order.
inline OracleResult opt_1d_dp(const Dataset& ds, int k) {
  ds.validate();
  if (ds.dim != 1) throw std::invalid_argument("dimension must be 1");
  const int n = ds.size();
  if (n < 1) throw std::invalid_argument("empty dataset");
  if (n > 100000) throw std::invalid_argument("instance too large for 1d dp");
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");

  detail::Dp1d dp = detail::build_dp_1d(ds, k);
  std::vector<int> raw(n, -1);
  int hi = n - 1;
  for (int j = k; j >= 1; --j) {
    const int lo = (j == 1) ? 0 : dp.split[j][hi] + 1;
    for (int pos = lo; pos <= hi; ++pos) raw[dp.order[pos]] = j - 1;
    hi = lo - 1;
  }
  OracleResult res;
  res.method = OracleMethod::dp_1d;
  res.work = dp.work + static_cast<std::uint64_t>(n);
  res.clustering = detail::clustering_from_assignment(ds, raw);
  return res;
}

/// Optimal 1D costs for every k in 1..kmax at once (no partitions).
inline std::vector<double> opt_1d_cost_table(const Dataset& ds, int kmax) {
  ds.validate();
  if (ds.dim != 1) throw std::invalid_argument("dimension must be 1");
  if (kmax < 1 || kmax > ds.size()) throw std::invalid_argument("k out of range");
  const detail::Dp1d dp = detail::build_dp_1d(ds, kmax);
  std::vector<double> costs(kmax + 1, 0.0);
  for (int j = 1; j <= kmax; ++j) costs[j] = dp.layer[j][ds.size() - 1];
  return costs;
}

/// Weighted k-means cost of a fixed center set (nearest-center assignment).
inline double cost_of_centers(const Dataset& ds, const std::vector<Vec>& centers) {
  if (centers.empty()) throw std::invalid_argument("empty centers");
  for (const Vec& c : centers)
    if (static_cast<int>(c.size()) != ds.dim) throw std::invalid_argument("dimension mismatch");
  std::vector<double> terms(ds.points.size());
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& c : centers)
      best = std::min(best, squared_distance(ds.points[i].coords, c));
    terms[i] = ds.points[i].weight * best;
  }
  return pairwise_sum(terms);
}

struct SeedingResult {
  std::vector<Vec> centers;
  double cost = 0.0;
};

/// k-means++ D^2-sampling on weighted points. First center drawn with
/// probability proportional to w(x), each next proportional to
/// w(x) * min-distance^2 to the chosen set. No Lloyd refinement.
inline SeedingResult kmeanspp_seed(const Dataset& ds, int k, std::uint64_t seed) {
  ds.validate();
  const int n = ds.size();
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (k > n) throw std::invalid_argument("k > n");

  std::mt19937_64 rng(seed);
  auto sample = [&](const std::vector<double>& mass, const std::vector<char>& picked) {
    double total = 0.0;
    for (double m : mass) total += m;
    if (total > 0.0) {
      std::uniform_real_distribution<double> dist(0.0, total);
      const double u = dist(rng);
      double run = 0.0;
      int last_positive = -1;
      for (int i = 0; i < n; ++i) {
        if (mass[i] <= 0.0) continue;
        run += mass[i];
        last_positive = i;
        if (u < run) return i;
      }
      return last_positive;  // guards against rounding at the top end
    }
    for (int i = 0; i < n; ++i)
      if (!picked[i]) return i;
    return 0;
  };

  SeedingResult res;
  std::vector<char> picked(n, 0);
  std::vector<double> mass(n);
  for (int i = 0; i < n; ++i) mass[i] = ds.points[i].weight;
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (int round = 0; round < k; ++round) {
    const int chosen = sample(mass, picked);
    picked[chosen] = 1;
    res.centers.push_back(ds.points[chosen].coords);
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(ds.points[i].coords, res.centers.back()));
      mass[i] = ds.points[i].weight * d2[i];
    }
  }
  res.cost = cost_of_centers(ds, res.centers);
  return res;
}

}  // namespace wardlab

#endif  // WARDLAB_ORACLES_HPP
