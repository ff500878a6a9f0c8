#ifndef WARDLAB_KMEDIAN_HPP
#define WARDLAB_KMEDIAN_HPP

#include <tuple>

#include "wardlab/instances.hpp"

namespace wardlab {

/// Sum of weighted (unsquared) distances to a center.
inline double median_objective(std::span<const WeightedPoint> pts, std::span<const double> c) {
  double s = 0.0;
  for (const WeightedPoint& p : pts)
    s += p.weight * std::sqrt(squared_distance(p.coords, c));
  return s;
}

struct WeiszfeldFailure : std::runtime_error {
  Vec best_iterate;
  double objective;
  WeiszfeldFailure(Vec b, double o)
      : std::runtime_error("geometric median did not converge"),
        best_iterate(std::move(b)),
        objective(o) {}
};

namespace detail {

// Pull of the remaining points on data point pts[j]: R_j = sum over points
// not coincident with pts[j] of w_i (x_i - x_j)/||x_i - x_j||, plus the
// coincident mass. x_j is a global 1-median iff ||R_j|| <= coincident mass.
inline std::pair<double, double> vertex_pull(std::span<const WeightedPoint> pts,
                                             std::size_t j, double coincide_radius) {
  const Vec& x = pts[j].coords;
  Vec r(x.size(), 0.0);
  double mass_here = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dist = std::sqrt(squared_distance(pts[i].coords, x));
    if (dist <= coincide_radius) {
      mass_here += pts[i].weight;
      continue;
    }
    for (std::size_t c = 0; c < x.size(); ++c)
      r[c] += pts[i].weight * (pts[i].coords[c] - x[c]) / dist;
  }
  double r_norm = 0.0;
  for (double v : r) r_norm += v * v;
  return {std::sqrt(r_norm), mass_here};
}

// Gradient state of the median objective at y (points inside the coincidence
// radius contribute the resistance mass eta instead of a 1/dist term).
struct MedianState {
  double eta = 0.0;     // coincident weight
  double inv_sum = 0.0; // sum of w/d over the rest
  Vec target;           // Weiszfeld target T(y)
  Vec pull;             // r = sum w (x - y)/d = -(smooth part of grad f)
  double pull_norm = 0.0;
};

inline MedianState median_state(std::span<const WeightedPoint> pts, const Vec& y,
                                double coincide_radius) {
  MedianState s;
  const std::size_t d = y.size();
  Vec t(d, 0.0);
  s.pull.assign(d, 0.0);
  for (const WeightedPoint& p : pts) {
    const double dist = std::sqrt(squared_distance(p.coords, y));
    if (dist <= coincide_radius) {
      s.eta += p.weight;
      continue;
    }
    const double c = p.weight / dist;
    s.inv_sum += c;
    for (std::size_t j = 0; j < d; ++j) {
      t[j] += c * p.coords[j];
      s.pull[j] += c * (p.coords[j] - y[j]);
    }
  }
  double n2 = 0.0;
  for (double v : s.pull) n2 += v * v;
  s.pull_norm = std::sqrt(n2);
  if (s.inv_sum > 0.0) {
    s.target.resize(d);
    for (std::size_t j = 0; j < d; ++j) s.target[j] = t[j] / s.inv_sum;
  }
  return s;
}

// Solve (H + ridge I) x = b by partial-pivot elimination; d is tiny.
inline bool solve_spd_small(std::vector<Vec> h, Vec b, Vec& out) {
  const std::size_t d = b.size();
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) trace += h[i][i];
  const double ridge = 1e-12 * (trace / static_cast<double>(d)) + 1e-300;
  for (std::size_t i = 0; i < d; ++i) h[i][i] += ridge;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t rowi = col + 1; rowi < d; ++rowi)
      if (std::abs(h[rowi][col]) > std::abs(h[piv][col])) piv = rowi;
    if (h[piv][col] == 0.0) return false;
    std::swap(h[piv], h[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t rowi = col + 1; rowi < d; ++rowi) {
      const double factor = h[rowi][col] / h[col][col];
      for (std::size_t c = col; c < d; ++c) h[rowi][c] -= factor * h[col][c];
      b[rowi] -= factor * b[col];
    }
  }
  out.assign(d, 0.0);
  for (std::size_t i = d; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < d; ++c) s -= h[i][c] * out[c];
    out[i] = s / h[i][i];
  }
  return true;
}

}  // namespace detail

/// Continuous 1-median center. A vertex-optimality certificate is tested for
/// every data point first (the median of a 1D or collinear set always sits on
/// a point, and ||R_j|| <= w_j is an exact global test). Interior optima are
/// found by Vardi-Zhang iterations with a damped-Newton polish; the loop
/// stops once the subgradient-residual bound certifies the objective is
/// within `tol` of the optimum. Singletons and pairs use closed forms.
/// `objective_trace`, when given, records the objective after every step.
inline Vec geometric_median(std::span<const WeightedPoint> pts, double tol,
                            std::vector<double>* objective_trace = nullptr) {
  if (pts.empty()) throw std::invalid_argument("empty cluster");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (pts.size() == 1) return pts[0].coords;
  if (pts.size() == 2) {
    if (pts[0].weight > pts[1].weight) return pts[0].coords;
    if (pts[1].weight > pts[0].weight) return pts[1].coords;
    Vec mid(pts[0].coords.size());
    for (std::size_t j = 0; j < mid.size(); ++j)
      mid[j] = 0.5 * (pts[0].coords[j] + pts[1].coords[j]);
    return mid;
  }

  const std::size_t d = pts[0].coords.size();
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      diam = std::max(diam, squared_distance(pts[i].coords, pts[j].coords));
  diam = std::sqrt(diam);
  if (diam == 0.0) return pts[0].coords;
  const double coincide = 1e-13 * diam;

  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto [pull, mass] = detail::vertex_pull(pts, j, coincide);
    if (pull <= mass) return pts[j].coords;
  }

  // No data point is optimal: the optimum is strictly interior and the
  // objective is smooth in a neighborhood of it.
  Vec y = centroid(pts);
  double f = median_objective(pts, y);
  if (objective_trace) objective_trace->push_back(f);
  int budget = 10000;
  while (budget > 0) {
    // Vardi-Zhang sweep.
    for (int it = 0; it < 200 && budget > 0; ++it, --budget) {
      const detail::MedianState s = detail::median_state(pts, y, coincide);
      if (s.inv_sum == 0.0) return y;
      if (s.eta > 0.0 && s.pull_norm <= s.eta) return y;
      // f(y) - f* <= min-norm subgradient * ||y - y*||, both inside the hull.
      if (std::max(0.0, s.pull_norm - s.eta) * diam <= tol) return y;
      const double mix = s.eta > 0.0 ? std::min(1.0, s.eta / s.pull_norm) : 0.0;
      Vec next(d);
      for (std::size_t j = 0; j < d; ++j)
        next[j] = (1.0 - mix) * s.target[j] + mix * y[j];
      f = median_objective(pts, next);
      if (objective_trace) objective_trace->push_back(f);
      y = std::move(next);
    }

    // Damped-Newton polish; Weiszfeld alone contracts at ||R_j||/w_j near a
    // vertex, which stalls when a vertex is almost optimal.
    for (int it = 0; it < 100 && budget > 0; ++it, --budget) {
      const detail::MedianState s = detail::median_state(pts, y, coincide);
      if (s.eta > 0.0) break;  // touching a point: let Vardi-Zhang handle it
      if (s.pull_norm * diam <= tol) return y;

      std::vector<Vec> hess(d, Vec(d, 0.0));
      for (const WeightedPoint& p : pts) {
        const double dist2 = squared_distance(p.coords, y);
        const double dist = std::sqrt(dist2);
        for (std::size_t a = 0; a < d; ++a) {
          hess[a][a] += p.weight / dist;
          for (std::size_t b = 0; b < d; ++b)
            hess[a][b] -= p.weight * (p.coords[a] - y[a]) * (p.coords[b] - y[b]) /
                          (dist2 * dist);
        }
      }
      Vec step;
      if (!detail::solve_spd_small(hess, s.pull, step)) break;
      double slope = 0.0;  // descent rate -g . step = pull . step
      for (std::size_t j = 0; j < d; ++j) slope += s.pull[j] * step[j];
      if (!(slope > 0.0)) break;
      bool moved = false;
      double stretch = 1.0;
      for (int ls = 0; ls < 60; ++ls, stretch *= 0.5) {
        Vec cand(d);
        for (std::size_t j = 0; j < d; ++j) cand[j] = y[j] + stretch * step[j];
        const double fc = median_objective(pts, cand);
        if (fc <= f - 1e-4 * stretch * slope) {
          y = std::move(cand);
          f = fc;
          if (objective_trace) objective_trace->push_back(fc);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }
  throw WeiszfeldFailure(std::move(y), f);
}

enum class MedianSetting { euclidean_continuous, finite_metric_discrete, euclidean_ward };

inline const char* median_setting_name(MedianSetting s) {
  switch (s) {
    case MedianSetting::euclidean_continuous: return "euclidean-continuous";
    case MedianSetting::finite_metric_discrete: return "finite-metric-discrete";
    default: return "euclidean-ward";
  }
}

struct MedianMerge {
  std::vector<int> left;
  std::vector<int> right;
  double cost_increase = 0.0;
};

struct MedianMergeTrace {
  MedianSetting setting = MedianSetting::euclidean_continuous;
  std::vector<MedianMerge> merges;
  double final_cost = 0.0;

  bool monotone() const {
    for (std::size_t i = 1; i < merges.size(); ++i)
      if (merges[i].cost_increase < merges[i - 1].cost_increase - 1e-12) return false;
    return true;
  }
};

namespace detail {

// Greedy agglomeration over an arbitrary cluster-cost functor. Ids follow the
// dendrogram convention (leaves 0..n-1, merge t creates n+t); ties on the
// increase go to the lexicographically smallest id pair.
template <typename CostFn>
MedianMergeTrace greedy_merge_trace(int n, int k_stop, MedianSetting setting, CostFn cost_of) {
  if (n < 2) throw std::invalid_argument("need at least two points");
  if (k_stop < 1 || k_stop >= n) throw std::invalid_argument("k_stop out of range");

  struct Active {
    int id;
    std::vector<int> members;
    double cost;
  };
  std::vector<Active> active;
  active.reserve(n);
  for (int i = 0; i < n; ++i) active.push_back({i, {i}, cost_of(std::vector<int>{i})});

  MedianMergeTrace trace;
  trace.setting = setting;
  int next_id = n;
  while (static_cast<int>(active.size()) > k_stop) {
    auto best_key = std::tuple(std::numeric_limits<double>::infinity(), -1, -1);
    std::size_t bi = 0, bj = 1;
    double best_union_cost = 0.0;
    std::vector<int> best_union;
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        std::vector<int> u(active[i].members.size() + active[j].members.size());
        std::merge(active[i].members.begin(), active[i].members.end(),
                   active[j].members.begin(), active[j].members.end(), u.begin());
        const double union_cost = cost_of(u);
        const double inc = union_cost - active[i].cost - active[j].cost;
        const auto key = std::tuple(inc, std::min(active[i].id, active[j].id),
                                    std::max(active[i].id, active[j].id));
        if (key < best_key) {
          best_key = key;
          bi = i;
          bj = j;
          best_union_cost = union_cost;
          best_union = std::move(u);
        }
      }
    trace.merges.push_back({active[bi].members, active[bj].members, std::get<0>(best_key)});
    active[bi] = {next_id++, std::move(best_union), best_union_cost};
    active.erase(active.begin() + bj);
  }
  double total = 0.0;
  for (const Active& a : active) total += a.cost;
  trace.final_cost = total;
  return trace;
}

}  // namespace detail

/// Greedy k-median agglomeration with continuous (geometric-median) centers.
inline MedianMergeTrace kmedian_greedy_euclidean(const Dataset& ds, int k_stop,
                                                 double tol = 1e-10) {
  ds.validate();
  auto cost_of = [&](const std::vector<int>& members) {
    const std::vector<WeightedPoint> pts = gather_points(ds, members);
    const Vec med = geometric_median(pts, tol);
    return median_objective(pts, med);
  };
  return detail::greedy_merge_trace(ds.size(), k_stop,
                                    MedianSetting::euclidean_continuous, cost_of);
}

/// Greedy k-median agglomeration in a finite metric; candidate centers are
/// all input points (not just cluster members).
inline MedianMergeTrace kmedian_greedy_discrete(const FiniteMetricInstance& inst, int k_stop) {
  inst.validate();
  auto cost_of = [&](const std::vector<int>& members) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < inst.n; ++c) {
      double s = 0.0;
      for (int m : members) s += inst.weights[m] * inst.dist[m][c];
      best = std::min(best, s);
    }
    return best;
  };
  return detail::greedy_merge_trace(inst.n, k_stop,
                                    MedianSetting::finite_metric_discrete, cost_of);
}

/// Ward (squared objective, centroid centers) on the same points, in trace
/// form, as the monotone counterpart of the k-median traces.
inline MedianMergeTrace ward_trace_euclidean(const Dataset& ds, int k_stop) {
  ds.validate();
  auto cost_of = [&](const std::vector<int>& members) {
    const std::vector<WeightedPoint> pts = gather_points(ds, members);
    return cost_to_center(pts, centroid(pts));
  };
  return detail::greedy_merge_trace(ds.size(), k_stop, MedianSetting::euclidean_ward, cost_of);
}

}  // namespace wardlab

#endif  // WARDLAB_KMEDIAN_HPP
