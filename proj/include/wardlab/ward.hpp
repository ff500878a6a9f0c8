#ifndef WARDLAB_WARD_HPP
#define WARDLAB_WARD_HPP

#include <queue>
#include <tuple>

#include "wardlab/core.hpp"

namespace wardlab {

enum class Engine { reference_greedy, nn_chain };

inline const char* engine_name(Engine e) {
  return e == Engine::reference_greedy ? "reference-greedy" : "nn-chain";
}

/// One agglomeration step. Leaves are 0..n-1, the i-th merge creates id n+i.
struct MergeRecord {
  int left_id = -1;
  int right_id = -1;
  int new_id = -1;
  double cost = 0.0;                  // D(left, right)
  double result_weight = 0.0;         // w(left ∪ right)
  double result_internal_cost = 0.0;  // Delta(left ∪ right)
};

/// Ordered record of a full agglomerative run (n-1 merges).
struct Dendrogram {
  int n_leaves = 0;
  std::vector<MergeRecord> merges;
  Engine engine = Engine::reference_greedy;
  std::uint64_t dataset_digest = 0;
};

/// A flat k-partition extracted from a dendrogram level.
struct Clustering {
  int k = 0;
  std::vector<int> assignment;  // per point, cluster index in [0, k)
  double cost = 0.0;            // sum of per-cluster 1-means costs
  std::vector<Vec> centers;
};

namespace detail {

// Engine-internal cluster state; member lists are never materialized here.
struct ClusterNode {
  double weight = 0.0;
  Vec centroid;
  double delta = 0.0;
};

inline ClusterNode leaf_node(const WeightedPoint& p) {
  return ClusterNode{p.weight, p.coords, 0.0};
}

inline ClusterNode merged_node(const ClusterNode& a, const ClusterNode& b, double cost) {
  ClusterNode m;
  m.weight = a.weight + b.weight;
  m.centroid.resize(a.centroid.size());
  for (std::size_t j = 0; j < m.centroid.size(); ++j)
    m.centroid[j] = (a.weight * a.centroid[j] + b.weight * b.centroid[j]) / m.weight;
  m.delta = a.delta + b.delta + cost;
  return m;
}

inline double node_merge_cost(const ClusterNode& a, const ClusterNode& b) {
  return merge_cost(a.weight, a.centroid, b.weight, b.centroid);
}

}  // namespace detail

/// Exact global-greedy Ward run. At every step the pair with minimal D is
/// merged; ties go to the lexicographically smallest (id, id) pair. Priority
/// queue with lazy invalidation: O(n^2 log n) time, O(n^2) queue entries.
inline Dendrogram ward_reference(const Dataset& ds) {
  ds.validate();
  const int n = ds.size();
  if (n < 2) throw std::invalid_argument("need at least two points");

  std::vector<detail::ClusterNode> nodes;
  nodes.reserve(2 * n - 1);
  std::vector<char> alive(2 * n - 1, 0);
  for (int i = 0; i < n; ++i) {
    nodes.push_back(detail::leaf_node(ds.points[i]));
    alive[i] = 1;
  }

  struct Cand {
    double cost;
    int a, b;  // a < b
    bool operator>(const Cand& o) const {
      return std::tie(cost, a, b) > std::tie(o.cost, o.a, o.b);
    }
  };
  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> queue;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      queue.push({detail::node_merge_cost(nodes[i], nodes[j]), i, j});

  Dendrogram dg;
  dg.n_leaves = n;
  dg.engine = Engine::reference_greedy;
  dg.dataset_digest = dataset_digest(ds);
  dg.merges.reserve(n - 1);

  for (int t = 0; t < n - 1; ++t) {
    Cand top;
    do {
      top = queue.top();
      queue.pop();
    } while (!alive[top.a] || !alive[top.b]);

    const int new_id = n + t;
    nodes.push_back(detail::merged_node(nodes[top.a], nodes[top.b], top.cost));
    alive[top.a] = alive[top.b] = 0;
    alive[new_id] = 1;
    dg.merges.push_back({top.a, top.b, new_id, top.cost, nodes[new_id].weight,
                         nodes[new_id].delta});
    for (int c = 0; c < new_id; ++c)
      if (alive[c])
        queue.push({detail::node_merge_cost(nodes[c], nodes[new_id]), c, new_id});
  }
  return dg;
}

/// Nearest-neighbor-chain Ward run: O(n^2) time, O(n) extra memory, no pair
/// matrix. Relies on the reducibility of the Ward update. Emitted merges are
/// sorted by cost and relabeled, so the dendrogram encodes the same hierarchy
/// as ward_reference whenever all pairwise D values are distinct.
inline Dendrogram ward_nn_chain(const Dataset& ds) {
  ds.validate();
  const int n = ds.size();
  if (n < 2) throw std::invalid_argument("need at least two points");

  // Active clusters are keyed by a surviving original point index.
  std::vector<detail::ClusterNode> node(n);
  for (int i = 0; i < n; ++i) node[i] = detail::leaf_node(ds.points[i]);

  // Doubly linked active list over 0..n-1.
  std::vector<int> succ(n + 1), pred(n + 1);
  for (int i = 0; i <= n; ++i) {
    succ[i] = i + 1;
    pred[i] = i - 1;
  }
  int head = 0;
  auto remove = [&](int i) {
    if (i == head) {
      head = succ[i];
    } else {
      succ[pred[i]] = succ[i];
      if (succ[i] <= n) pred[succ[i]] = pred[i];
    }
  };

  struct RawMerge {
    int rep_a, rep_b;
    double cost, weight, delta;
  };
  std::vector<RawMerge> raw;
  raw.reserve(n - 1);
  std::vector<int> chain;
  chain.reserve(n);

  while (static_cast<int>(raw.size()) < n - 1) {
    if (chain.empty()) chain.push_back(head);
    for (;;) {
      const int c = chain.back();
      const int prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
      // Nearest active neighbor of c; on ties, prefer the previous chain
      // element (guarantees termination), otherwise the smallest index.
      double best = std::numeric_limits<double>::infinity();
      int best_idx = -1;
      if (prev >= 0) {
        best = detail::node_merge_cost(node[c], node[prev]);
        best_idx = prev;
      }
      for (int j = head; j < n; j = succ[j]) {
        if (j == c || j == prev) continue;
        const double cost = detail::node_merge_cost(node[c], node[j]);
        if (cost < best || (cost == best && best_idx != prev && j < best_idx)) {
          best = cost;
          best_idx = j;
        }
      }
      if (best_idx == prev) {
        // Mutual nearest neighbors: merge c and prev.
        chain.pop_back();
        chain.pop_back();
        const detail::ClusterNode merged = detail::merged_node(node[c], node[prev], best);
        const int keep = std::min(c, prev), drop = std::max(c, prev);
        node[keep] = merged;
        remove(drop);
        raw.push_back({keep, drop, best, merged.weight, merged.delta});
        break;
      }
      chain.push_back(best_idx);
    }
  }

  // Sort by cost (stable keeps child-before-parent for equal costs) and
  // relabel through a union-find over the original point indices.
  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawMerge& a, const RawMerge& b) { return a.cost < b.cost; });

  std::vector<int> parent(n), label(n);
  for (int i = 0; i < n; ++i) {
    parent[i] = i;
    label[i] = i;
  }
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  Dendrogram dg;
  dg.n_leaves = n;
  dg.engine = Engine::nn_chain;
  dg.dataset_digest = dataset_digest(ds);
  dg.merges.reserve(n - 1);
  for (std::size_t t = 0; t < raw.size(); ++t) {
    const int ra = find(raw[t].rep_a), rb = find(raw[t].rep_b);
    int left = label[ra], right = label[rb];
    if (left > right) std::swap(left, right);
    parent[rb] = ra;
    label[ra] = n + static_cast<int>(t);
    dg.merges.push_back({left, right, n + static_cast<int>(t), raw[t].cost,
                         raw[t].weight, raw[t].delta});
  }
  return dg;
}

inline Dendrogram run_engine(const Dataset& ds, Engine e) {
  return e == Engine::reference_greedy ? ward_reference(ds) : ward_nn_chain(ds);
}

namespace detail {

// Roots of all points after the first `steps` merges.
inline std::vector<int> roots_after(const Dendrogram& dg, int steps) {
  const int n = dg.n_leaves;
  std::vector<int> parent(n + steps, -1);
  for (int t = 0; t < steps; ++t) {
    parent[dg.merges[t].left_id] = dg.merges[t].new_id;
    parent[dg.merges[t].right_id] = dg.merges[t].new_id;
  }
  std::vector<int> root(n);
  for (int i = 0; i < n; ++i) {
    int r = i;
    while (r < n + steps && parent[r] >= 0) r = parent[r];
    root[i] = r;
  }
  return root;
}

// Relabel arbitrary cluster ids to [0, k) in order of first appearance.
inline std::vector<int> canonical_assignment(const std::vector<int>& raw, int* k_out = nullptr) {
  std::vector<int> out(raw.size());
  std::map<int, int> rank;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, fresh] = rank.emplace(raw[i], static_cast<int>(rank.size()));
    (void)fresh;
    out[i] = it->second;
  }
  if (k_out) *k_out = static_cast<int>(rank.size());
  return out;
}

}  // namespace detail

/// Partition after the first n-k merges. Cost and centers are recomputed
/// from the raw points.
inline Clustering extract_clustering(const Dendrogram& dg, const Dataset& ds, int k) {
  const int n = dg.n_leaves;
  if (ds.size() != n) throw std::invalid_argument("dendrogram/dataset size mismatch");
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");

  const std::vector<int> root = detail::roots_after(dg, n - k);
  Clustering cl;
  cl.assignment = detail::canonical_assignment(root, &cl.k);
  if (cl.k != k) throw std::logic_error("level does not have k clusters");

  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < n; ++i) members[cl.assignment[i]].push_back(i);
  std::vector<double> costs(k);
  cl.centers.resize(k);
  for (int c = 0; c < k; ++c) {
    const std::vector<WeightedPoint> pts = gather_points(ds, members[c]);
    cl.centers[c] = centroid(pts);
    costs[c] = cost_to_center(pts, cl.centers[c]);
  }
  cl.cost = pairwise_sum(costs);
  return cl;
}

/// Sum of the first n-k merge costs; equals the level-k clustering cost
/// because singleton clusters cost zero.
inline double level_cost_from_merges(const Dendrogram& dg, int k) {
  const int steps = dg.n_leaves - k;
  if (steps < 0 || steps > static_cast<int>(dg.merges.size()))
    throw std::invalid_argument("k out of range");
  std::vector<double> costs(steps);
  for (int t = 0; t < steps; ++t) costs[t] = dg.merges[t].cost;
  return pairwise_sum(costs);
}

inline bool is_monotone(const Dendrogram& dg, double rel_tol = 1e-9) {
  for (std::size_t t = 1; t < dg.merges.size(); ++t) {
    const double prev = dg.merges[t - 1].cost;
    if (dg.merges[t].cost < prev - rel_tol * std::max(1.0, prev)) return false;
  }
  return true;
}

/// Check the telescoping identity sum(first n-k costs) == sum of cluster
/// Deltas at level k, for every k, against from-scratch recomputation.
inline bool check_telescoping(const Dendrogram& dg, const Dataset& ds,
                              double rel_tol = 1e-9) {
  const int n = dg.n_leaves;
  std::vector<std::vector<int>> members(2 * n - 1);
  for (int i = 0; i < n; ++i) members[i] = {i};
  std::vector<double> scratch_delta(2 * n - 1, 0.0);
  double total = 0.0, prefix = 0.0;
  for (int t = 0; t < n - 1; ++t) {
    const MergeRecord& m = dg.merges[t];
    std::vector<int>& a = members[m.left_id];
    std::vector<int>& b = members[m.right_id];
    std::vector<int> u(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), u.begin());
    const std::vector<WeightedPoint> pts = gather_points(ds, u);
    const double delta = cost_to_center(pts, centroid(pts));
    total += delta - scratch_delta[m.left_id] - scratch_delta[m.right_id];
    scratch_delta[m.new_id] = delta;
    members[m.new_id] = std::move(u);
    a.clear();
    b.clear();
    prefix += m.cost;
    if (std::abs(prefix - total) > rel_tol * std::max(1.0, std::abs(total))) return false;
  }
  return true;
}

/// Report for the 1D convexity check (Ward never merges across a cluster).
struct ConvexityReport {
  bool pass = true;
  int violation_index = -1;  // merge index of the first violation
};

/// For 1D data: pass iff no merge joins two clusters while a third existing
/// cluster's centroid lies strictly between their centroids.
inline ConvexityReport verify_1d_convexity(const Dendrogram& dg, const Dataset& ds) {
  if (ds.dim != 1) throw std::invalid_argument("dimension must be 1");
  if (ds.size() != dg.n_leaves) throw std::invalid_argument("dendrogram/dataset size mismatch");
  const int n = dg.n_leaves;
  std::vector<detail::ClusterNode> nodes;
  nodes.reserve(2 * n - 1);
  std::vector<char> alive(2 * n - 1, 0);
  for (int i = 0; i < n; ++i) {
    nodes.push_back(detail::leaf_node(ds.points[i]));
    alive[i] = 1;
  }
  for (std::size_t t = 0; t < dg.merges.size(); ++t) {
    const MergeRecord& m = dg.merges[t];
    const double a = nodes[m.left_id].centroid[0];
    const double b = nodes[m.right_id].centroid[0];
    const double lo = std::min(a, b), hi = std::max(a, b);
    for (int c = 0; c < n + static_cast<int>(t); ++c) {
      if (!alive[c] || c == m.left_id || c == m.right_id) continue;
      const double x = nodes[c].centroid[0];
      if (lo < x && x < hi) return {false, static_cast<int>(t)};
    }
    nodes.push_back(detail::merged_node(nodes[m.left_id], nodes[m.right_id], m.cost));
    alive[m.left_id] = alive[m.right_id] = 0;
    alive[n + static_cast<int>(t)] = 1;
  }
  return {true, -1};
}

}  // namespace wardlab

#endif  // WARDLAB_WARD_HPP
