#ifndef WARDLAB_TESTS_SUPPORT_HPP
#define WARDLAB_TESTS_SUPPORT_HPP

// Helpers shared between the unit tests and the acceptance harness.

#include <algorithm>
#include <map>
#include <vector>

#include "wardlab/ward.hpp"

namespace testsupport {

using wardlab::Dataset;
using wardlab::Dendrogram;

// Canonical (first-occurrence) relabeling of an assignment vector.
inline std::vector<int> canon(const std::vector<int>& raw) {
  std::vector<int> out(raw.size());
  std::map<int, int> rank;
  for (std::size_t i = 0; i < raw.size(); ++i)
    out[i] = rank.emplace(raw[i], static_cast<int>(rank.size())).first->second;
  return out;
}

// Incremental union-find view of a dendrogram: canonical assignment after
// each merge in O(n alpha) per level.
class LevelReplay {
 public:
  explicit LevelReplay(const Dendrogram& dg)
      : dg_(dg), parent_(dg.n_leaves), leaf_of_(2 * dg.n_leaves - 1, -1), step_(0) {
    for (int i = 0; i < dg.n_leaves; ++i) {
      parent_[i] = i;
      leaf_of_[i] = i;
    }
  }

  void advance() {  // apply the next merge
    const wardlab::MergeRecord& m = dg_.merges[step_];
    const int ra = find(leaf_of_[m.left_id]);
    const int rb = find(leaf_of_[m.right_id]);
    parent_[rb] = ra;
    leaf_of_[m.new_id] = ra;
    ++step_;
  }

  std::vector<int> assignment() {
    std::vector<int> raw(dg_.n_leaves);
    for (int i = 0; i < dg_.n_leaves; ++i) raw[i] = find(i);
    return canon(raw);
  }

 private:
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  const Dendrogram& dg_;
  std::vector<int> parent_;
  std::vector<int> leaf_of_;
  std::size_t step_;
};

// True iff the two dendrograms induce identical partitions at every level.
inline bool equal_partitions_all_levels(const Dendrogram& a, const Dendrogram& b) {
  if (a.n_leaves != b.n_leaves) return false;
  LevelReplay ra(a), rb(b);
  for (int t = 0; t < a.n_leaves - 1; ++t) {
    ra.advance();
    rb.advance();
    if (ra.assignment() != rb.assignment()) return false;
  }
  return true;
}

// True iff the sorted merge-cost multisets agree within rel tolerance.
inline bool equal_cost_multisets(const Dendrogram& a, const Dendrogram& b,
                                 double rel = 1e-9) {
  if (a.merges.size() != b.merges.size()) return false;
  std::vector<double> ca, cb;
  for (const auto& m : a.merges) ca.push_back(m.cost);
  for (const auto& m : b.merges) cb.push_back(m.cost);
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (std::abs(ca[i] - cb[i]) > rel * std::max(1.0, std::abs(ca[i]))) return false;
  return true;
}

// Member lists of every dendrogram node (leaves and internal).
inline std::vector<std::vector<int>> node_members(const Dendrogram& dg) {
  std::vector<std::vector<int>> members(2 * dg.n_leaves - 1);
  for (int i = 0; i < dg.n_leaves; ++i) members[i] = {i};
  for (const auto& m : dg.merges) {
    std::vector<int> u(members[m.left_id].size() + members[m.right_id].size());
    std::merge(members[m.left_id].begin(), members[m.left_id].end(),
               members[m.right_id].begin(), members[m.right_id].end(), u.begin());
    members[m.new_id] = std::move(u);
  }
  return members;
}

}  // namespace testsupport

#endif  // WARDLAB_TESTS_SUPPORT_HPP
