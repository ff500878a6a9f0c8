#include <catch_amalgamated.hpp>

#include "testlib/laws.hpp"
#include "testlib/support.hpp"
#include "wardlab/instances.hpp"
#include "wardlab/io.hpp"
#include "wardlab/ward.hpp"

using namespace wardlab;
using Catch::Approx;

namespace {

Dataset line_dataset(std::initializer_list<double> xs) {
  Dataset ds;
  ds.dim = 1;
  for (double x : xs) ds.points.push_back({{x}, 1.0});
  return ds;
}

Dataset random_unit_dataset(std::uint64_t seed, int n, int d) {
  return gen_random(n, d, seed, RandomDistribution::gaussian);
}

}  // namespace

TEST_CASE("reference engine on {0,1,4,5}") {
  const Dataset ds = line_dataset({0, 1, 4, 5});
  const Dendrogram dg = ward_reference(ds);
  REQUIRE(dg.merges.size() == 3);

  // Ties at cost 0.5 break to the smallest id pair: {0,1} before {4,5}.
  CHECK(dg.merges[0].cost == Approx(0.5));
  CHECK(dg.merges[0].left_id == 0);
  CHECK(dg.merges[0].right_id == 1);
  CHECK(dg.merges[1].cost == Approx(0.5));
  CHECK(dg.merges[1].left_id == 2);
  CHECK(dg.merges[1].right_id == 3);

  // Final merge cost, derived from the direct Delta oracle:
  // D({0,1},{4,5}) = Delta{0,1,4,5} - Delta{0,1} - Delta{4,5}.
  const double oracle =
      one_means_cost(ds.points) -
      one_means_cost(gather_points(ds, std::vector<int>{0, 1})) -
      one_means_cost(gather_points(ds, std::vector<int>{2, 3}));
  CHECK(oracle == Approx(16.0));
  CHECK(dg.merges[2].cost == Approx(oracle).epsilon(1e-12));
}

TEST_CASE("two coincident points merge at cost zero") {
  Dataset ds;
  ds.dim = 2;
  ds.points = {{{1.0, 1.0}, 1.0}, {{1.0, 1.0}, 1.0}};
  for (Engine e : {Engine::reference_greedy, Engine::nn_chain}) {
    const Dendrogram dg = run_engine(ds, e);
    REQUIRE(dg.merges.size() == 1);
    CHECK(dg.merges[0].cost == 0.0);
  }
}

TEST_CASE("adversarial instance starts with light-pair merges") {
  const Dataset ds = gen_lowerbound({2});
  const Dendrogram dg = ward_reference(ds);
  const double q = (2.0 - kSqrt2) * (2.0 - kSqrt2);
  CHECK(dg.merges[0].cost == Approx(q).epsilon(1e-3));
  CHECK(dg.merges[1].cost == Approx(q).epsilon(1e-3));
}

TEST_CASE("engines encode the same hierarchy") {
  SECTION("n = 2") {
    const Dataset ds = line_dataset({3, 9});
    const Dendrogram a = ward_reference(ds);
    const Dendrogram b = ward_nn_chain(ds);
    REQUIRE(a.merges.size() == 1);
    REQUIRE(b.merges.size() == 1);
    CHECK(a.merges[0].cost == Approx(b.merges[0].cost));
  }

  SECTION("random datasets") {
    for (int t = 0; t < 25; ++t) {
      const int n = 10 + (t * 7) % 51;
      const int d = 1 + t % 3;
      const Dataset ds = random_unit_dataset(900 + t, n, d);
      const Dendrogram ref = ward_reference(ds);
      const Dendrogram chain = ward_nn_chain(ds);
      CHECK(testsupport::equal_partitions_all_levels(ref, chain));
      CHECK(testsupport::equal_cost_multisets(ref, chain));
    }
  }
}

TEST_CASE("extract_clustering levels") {
  const Dataset ds = random_unit_dataset(42, 30, 2);
  const Dendrogram dg = ward_reference(ds);

  const Clustering top = extract_clustering(dg, ds, 1);
  CHECK(top.k == 1);
  CHECK(top.cost == Approx(one_means_cost(ds.points)).epsilon(1e-9));

  const Clustering bottom = extract_clustering(dg, ds, 30);
  CHECK(bottom.cost == 0.0);
  CHECK(bottom.k == 30);

  CHECK_THROWS_WITH(extract_clustering(dg, ds, 0),
                    Catch::Matchers::ContainsSubstring("k out of range"));
  CHECK_THROWS_WITH(extract_clustering(dg, ds, 31),
                    Catch::Matchers::ContainsSubstring("k out of range"));

  SECTION("cost telescoping at every level") {
    for (int k = 1; k <= 30; ++k) {
      const Clustering cl = extract_clustering(dg, ds, k);
      CHECK(cl.cost == Approx(level_cost_from_merges(dg, k)).margin(1e-9));
    }
    CHECK(check_telescoping(dg, ds));
  }
}

TEST_CASE("adversarial level cost matches the closed form") {
  const Dataset ds = gen_lowerbound({2});
  const Dendrogram dg = ward_reference(ds);
  const Clustering cl = extract_clustering(dg, ds, 4);
  CHECK(cl.cost == Approx(20.0 - 8.0 * kSqrt2).epsilon(0.01));
}

TEST_CASE("monotonicity of reference merges") {
  for (int t = 0; t < 100; ++t) {
    const int d = std::vector<int>{1, 2, 5, 10}[t % 4];
    const Dataset ds = random_unit_dataset(100 + t, 12 + (t * 5) % 60, d);
    const Dendrogram dg = ward_reference(ds);
    INFO("t=" << t);
    CHECK(is_monotone(dg));
  }
}

TEST_CASE("greedy local optimality by replay") {
  const Dataset ds = random_unit_dataset(77, 12, 2);
  const Dendrogram dg = ward_reference(ds);
  // Rebuild the active set at each step and compare the performed merge
  // against every feasible pair.
  std::vector<ClusterSummary> nodes;
  std::vector<char> alive(2 * ds.size() - 1, 0);
  for (int i = 0; i < ds.size(); ++i) {
    nodes.push_back(make_summary(ds, {i}));
    alive[i] = 1;
  }
  for (const MergeRecord& m : dg.merges) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (alive[i] && alive[j]) best = std::min(best, merge_delta(nodes[i], nodes[j]));
    CHECK(m.cost <= best + 1e-12 * std::max(1.0, best));
    nodes.push_back(merge_summaries(nodes[m.left_id], nodes[m.right_id]));
    alive[m.left_id] = alive[m.right_id] = 0;
    alive[m.new_id] = 1;
  }
}

TEST_CASE("every cluster id is consumed at most once") {
  const Dataset ds = random_unit_dataset(3, 40, 3);
  for (Engine e : {Engine::reference_greedy, Engine::nn_chain}) {
    const Dendrogram dg = run_engine(ds, e);
    std::vector<int> consumed(2 * ds.size() - 1, 0);
    for (const MergeRecord& m : dg.merges) {
      CHECK(m.left_id != m.right_id);
      CHECK(m.new_id == ds.size() + (&m - dg.merges.data()));
      ++consumed[m.left_id];
      ++consumed[m.right_id];
    }
    for (int c : consumed) CHECK(c <= 1);
  }
}

TEST_CASE("1d convexity") {
  SECTION("reference runs always pass") {
    for (int t = 0; t < 20; ++t) {
      const Dataset ds = random_unit_dataset(500 + t, 25, 1);
      const Dendrogram dg = ward_reference(ds);
      CHECK(verify_1d_convexity(dg, ds).pass);
    }
  }

  SECTION("hand-built violation fails") {
    const Dataset ds = line_dataset({0, 5, 10});
    Dendrogram bad;
    bad.n_leaves = 3;
    bad.engine = Engine::reference_greedy;
    // Joins {0} and {10} while {5} exists.
    bad.merges.push_back({0, 2, 3, 50.0, 2.0, 50.0});
    bad.merges.push_back({1, 3, 4, 0.0, 3.0, 50.0});
    const ConvexityReport report = verify_1d_convexity(bad, ds);
    CHECK_FALSE(report.pass);
    CHECK(report.violation_index == 0);
  }

  SECTION("single merge passes") {
    const Dataset ds = line_dataset({1, 2});
    CHECK(verify_1d_convexity(ward_reference(ds), ds).pass);
  }

  SECTION("dimension guard") {
    const Dataset ds = random_unit_dataset(9, 10, 2);
    CHECK_THROWS_AS(verify_1d_convexity(ward_reference(ds), ds), std::invalid_argument);
  }
}

TEST_CASE("engines are deterministic") {
  const Dataset ds = random_unit_dataset(31337, 50, 3);
  for (Engine e : {Engine::reference_greedy, Engine::nn_chain}) {
    const std::string once = dendrogram_to_json(run_engine(ds, e));
    const std::string twice = dendrogram_to_json(run_engine(ds, e));
    CHECK(once == twice);
  }
}

TEST_CASE("engine input guards") {
  Dataset tiny;
  tiny.dim = 1;
  tiny.points = {{{0.0}, 1.0}};
  CHECK_THROWS_AS(ward_reference(tiny), std::invalid_argument);
  CHECK_THROWS_AS(ward_nn_chain(tiny), std::invalid_argument);

  Dataset broken;
  broken.dim = 2;
  broken.points = {{{0.0, 0.0}, 1.0}, {{1.0}, 1.0}};
  CHECK_THROWS_AS(ward_reference(broken), std::invalid_argument);
}
