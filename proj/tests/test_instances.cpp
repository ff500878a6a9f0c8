#include <catch_amalgamated.hpp>

#include "testlib/support.hpp"
#include "wardlab/instances.hpp"
#include "wardlab/io.hpp"
#include "wardlab/oracles.hpp"

using namespace wardlab;
using Catch::Approx;

TEST_CASE("z sequence") {
  CHECK(z_squared(2) == 0.5);
  CHECK(z_squared(3) == 0.75);
  CHECK_THROWS_AS(z_squared(1), std::invalid_argument);

  SECTION("partial sums: 1 + z_2^2 + ... + z_{i-1}^2 = 2 z_i^2") {
    double partial = 1.0;
    for (int i = 2; i <= 20; ++i) {
      CHECK(partial == Approx(2.0 * z_squared(i)).epsilon(1e-12));
      partial += z_squared(i);
    }
  }
}

TEST_CASE("closed forms") {
  const double q = (2.0 - kSqrt2) * (2.0 - kSqrt2);
  CHECK(closed_form_opt(2) == Approx(4.0 * q).epsilon(1e-15));
  CHECK(closed_form_opt(2) == Approx(1.3725830020304788).epsilon(1e-12));
  CHECK(closed_form_opt(3) == Approx(2.0 * closed_form_opt(2)).epsilon(1e-15));
  for (int d = 2; d <= 12; ++d)
    CHECK(closed_form_opt(d + 1) / closed_form_opt(d) == Approx(2.0).epsilon(1e-15));

  CHECK(closed_form_ward(2) == Approx(20.0 - 8.0 * kSqrt2).epsilon(1e-12));
  CHECK(closed_form_ward(3) == Approx(36.0 + 4.0 * q - 8.0).epsilon(1e-12));

  SECTION("ratio matches the expanded expression") {
    for (int d = 2; d <= 12; ++d) {
      const double expanded =
          4.0 / (3.0 * q) * std::pow(1.5, d) + 0.5 - 1.0 / q;
      CHECK(closed_form_ward(d) / closed_form_opt(d) == Approx(expanded).epsilon(1e-12));
    }
    CHECK(closed_form_ward(2) / closed_form_opt(2) == Approx(6.328).epsilon(1e-3));
  }
}

TEST_CASE("lower-bound instance geometry") {
  const LowerBoundParams params{2, 1e9, 1e-4};
  const Dataset ds = gen_lowerbound(params);
  REQUIRE(ds.size() == 8);
  REQUIRE(ds.labels.has_value());
  CHECK(ds.num_label_classes() == 4);
  ds.validate();

  int heavies = 0;
  for (const auto& p : ds.points) {
    CHECK(std::abs(p.coords[1]) == Approx(std::sqrt(0.5)).epsilon(1e-15));
    if (is_heavy_point(p)) {
      ++heavies;
      CHECK(std::abs(p.coords[0]) == Approx(1.0 + params.eps).epsilon(1e-15));
      CHECK(p.weight == 1e9);
    } else {
      CHECK(std::abs(p.coords[0]) == Approx(kSqrt2 - 1.0).epsilon(1e-15));
      CHECK(p.weight == 1.0);
    }
  }
  CHECK(heavies == 4);

  SECTION("each light point sits at 2 - sqrt(2) + eps from its heavy partner") {
    for (int i = 0; i < ds.size(); ++i) {
      if (is_heavy_point(ds.points[i])) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (int j = 0; j < ds.size(); ++j)
        if (is_heavy_point(ds.points[j]))
          nearest = std::min(nearest,
                             std::sqrt(squared_distance(ds.points[i].coords,
                                                        ds.points[j].coords)));
      CHECK(nearest == Approx(2.0 - kSqrt2 + params.eps).epsilon(1e-12));
    }
  }

  SECTION("d = 3 layout") {
    const Dataset d3 = gen_lowerbound({3});
    CHECK(d3.size() == 16);
    for (const auto& p : d3.points)
      CHECK(std::abs(p.coords[2]) == Approx(std::sqrt(0.75)).epsilon(1e-15));
  }

  SECTION("parameter guards") {
    CHECK_THROWS_AS(gen_lowerbound({1}), std::invalid_argument);
    CHECK_THROWS_AS(gen_lowerbound({21}), std::invalid_argument);
    CHECK_THROWS_AS(gen_lowerbound({3, 10.0, 1e-4}), std::invalid_argument);
    CHECK_THROWS_AS(gen_lowerbound({3, 1e9, 0.1}), std::invalid_argument);
  }
}

TEST_CASE("planted cost tracks the closed form") {
  for (int d = 2; d <= 6; ++d) {
    const Dataset ds = gen_lowerbound({d});
    std::vector<std::vector<int>> members(ds.num_label_classes());
    for (int i = 0; i < ds.size(); ++i) members[(*ds.labels)[i]].push_back(i);
    double planted = 0.0;
    for (const auto& m : members) planted += one_means_cost(gather_points(ds, m));
    CHECK(planted == Approx(closed_form_opt(d)).epsilon(0.01));
  }
}

TEST_CASE("adversarial run is forced by the perturbation") {
  for (int d = 2; d <= 4; ++d) {
    const Dataset ds = gen_lowerbound({d});
    const Dendrogram dg = ward_reference(ds);
    const int k = 1 << d;
    const double q = (2.0 - kSqrt2) * (2.0 - kSqrt2);

    // Phase 1: the first 2^(d-1) merges join singleton light points that
    // differ only in the first coordinate, at cost (2-sqrt2)^2.
    for (int t = 0; t < (1 << (d - 1)); ++t) {
      const MergeRecord& m = dg.merges[t];
      CHECK(m.cost == Approx(q).epsilon(0.005));
      REQUIRE(m.left_id < ds.size());
      REQUIRE(m.right_id < ds.size());
      const WeightedPoint& a = ds.points[m.left_id];
      const WeightedPoint& b = ds.points[m.right_id];
      CHECK_FALSE(is_heavy_point(a));
      CHECK_FALSE(is_heavy_point(b));
      CHECK(a.coords[0] == Approx(-b.coords[0]).epsilon(1e-12));
      for (int j = 1; j < d; ++j) CHECK(a.coords[j] == b.coords[j]);
    }

    // No heavy-heavy merge before the level-k clustering is reached.
    const auto members = testsupport::node_members(dg);
    auto has_heavy = [&](int id) {
      for (int i : members[id])
        if (is_heavy_point(ds.points[i])) return true;
      return false;
    };
    for (int t = 0; t < ds.size() - k; ++t) {
      CHECK_FALSE((has_heavy(dg.merges[t].left_id) && has_heavy(dg.merges[t].right_id)));
    }
  }
}

TEST_CASE("separated generator") {
  SECTION("reaches the requested margin") {
    const Dataset ds = gen_separated(2, 1, {3, 3}, 10.0, 1);
    const SeparationCertificate cert = certify(ds);
    CHECK(cert.delta_weak >= 10.0);
    CHECK(cert.nu == Approx(1.0));
  }

  SECTION("strong target") {
    const Dataset ds = gen_separated(3, 2, {4, 4, 4}, 8.0, 5, true);
    CHECK(certify(ds).delta_strong >= 8.0);
  }

  SECTION("balanced sizes give nu = 1") {
    const Dataset ds = gen_separated(3, 2, {4, 4, 4}, 5.0, 2);
    CHECK(certify(ds).nu == Approx(1.0));
  }

  SECTION("planted partition is the brute-force optimum at the theorem margin") {
    const Dataset ds = gen_separated(3, 2, {4, 4, 4}, 2.0 + 2.0 * kSqrt2 + 0.1, 7);
    const OracleResult opt = brute_force_opt(ds, 3);
    const std::vector<int> planted = testsupport::canon(*ds.labels);
    CHECK(opt.clustering.assignment == planted);
  }

  SECTION("deterministic given the seed") {
    const Dataset a = gen_separated(2, 3, {5, 4}, 6.0, 11);
    const Dataset b = gen_separated(2, 3, {5, 4}, 6.0, 11);
    CHECK(dataset_digest(a) == dataset_digest(b));
  }

  SECTION("guards") {
    CHECK_THROWS_AS(gen_separated(1, 2, {4}, 5.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_separated(2, 2, {4}, 5.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_separated(2, 2, {4, 0}, 5.0, 1), std::invalid_argument);
  }
}

TEST_CASE("random generator") {
  SECTION("deterministic and distinct") {
    const Dataset a = gen_random(50, 3, 9, RandomDistribution::uniform_cube);
    const Dataset b = gen_random(50, 3, 9, RandomDistribution::uniform_cube);
    CHECK(dataset_digest(a) == dataset_digest(b));
    CHECK(squared_distance(a.points[0].coords, a.points[1].coords) > 0.0);
  }

  SECTION("mixture attaches labels") {
    const Dataset ds = gen_random(30, 2, 4, RandomDistribution::mixture, 4);
    REQUIRE(ds.labels.has_value());
    CHECK(ds.num_label_classes() == 4);
    ds.validate();
  }

  SECTION("gaussian/uniform carry no labels") {
    CHECK_FALSE(gen_random(10, 1, 1, RandomDistribution::gaussian).labels.has_value());
  }
}

TEST_CASE("star graph instance") {
  const FiniteMetricInstance star = star_graph_instance();
  REQUIRE(star.n == 4);
  CHECK(star.weights == std::vector<double>{1, 2, 2, 2});
  CHECK(star.dist[0] == std::vector<double>{0, 1, 1, 1});
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j)
      CHECK(star.dist[i][j] == (i == j ? 0.0 : 2.0));
  CHECK_NOTHROW(star.validate());  // includes the triangle inequality

  // Bitwise-stable constant.
  const FiniteMetricInstance again = star_graph_instance();
  CHECK(star.dist == again.dist);
  CHECK(star.weights == again.weights);
}

TEST_CASE("triangle instance") {
  const Dataset tri = triangle_instance();
  REQUIRE(tri.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(std::sqrt(squared_distance(tri.points[i].coords, tri.points[j].coords)) ==
            Approx(1.0).margin(1e-12));
  const Vec mu = centroid(tri.points);
  CHECK(mu[0] == Approx(0.5).margin(1e-15));
  CHECK(mu[1] == Approx(std::sqrt(3.0) / 6.0).margin(1e-15));

  const Dataset again = triangle_instance();
  CHECK(dataset_digest(tri) == dataset_digest(again));
}

TEST_CASE("metric validation rejects broken inputs") {
  FiniteMetricInstance bad = star_graph_instance();
  bad.dist[1][2] = 5.0;  // breaks symmetry
  CHECK_THROWS_WITH(bad.validate(),
                    Catch::Matchers::ContainsSubstring("metric invariant violation"));

  FiniteMetricInstance tri_violation = star_graph_instance();
  tri_violation.dist[1][2] = tri_violation.dist[2][1] = 10.0;  // 10 > 1 + 1
  CHECK_THROWS_WITH(tri_violation.validate(),
                    Catch::Matchers::ContainsSubstring("triangle inequality"));
}
