#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "rcm/lattice.hpp"

using namespace rcm;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("box vertex and edge counts") {
  PlanarGraph g0 = build_box(0);
  CHECK(g0.vertex_count() == 1);
  CHECK(g0.edge_count() == 0);

  PlanarGraph g1 = build_box(1);
  CHECK(g1.vertex_count() == 9);
  CHECK(g1.edge_count() == 12);

  PlanarGraph g2 = build_box(2);
  CHECK(g2.vertex_count() == 25);
  CHECK(g2.edge_count() == 40);

  for (int n = 1; n <= 64; n *= 2) {
    PlanarGraph g = build_box(n);
    CHECK(g.vertex_count() == (2 * n + 1) * (2 * n + 1));
    CHECK(g.edge_count() == 2 * (2 * n + 1) * 2 * n);
  }
}

TEST_CASE("box boundary flags and dual structure") {
  PlanarGraph g = build_box(2);
  int nb = 0;
  for (int v = 0; v < g.vertex_count(); ++v) nb += g.boundary[v];
  CHECK(nb == 16);
  REQUIRE(g.has_dual());
  CHECK(g.dual->edge_count() == g.edge_count());
  // dual of Lambda_n has (2n)^2 interior faces plus 8n exterior ones
  CHECK(g.dual->vertex_count() == 16 + 16);
  // dual involution through the index maps
  for (int e = 0; e < g.edge_count(); ++e)
    CHECK(g.dual->dual_edge[g.dual_edge[e]] == e);
  // no duplicated edges
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    CHECK(e.u != e.v);
    auto key = std::minmax(e.u, e.v);
    CHECK(seen.insert({key.first, key.second}).second);
  }
}

TEST_CASE("torus counts and preconditions") {
  PlanarGraph t22 = build_torus(2, 2);
  CHECK(t22.vertex_count() == 4);
  CHECK(t22.edge_count() == 8);
  PlanarGraph t42 = build_torus(4, 2);
  CHECK(t42.vertex_count() == 8);
  CHECK(t42.edge_count() == 16);
  CHECK_THROWS(build_torus(3, 2));
  CHECK_THROWS(build_torus(4, 5));
  for (int L = 2; L <= 64; L *= 2)
    for (int M = 2; M <= 8; M *= 2) {
      PlanarGraph t = build_torus(L, M);
      CHECK(t.vertex_count() == L * M);
      CHECK(t.edge_count() == 2 * L * M);
    }
}

TEST_CASE("black sublattice of the torus") {
  PlanarGraph b = build_torus_black(4, 4);
  CHECK(b.vertex_count() == 8);
  CHECK(b.edge_count() == 16);
  REQUIRE(b.has_dual());
  CHECK(b.dual->vertex_count() == 8);
  CHECK(b.dual->edge_count() == 16);
  // 4-regular
  for (const auto& adj : b.adjacency()) CHECK(adj.size() == 4);
}

TEST_CASE("isoradial window at angle pi/2 is a rotated square lattice") {
  PlanarGraph g = build_isoradial_uniform(kPi / 2, 4, 4);
  CHECK(g.edge_count() == 16);
  for (const auto& e : g.edges) {
    CHECK(e.theta == doctest::Approx(kPi / 2));
    double dx = g.coords[e.u].x - g.coords[e.v].x;
    double dy = g.coords[e.u].y - g.coords[e.v].y;
    CHECK(std::sqrt(dx * dx + dy * dy) == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("isoradial edge lengths at angle pi/3") {
  // the two chord lengths of the rhombic tiling with track angle pi/3 are
  // 2 sin(pi/6) = 1 and 2 cos(pi/6) = sqrt(3)
  PlanarGraph g = build_isoradial_uniform(kPi / 3, 6, 6);
  std::set<long long> lengths;
  for (const auto& e : g.edges) {
    double dx = g.coords[e.u].x - g.coords[e.v].x;
    double dy = g.coords[e.u].y - g.coords[e.v].y;
    lengths.insert(std::llround(1e9 * std::sqrt(dx * dx + dy * dy)));
    // chord length matches the subtended angle
    CHECK(std::sqrt(dx * dx + dy * dy) == doctest::Approx(2 * std::sin(e.theta / 2)));
  }
  CHECK(lengths.size() == 2);
  CHECK(*lengths.begin() == doctest::Approx(1e9).epsilon(1e-6));
  CHECK(*lengths.rbegin() == doctest::Approx(1e9 * std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("alternating window with equal angles is the uniform one") {
  PlanarGraph a = build_isoradial_mix(1.0, 1.0, 3, 4);
  PlanarGraph b = build_isoradial_uniform(1.0, 3, 4);
  CHECK(graph_to_string(a) == graph_to_string(b));
}

TEST_CASE("isoradial angle validation") {
  CHECK_THROWS(build_isoradial({0.5, -0.1}, 3));
  CHECK_THROWS(build_isoradial({3.2}, 3));
}

TEST_CASE("edge weight branches") {
  // theta = pi/2 gives the self-dual point for every q
  for (double q : {1.0, 2.0, 3.0, 4.0, 9.0, 25.0})
    CHECK(edge_weight(kPi / 2, q) == doctest::Approx(self_dual_point(q)).epsilon(1e-14));
  CHECK(edge_weight(kPi / 2, 4.0) == doctest::Approx(2.0 / 3.0));
  CHECK(edge_weight(kPi / 2, 1.0) == doctest::Approx(0.5));
  // continuity across q=4
  for (double theta : {0.3, 1.0, 2.0, 2.8}) {
    double lo = edge_weight(theta, 4.0 - 1e-6);
    double mid = edge_weight(theta, 4.0);
    double hi = edge_weight(theta, 4.0 + 1e-6);
    CHECK(std::abs(lo - mid) < 1e-6);
    CHECK(std::abs(hi - mid) < 1e-6);
  }
  CHECK_THROWS(edge_weight(0.0, 2.0));
  CHECK_THROWS(edge_weight(kPi, 2.0));
}

TEST_CASE("duality relation for edge weights") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(0.05, kPi - 0.05);
  std::uniform_real_distribution<double> qd(1.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    double theta = th(rng), q = qd(rng);
    double y1 = odds(edge_weight(theta, q));
    double y2 = odds(edge_weight(kPi - theta, q));
    CHECK(std::abs(y1 * y2 - q) <= 1e-12 * q);
  }
}

TEST_CASE("dual parameter") {
  CHECK(dual_parameter(0.3, 1.0) == doctest::Approx(0.7));
  CHECK(dual_parameter(0.5, 4.0) == doctest::Approx(0.8));
  double psd = self_dual_point(2.0);
  CHECK(dual_parameter(psd, 2.0) == doctest::Approx(psd).epsilon(1e-14));
  // involution
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pd(0.01, 0.99);
  for (int i = 0; i < 50; ++i) {
    double p = pd(rng), q = 1.0 + 9.0 * pd(rng);
    CHECK(dual_parameter(dual_parameter(p, q), q) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("self dual point values") {
  CHECK(self_dual_point(1.0) == doctest::Approx(0.5));
  CHECK(self_dual_point(4.0) == doctest::Approx(2.0 / 3.0));
  CHECK(self_dual_point(2.0) == doctest::Approx(0.585786437626905));
}

TEST_CASE("isoradial horizontal/vertical relation") {
  // horizontal edges subtend pi - alpha, vertical ones alpha, so
  // p_hor/(1-p_hor) = sqrt(q) sin(r alpha) / sin(r (pi - alpha))
  for (double q : {1.0, 2.0, 3.0}) {
    double r = std::acos(std::sqrt(q) / 2.0) / kPi;
    for (double alpha : {0.4, 1.0, 2.2}) {
      double ph = edge_weight(kPi - alpha, q);
      double pv = edge_weight(alpha, q);
      double expected = std::sqrt(q) * std::sin(r * alpha) / std::sin(r * (kPi - alpha));
      CHECK(odds(ph) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(odds(ph) * odds(pv) == doctest::Approx(q).epsilon(1e-12));
    }
  }
}

TEST_CASE("graph serialization round trip") {
  for (const PlanarGraph& g :
       {build_box(2), build_torus(4, 2), build_isoradial_mix(0.9, 2.0, 3, 4)}) {
    std::string s1 = graph_to_string(g);
    PlanarGraph h = graph_from_string(s1);
    std::string s2 = graph_to_string(h);
    CHECK(s1 == s2);
    CHECK(h.vertex_count() == g.vertex_count());
    CHECK(h.edge_count() == g.edge_count());
    CHECK(graph_hash(g) == graph_hash(h));
  }
}

TEST_CASE("boundary condition validation") {
  PlanarGraph g = build_box(1);
  BoundaryCondition bad;
  bad.blocks = {{4}};  // center vertex of Lambda_1 is not boundary
  bool center_found = false;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.coords[v].x == 0 && g.coords[v].y == 0) {
      bad.blocks = {{v}};
      center_found = true;
    }
  REQUIRE(center_found);
  CHECK_THROWS(bad.validate(g));

  BoundaryCondition wired = BoundaryCondition::wired(g);
  CHECK_NOTHROW(wired.validate(g));
  CHECK(wired.blocks[0].size() == 8);
  CHECK(BoundaryCondition::free_bc().is_free());
}

TEST_CASE("fk params validation") {
  PlanarGraph g = build_box(1);
  CHECK_THROWS(FkParams::uniform(g, 0.0, 2.0));
  CHECK_THROWS(FkParams::uniform(g, 1.0, 2.0));
  CHECK_THROWS(FkParams::uniform(g, 0.5, 0.5));
  FkParams iso = FkParams::isoradial(build_isoradial_uniform(1.0, 3, 3), 2.0);
  for (double p : iso.p) CHECK((p > 0 && p < 1));
}
