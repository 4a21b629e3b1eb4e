#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "rcm/exact.hpp"
#include "rcm/lattice.hpp"
#include "rcm/loops.hpp"

using namespace rcm;

namespace {
constexpr double kPi = 3.14159265358979323846;

Config random_config(int n, std::mt19937_64& rng) {
  Config c(n);
  for (int e = 0; e < n; ++e) c.set(e, rng() & 1);
  return c;
}
}  // namespace

TEST_CASE("bkw parameters") {
  auto b4 = bkw_params(4.0);
  CHECK(std::abs(b4.lambda) < 1e-14);
  CHECK(b4.c == doctest::Approx(2.0));
  CHECK(b4.delta == doctest::Approx(-1.0));

  auto b1 = bkw_params(1.0);
  CHECK(b1.c == doctest::Approx(std::sqrt(3.0)));
  CHECK(b1.delta == doctest::Approx(-0.5));
  CHECK(b1.kappa == doctest::Approx(6.0));

  auto b2 = bkw_params(2.0);
  CHECK(b2.c == doctest::Approx(std::sqrt(2.0 + std::sqrt(2.0))));

  for (double q : {1.0, 2.0, 3.0, 4.0, 9.0}) {
    auto bp = bkw_params(q);
    CHECK(std::abs(std::exp(bp.lambda) + std::exp(-bp.lambda) - std::sqrt(q)) < 1e-12);
    CHECK(std::abs(bp.c - std::sqrt(2.0 + std::sqrt(q))) < 1e-12);
    CHECK(std::abs(bp.delta - (1.0 - bp.c * bp.c / 2)) < 1e-14);
  }
  CHECK(bkw_params(4.0).kappa == doctest::Approx(4.0));
}

TEST_CASE("six-vertex weights and the ice rule") {
  ArrowConfig all_up(4, 2);
  std::string err;
  CHECK(all_up.ice_rule_ok(&err));
  CHECK(c_vertex_count(all_up) == 0);
  CHECK(six_vertex_weight(all_up, 1.7) == doctest::Approx(1.0));
  auto rows = all_up.row_up_counts();
  for (int r : rows) CHECK(r == 4);

  ArrowConfig bad = all_up;
  bad.vert[0] = -1;
  CHECK(!bad.ice_rule_ok(&err));
  CHECK(err.find("vertex") != std::string::npos);
  CHECK_THROWS(six_vertex_weight(bad, 1.7));
}

TEST_CASE("any valid configuration has weight 1 at c=1") {
  enumerate_arrow_configs(2, 2, [&](const ArrowConfig& a) {
    CHECK(six_vertex_weight(a, 1.0) == doctest::Approx(1.0));
  });
}

TEST_CASE("row conservation of up arrows") {
  int checked = 0;
  enumerate_arrow_configs(4, 2, [&](const ArrowConfig& a) {
    auto rows = a.row_up_counts();
    for (int r : rows) CHECK(r == rows[0]);
    ++checked;
  });
  CHECK(checked > 0);
}

TEST_CASE("torus loop counts on the 2x2 torus") {
  PlanarGraph black = build_torus_black(2, 2);
  Config empty(black.edge_count()), full(black.edge_count());
  for (int e = 0; e < black.edge_count(); ++e) full.set(e, true);
  LoopFamily lf_full = loop_config(full, black);
  LoopFamily lf_empty = loop_config(empty, black);
  CHECK(lf_full.count() == 2);
  CHECK(lf_empty.count() == lf_full.count());
  int total_steps = 0;
  for (const auto& l : lf_full.loops) total_steps += static_cast<int>(l.edge_ids.size());
  CHECK(total_steps == 8);
}

TEST_CASE("euler identity for loop counts on tori") {
  for (auto [L, M] : {std::pair{2, 2}, std::pair{4, 2}}) {
    PlanarGraph black = build_torus_black(L, M);
    int ne = black.edge_count();
    for (uint64_t m = 0; m < (uint64_t(1) << ne); ++m) {
      Config c = Config::from_mask(m, ne);
      LoopFamily fam = loop_config(c, black);
      int k = cluster_count(c, black, BoundaryCondition::free_bc());
      int s = winding_indicator(c, black);
      int expected = c.open_count() + 2 * k - L * M / 2 - 2 * s;
      CHECK(fam.count() == expected);
      CHECK(fam.count_winding() <= fam.count());
      CHECK(fam.count_horizontal() <= fam.count_winding());
    }
  }
}

TEST_CASE("winding indicator on handmade configurations") {
  PlanarGraph black = build_torus_black(2, 2);
  Config diag(4);
  diag.set(0, true);
  diag.set(3, true);
  CHECK(winding_indicator(diag, black) == 0);
  Config full(4);
  for (int e = 0; e < 4; ++e) full.set(e, true);
  CHECK(winding_indicator(full, black) == 1);
  Config empty(4);
  CHECK(winding_indicator(empty, black) == 0);
}

TEST_CASE("loops with separate vertical primal and dual winding") {
  PlanarGraph black = build_torus_black(4, 2);
  Config c(black.edge_count());
  c.set(0, true);
  c.set(4, true);  // face (0,1)
  LoopFamily fam = loop_config(c, black);
  CHECK(winding_indicator(c, black) == 0);
  CHECK(fam.count_winding() >= 2);
}

TEST_CASE("orientation sums over coherent orientations") {
  PlanarGraph black = build_torus_black(2, 2);
  for (double q : {1.0, 2.0, 4.0}) {
    BkwParams bp = bkw_params(q);
    for (uint64_t m = 0; m < 16; ++m) {
      Config c = Config::from_mask(m, 4);
      LoopFamily fam = loop_config(c, black);
      std::complex<double> sum = orientation_sum(fam, bp);
      int l0 = fam.count_winding();
      double expected = std::pow(std::sqrt(q), fam.count() - l0) * std::pow(2.0, l0);
      CHECK(std::abs(sum - std::complex<double>(expected)) <
            1e-12 * std::max(1.0, expected));
    }
  }
  BkwParams bp = bkw_params(2.0);
  Config full(4);
  for (int e = 0; e < 4; ++e) full.set(e, true);
  LoopFamily fam = loop_config(full, black);
  for (const auto& l : fam.loops) CHECK(l.retractable());
  CHECK(std::abs(orientation_sum(fam, bp) - std::complex<double>(2.0)) < 1e-12);
}

TEST_CASE("coherent orientations produce valid arrow configurations") {
  PlanarGraph black = build_torus_black(4, 2);
  std::mt19937_64 rng(7);
  BkwParams bp = bkw_params(2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Config c = random_config(black.edge_count(), rng);
    LoopFamily fam = loop_config(c, black);
    int families = 0;
    coherent_orientations(fam, bp, [&](const OrientedFamily& of) {
      ArrowConfig arrows = to_arrow_config(fam, of.choice);
      CHECK(arrows.ice_rule_ok());
      auto rows = arrows.row_up_counts();
      for (int r : rows) CHECK(r == rows[0]);
      ++families;
    });
    CHECK(families == (1 << fam.count()));
  }
}

TEST_CASE("bkw correspondence on small tori") {
  for (double q : {1.0, 2.0, 3.0, 4.0}) {
    auto rep = check_correspondence(2, 2, q);
    CHECK(rep.max_config_error < 1e-9);
    CHECK(rep.max_orientation_error < 1e-9);
    CHECK(rep.max_sixv_error < 1e-9);
    CHECK(rep.aggregate_error < 1e-9);
    auto rep2 = check_correspondence(2, 2, q, true);
    CHECK(rep2.ok(1e-9));
    CHECK(rep.z_6v == doctest::Approx(rep2.z_6v).epsilon(1e-12));
  }
  auto rep42 = check_correspondence(4, 2, 2.0);
  CHECK(rep42.ok(1e-9));
}

TEST_CASE("planar loops of box configurations") {
  PlanarGraph g = build_box(1);
  Config empty(g.edge_count());
  LoopFamily fam = loop_config(empty, g);
  // the tracer sees one outer face, so exterior dual vertices count as wired
  int k = cluster_count(empty, g, BoundaryCondition::free_bc());
  int kd = cluster_count(dual_config(empty, g), *g.dual, BoundaryCondition::wired(*g.dual));
  CHECK(fam.count() == k + kd - 1);
  CHECK(fam.count() == 9);
  LoopFamily oriented = orient_loops(fam, empty, g);
  for (const auto& l : oriented.loops) CHECK(l.orientation == oriented.loops[0].orientation);

  Config full(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) full.set(e, true);
  LoopFamily ffull = loop_config(full, g);
  int kf = cluster_count(full, g, BoundaryCondition::free_bc());
  int kfd = cluster_count(dual_config(full, g), *g.dual, BoundaryCondition::wired(*g.dual));
  CHECK(ffull.count() == kf + kfd - 1);
  CHECK(ffull.count() == 5);
  LoopFamily ofull = orient_loops(ffull, full, g);
  const Loop* contour = nullptr;
  const Loop* inner = nullptr;
  for (const auto& l : ofull.loops)
    if (!contour || l.diameter() > contour->diameter()) contour = &l;
  for (const auto& l : ofull.loops)
    if (&l != contour && (!inner || l.diameter() < inner->diameter())) inner = &l;
  REQUIRE(contour != nullptr);
  REQUIRE(inner != nullptr);
  CHECK(contour->orientation != inner->orientation);
}

TEST_CASE("euler identity for planar loops") {
  PlanarGraph g = build_box(1);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    Config c = random_config(g.edge_count(), rng);
    LoopFamily fam = loop_config(c, g);
    int k = cluster_count(c, g, BoundaryCondition::free_bc());
    int kd = cluster_count(dual_config(c, g), *g.dual, BoundaryCondition::wired(*g.dual));
    CHECK(fam.count() == k + kd - 1);
  }
}

TEST_CASE("single open edge contour") {
  PlanarGraph g = build_box(1);
  Config c(g.edge_count());
  c.set(0, true);
  LoopFamily fam = orient_loops(loop_config(c, g), c, g);
  int k = cluster_count(c, g, BoundaryCondition::free_bc());
  CHECK(fam.count() == k + 1 - 1);
  const Loop* contour = nullptr;
  for (const auto& l : fam.loops)
    if (!contour || l.diameter() > contour->diameter()) contour = &l;
  const auto& e = g.edges[0];
  Vec2 mid{0.5 * (g.coords[e.u].x + g.coords[e.v].x),
           0.5 * (g.coords[e.u].y + g.coords[e.v].y)};
  double winding_angle = 0;
  int steps = static_cast<int>(contour->points.size());
  for (int i = 0; i < steps; ++i) {
    Vec2 a = contour->points[i], b = contour->points[(i + 1) % steps];
    winding_angle += std::atan2((a.x - mid.x) * (b.y - mid.y) - (a.y - mid.y) * (b.x - mid.x),
                                (a.x - mid.x) * (b.x - mid.x) + (a.y - mid.y) * (b.y - mid.y));
  }
  CHECK(std::abs(std::abs(winding_angle) - 2 * kPi) < 1e-9);
}

TEST_CASE("orientation flips with the dual configuration") {
  // on the torus the primal and dual sublattices share one medial lattice, so
  // omega and omega* produce the same interfaces with reversed orientations
  PlanarGraph black = build_torus_black(4, 2);
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    Config c = random_config(black.edge_count(), rng);
    LoopFamily a = orient_loops(loop_config(c, black), c, black);
    Config cd = dual_config(c, black);
    LoopFamily b = orient_loops(loop_config(cd, *black.dual), cd, *black.dual);
    REQUIRE(a.count() == b.count());
    double sum_a = 0, sum_b = 0;
    for (const auto& l : a.loops) sum_a += l.orientation;
    for (const auto& l : b.loops) sum_b += l.orientation;
    CHECK(sum_a == -sum_b);
    // matching loops carry opposite turning
    int turn_a = 0, turn_b = 0;
    for (const auto& l : a.loops) turn_a += l.turning;
    for (const auto& l : b.loops) turn_b += l.turning;
    CHECK(turn_a == -turn_b);
  }
}

TEST_CASE("loop distance") {
  auto mk = [](std::initializer_list<std::pair<double, double>> pts) {
    Loop l;
    for (auto [x, y] : pts) l.points.push_back({x, y});
    return l;
  };
  Loop square = mk({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(loop_distance(square, square) == doctest::Approx(0.0));
  Loop shifted = mk({{1, 1}, {0, 1}, {0, 0}, {1, 0}});
  CHECK(loop_distance(square, shifted) == doctest::Approx(0.0));
  Loop trans = mk({{0.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}});
  CHECK(loop_distance(square, trans) == doctest::Approx(0.5));
  Loop rev = mk({{0, 1}, {1, 1}, {1, 0}, {0, 0}});
  CHECK(loop_distance(square, rev) > 0.5);
}

TEST_CASE("loop distance metric sanity") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1, 1);
  auto random_loop = [&](int n) {
    Loop l;
    for (int i = 0; i < n; ++i) {
      double ang = 2 * kPi * i / n;
      double r = 1.0 + 0.4 * u(rng);
      l.points.push_back(
          {r * std::cos(ang) + 0.3 * u(rng), r * std::sin(ang) + 0.3 * u(rng)});
    }
    return l;
  };
  for (int trial = 0; trial < 100; ++trial) {
    Loop a = random_loop(8), b = random_loop(10), c = random_loop(6);
    double ab = loop_distance(a, b), ba = loop_distance(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    double ac = loop_distance(a, c), bc = loop_distance(b, c);
    CHECK(ab <= ac + bc + 1e-9);
  }
}

TEST_CASE("loop family matching distance") {
  auto mk = [](double cx, double cy, double r, int n) {
    Loop l;
    for (int i = 0; i < n; ++i) {
      double ang = 2 * kPi * i / n;
      l.points.push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
    }
    return l;
  };
  LoopFamily f;
  f.loops.push_back(mk(0, 0, 1.0, 16));
  f.loops.push_back(mk(3, 0, 0.04, 8));
  CHECK(cn_match(f, f, 0.05));
  CHECK(cn_match(f, f, 1e-3));

  LoopFamily g = f;
  g.loops.pop_back();
  CHECK(cn_match(f, g, 0.1));
  CHECK(!cn_match(f, g, 0.05));

  LoopFamily h;
  h.loops.push_back(mk(0.3, 0, 1.0, 16));
  CHECK(!cn_match(f, h, 0.1));
  CHECK(cn_match(f, h, 0.5));
  double eps = cn_distance(f, h, 1e-4);
  CHECK(eps == doctest::Approx(0.3).epsilon(0.08));
}

TEST_CASE("loop family serialization round trip") {
  PlanarGraph black = build_torus_black(4, 2);
  std::mt19937_64 rng(23);
  Config c = random_config(black.edge_count(), rng);
  LoopFamily fam = orient_loops(loop_config(c, black), c, black);
  std::string js = loop_family_to_json(fam);
  LoopFamily back = loop_family_from_json(js);
  REQUIRE(back.count() == fam.count());
  for (int i = 0; i < fam.count(); ++i) {
    CHECK(back.loops[i].orientation == fam.loops[i].orientation);
    CHECK(back.loops[i].wind_h == fam.loops[i].wind_h);
    CHECK(back.loops[i].points.size() == fam.loops[i].points.size());
  }
  CHECK(loop_family_to_json(back) == js);
}

TEST_CASE("torus loops step by half units") {
  PlanarGraph black = build_torus_black(4, 2);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    Config c = random_config(black.edge_count(), rng);
    LoopFamily fam = loop_config(c, black);
    for (const auto& l : fam.loops) {
      int n = static_cast<int>(l.points.size());
      for (int i = 0; i + 1 < n; ++i) {
        double dx = l.points[i + 1].x - l.points[i].x;
        double dy = l.points[i + 1].y - l.points[i].y;
        CHECK(std::abs(std::abs(dx) - 0.5) < 1e-12);
        CHECK(std::abs(std::abs(dy) - 0.5) < 1e-12);
      }
    }
  }
}
