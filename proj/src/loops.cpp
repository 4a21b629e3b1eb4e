#include "rcm/loops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace rcm {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Accum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

int cross_sign(const Vec2& a, const Vec2& b) {
  double c = a.x * b.y - a.y * b.x;
  return (c > 0) - (c < 0);
}
}  // namespace

double Loop::diameter() const {
  double d = 0;
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      d = std::max(d, std::hypot(points[i].x - points[j].x, points[i].y - points[j].y));
  return d;
}

int LoopFamily::count_winding() const {
  int n = 0;
  for (const auto& l : loops) n += !l.retractable();
  return n;
}

int LoopFamily::count_horizontal() const {
  int n = 0;
  for (const auto& l : loops) n += (l.wind_v == 0 && l.wind_h != 0);
  return n;
}

BkwParams bkw_params(double q, bool other_branch) {
  if (q < 1.0) throw std::invalid_argument("cluster weight q must satisfy q >= 1");
  BkwParams bp;
  bp.q = q;
  double sq = std::sqrt(q);
  if (q < 4.0)
    bp.lambda = std::complex<double>(0.0, std::acos(sq / 2.0));
  else
    bp.lambda = std::complex<double>(std::acosh(sq / 2.0), 0.0);
  if (other_branch) bp.lambda = -bp.lambda;
  bp.c = std::real(std::exp(bp.lambda / 2.0) + std::exp(-bp.lambda / 2.0));
  bp.delta = 1.0 - bp.c * bp.c / 2.0;
  bp.kappa = (q <= 4.0) ? 4.0 * kPi / std::acos(-sq / 2.0)
                        : std::numeric_limits<double>::quiet_NaN();
  return bp;
}

// --- arrow configurations ------------------------------------------------------

bool ArrowConfig::ice_rule_ok(std::string* err) const {
  for (int b = 0; b < M; ++b)
    for (int a = 0; a < L; ++a) {
      int in = 0;
      in += vert[vidx(a, b - 1)] == 1;
      in += vert[vidx(a, b)] == -1;
      in += horiz[vidx(a - 1, b)] == 1;
      in += horiz[vidx(a, b)] == -1;
      if (in != 2) {
        if (err)
          *err = "ice rule violated at vertex (" + std::to_string(a) + "," +
                 std::to_string(b) + ")";
        return false;
      }
    }
  return true;
}

std::vector<int> ArrowConfig::row_up_counts() const {
  std::vector<int> out(M, 0);
  for (int b = 0; b < M; ++b)
    for (int a = 0; a < L; ++a) out[b] += vert[vidx(a, b)] == 1;
  return out;
}

int c_vertex_count(const ArrowConfig& arrows) {
  int n = 0;
  for (int b = 0; b < arrows.M; ++b)
    for (int a = 0; a < arrows.L; ++a)
      n += arrows.vert[arrows.vidx(a, b - 1)] != arrows.vert[arrows.vidx(a, b)];
  return n;
}

double six_vertex_weight(const ArrowConfig& arrows, double c) {
  if (!(c > 0)) throw std::invalid_argument("six-vertex weight needs c > 0");
  std::string err;
  if (!arrows.ice_rule_ok(&err)) throw std::invalid_argument(err);
  return std::pow(c, c_vertex_count(arrows));
}

// --- torus medial structure -----------------------------------------------------

namespace {

// stubs at a node: 0=bottom 1=top 2=left 3=right
struct TorusMedial {
  int L, M;
  const Config* config;
  int primal_parity = 0;  // parity of (x+y) on the primal sublattice

  int node(int a, int b) const { return ((a % L) + L) % L + L * (((b % M) + M) % M); }
  int vedge(int a, int b) const { return node(a, b); }
  int hedge(int a, int b) const { return L * M + node(a, b); }

  int stub_edge(int n, int stub) const {
    int a = n % L, b = n / L;
    switch (stub) {
      case 0: return vedge(a, b - 1);
      case 1: return vedge(a, b);
      case 2: return hedge(a - 1, b);
      default: return hedge(a, b);
    }
  }

  int partner(int n, int stub) const {
    int a = n % L, b = n / L;
    bool swne_open = config->open(node(a, b)) == ((a + b) % 2 == primal_parity % 2);
    if (swne_open) {  // {(bottom,right),(top,left)}
      switch (stub) {
        case 0: return 3;
        case 3: return 0;
        case 1: return 2;
        default: return 1;
      }
    }
    switch (stub) {  // {(bottom,left),(top,right)}
      case 0: return 2;
      case 2: return 0;
      case 1: return 3;
      default: return 1;
    }
  }

  std::pair<int, int> hugged_corner(int n, int s1, int s2) const {
    int a = n % L, b = n / L;
    int lo = std::min(s1, s2), hi = std::max(s1, s2);
    if (lo == 0 && hi == 3) return {a + 1, b};
    if (lo == 1 && hi == 2) return {a, b + 1};
    if (lo == 0 && hi == 2) return {a, b};
    return {a + 1, b + 1};
  }

  int arriving_stub(int e, int n) const {
    if (e < L * M) {
      int a = e % L, b = e / L;
      return node(a, b + 1) == n ? 0 : 1;
    }
    int i = e - L * M;
    int a = i % L, b = i / L;
    return node(a + 1, b) == n ? 2 : 3;
  }

  std::pair<int, int> endpoints(int e) const {
    if (e < L * M) {
      int a = e % L, b = e / L;
      return {node(a, b), node(a, b + 1)};
    }
    int i = e - L * M;
    int a = i % L, b = i / L;
    return {node(a, b), node(a + 1, b)};
  }

  Vec2 step_vector(int e, int dir) const {
    if (e < L * M) return {0.0, double(dir)};
    return {double(dir), 0.0};
  }

  Vec2 midpoint(int e) const {
    if (e < L * M) {
      int a = e % L, b = e / L;
      return {a + 0.5, b + 1.0};
    }
    int i = e - L * M;
    int a = i % L, b = i / L;
    return {a + 1.0, b + 0.5};
  }
};

int torus_primal_parity(const PlanarGraph& g) {
  return (static_cast<int>(std::lround(g.coords[0].x)) +
          static_cast<int>(std::lround(g.coords[0].y))) & 1;
}

LoopFamily trace_torus_loops(const Config& config, const PlanarGraph& g) {
  int L = g.torus_w, M = g.torus_h;
  TorusMedial med{L, M, &config, torus_primal_parity(g)};
  LoopFamily fam;
  fam.on_torus = true;
  fam.torus_w = L;
  fam.torus_h = M;
  std::vector<uint8_t> used(2 * L * M, 0);
  for (int start = 0; start < 2 * L * M; ++start) {
    if (used[start]) continue;
    Loop loop;
    int e = start, dir = 1;
    auto [tail0, head0] = med.endpoints(e);
    int at = head0;
    Vec2 lift = med.midpoint(e);
    Vec2 prev_step = med.step_vector(e, dir);
    int turning = 0;
    Vec2 first = lift;
    do {
      used[e] = 1;
      loop.edge_ids.push_back(e);
      loop.dirs.push_back(static_cast<int8_t>(dir));
      loop.points.push_back(lift);
      int stub_in = med.arriving_stub(e, at);
      int stub_out = med.partner(at, stub_in);
      int enext = med.stub_edge(at, stub_out);
      auto [t2, h2] = med.endpoints(enext);
      int dnext = (t2 == at) ? 1 : -1;
      int next_at = (t2 == at) ? h2 : t2;
      Vec2 step = med.step_vector(enext, dnext);
      turning += cross_sign(prev_step, step);
      prev_step = step;
      // lifted midpoint of the next edge: half of this step plus half of the
      // next one from the current lifted midpoint
      lift = {lift.x + 0.5 * (med.step_vector(e, dir).x + step.x),
              lift.y + 0.5 * (med.step_vector(e, dir).y + step.y)};
      e = enext;
      dir = dnext;
      at = next_at;
    } while (!(e == start && dir == 1));
    loop.wind_h = static_cast<int>(std::lround((lift.x - first.x) / L));
    loop.wind_v = static_cast<int>(std::lround((lift.y - first.y) / M));
    loop.turning = turning / 4;
    fam.loops.push_back(std::move(loop));
  }
  return fam;
}

// --- planar medial structure -------------------------------------------------------

struct PlanarMedial {
  const PlanarGraph* g;
  std::vector<std::vector<int>> rot;
  std::vector<int> corner_offset;
  int corner_count = 0;

  explicit PlanarMedial(const PlanarGraph& graph) : g(&graph) {
    int nv = graph.vertex_count();
    rot.resize(nv);
    for (int v = 0; v < nv; ++v) {
      for (auto [w, e] : graph.adjacency()[v]) rot[v].push_back(e);
      std::sort(rot[v].begin(), rot[v].end(),
                [&](int e1, int e2) { return angle_at(v, e1) < angle_at(v, e2); });
    }
    corner_offset.resize(nv + 1, 0);
    for (int v = 0; v < nv; ++v)
      corner_offset[v + 1] = corner_offset[v] + static_cast<int>(rot[v].size());
    corner_count = corner_offset[nv];
  }

  double angle_at(int v, int e) const {
    int w = g->edges[e].u == v ? g->edges[e].v : g->edges[e].u;
    return std::atan2(g->coords[w].y - g->coords[v].y, g->coords[w].x - g->coords[v].x);
  }

  int degree(int v) const { return static_cast<int>(rot[v].size()); }
  int corner_id(int v, int i) const { return corner_offset[v] + i; }
  int corner_vertex(int c) const {
    return static_cast<int>(std::upper_bound(corner_offset.begin(), corner_offset.end(), c) -
                            corner_offset.begin()) - 1;
  }
  int slot_of(int v, int e) const {
    for (int i = 0; i < degree(v); ++i)
      if (rot[v][i] == e) return i;
    throw std::logic_error("edge missing from rotation system");
  }
  // corners around edge e: {u-after, u-before, v-after, v-before} where
  // "after" means e is the first edge of the corner in ccw order
  std::array<int, 4> corners_of(int e) const {
    int u = g->edges[e].u, v = g->edges[e].v;
    int su = slot_of(u, e), sv = slot_of(v, e);
    int du = degree(u), dv = degree(v);
    return {corner_id(u, su), corner_id(u, (su - 1 + du) % du), corner_id(v, sv),
            corner_id(v, (sv - 1 + dv) % dv)};
  }
  std::pair<int, int> corner_edges(int c) const {
    int v = corner_vertex(c);
    int i = c - corner_offset[v];
    return {rot[v][i], rot[v][(i + 1) % degree(v)]};
  }
  Vec2 corner_pos(int c) const {
    int v = corner_vertex(c);
    auto [ea, eb] = corner_edges(c);
    // bisector of the ccw wedge from ea to eb
    double a1 = angle_at(v, ea);
    double a2 = angle_at(v, eb);
    double span = a2 - a1;
    while (span <= 0) span += 2 * kPi;
    double mid = a1 + 0.5 * span;
    return {g->coords[v].x + 0.25 * std::cos(mid), g->coords[v].y + 0.25 * std::sin(mid)};
  }
};

LoopFamily trace_planar_loops(const Config& config, const PlanarGraph& g) {
  PlanarMedial med(g);
  LoopFamily fam;
  // walk states are (node edge, entry slot); slots follow corners_of ordering
  std::vector<uint8_t> used(4 * static_cast<size_t>(g.edge_count()), 0);
  static const int open_partner[4] = {3, 2, 1, 0};
  static const int closed_partner[4] = {1, 0, 3, 2};
  for (int e0 = 0; e0 < g.edge_count(); ++e0) {
    for (int s0 = 0; s0 < 4; ++s0) {
      if (used[4 * e0 + s0]) continue;
      Loop loop;
      int e = e0, slot = s0;
      do {
        auto cs = med.corners_of(e);
        // polyline alternates corner knots with crossing points near the edge
        // midpoint: beside an open edge, along a closed one
        Vec2 cpos = med.corner_pos(cs[slot]);
        loop.points.push_back(cpos);
        Vec2 mid{0.5 * (g.coords[g.edges[e].u].x + g.coords[g.edges[e].v].x),
                 0.5 * (g.coords[g.edges[e].u].y + g.coords[g.edges[e].v].y)};
        int out_slot = config.open(e) ? open_partner[slot] : closed_partner[slot];
        Vec2 toward{0, 0};
        if (config.open(e)) {
          Vec2 dir{g.coords[g.edges[e].v].x - g.coords[g.edges[e].u].x,
                   g.coords[g.edges[e].v].y - g.coords[g.edges[e].u].y};
          double len = std::hypot(dir.x, dir.y);
          Vec2 n{-dir.y / len, dir.x / len};
          double side = (cpos.x - mid.x) * n.x + (cpos.y - mid.y) * n.y;
          toward = side >= 0 ? n : Vec2{-n.x, -n.y};
        } else {
          const Vec2& cu = g.coords[g.edges[e].u];
          const Vec2& cv = g.coords[g.edges[e].v];
          double du = std::hypot(cu.x - cpos.x, cu.y - cpos.y);
          double dv = std::hypot(cv.x - cpos.x, cv.y - cpos.y);
          const Vec2& hug = du <= dv ? cu : cv;
          double len = std::hypot(hug.x - mid.x, hug.y - mid.y);
          toward = {(hug.x - mid.x) / len, (hug.y - mid.y) / len};
        }
        loop.points.push_back({mid.x + 0.25 * toward.x, mid.y + 0.25 * toward.y});
        loop.edge_ids.push_back(e);
        // consume this passage in both walk directions
        used[4 * e + slot] = 1;
        used[4 * e + out_slot] = 1;
        int c_out = cs[out_slot];
        auto [fa, fb] = med.corner_edges(c_out);
        int enext = (fa == e) ? fb : fa;
        auto cn = med.corners_of(enext);
        int entry = -1;
        for (int j = 0; j < 4; ++j) {
          if (cn[j] != c_out) continue;
          if (enext == e && j == out_slot) continue;  // pendant U-turn
          entry = j;
        }
        if (entry < 0) throw std::logic_error("medial walk lost its corner");
        e = enext;
        slot = entry;
      } while (!(e == e0 && slot == s0));
      fam.loops.push_back(std::move(loop));
    }
  }
  return fam;
}

void reverse_loop(Loop& loop) {
  std::reverse(loop.points.begin(), loop.points.end());
  std::reverse(loop.edge_ids.begin(), loop.edge_ids.end());
  if (!loop.dirs.empty()) {
    std::reverse(loop.dirs.begin(), loop.dirs.end());
    for (auto& d : loop.dirs) d = static_cast<int8_t>(-d);
  }
  loop.turning = -loop.turning;
  loop.wind_h = -loop.wind_h;
  loop.wind_v = -loop.wind_v;
}

bool torus_trace_primal_on_right(const Loop& loop, const Config& config,
                                 const PlanarGraph& g) {
  TorusMedial med{g.torus_w, g.torus_h, &config, torus_primal_parity(g)};
  int steps = static_cast<int>(loop.edge_ids.size());
  int vote = 0;
  for (int i = 0; i < steps; ++i) {
    int e = loop.edge_ids[i], dir = loop.dirs[i];
    auto [tail, head] = med.endpoints(e);
    int at = dir > 0 ? head : tail;
    int stub_in = med.arriving_stub(e, at);
    int stub_out = med.partner(at, stub_in);
    Vec2 vin = med.step_vector(e, dir);
    Vec2 vout = med.step_vector(loop.edge_ids[(i + 1) % steps], loop.dirs[(i + 1) % steps]);
    int turn = cross_sign(vin, vout);  // -1 = right turn
    auto [cx, cy] = med.hugged_corner(at, stub_in, stub_out);
    bool primal_corner = (cx + cy) % 2 == med.primal_parity;
    bool ok = (turn < 0) == primal_corner;
    vote += ok ? 1 : -1;
  }
  if (std::abs(vote) != steps) throw std::logic_error("inconsistent interface sides");
  return vote > 0;
}

}  // namespace

LoopFamily loop_config(const Config& config, const PlanarGraph& g) {
  if (config.size() != g.edge_count())
    throw std::invalid_argument("configuration does not match graph");
  if (!g.has_dual() && g.dual_edge.empty())
    throw std::invalid_argument("loop encoding needs a graph with a dual map");
  if (g.topology == Topology::torus) return trace_torus_loops(config, g);
  return trace_planar_loops(config, g);
}

LoopFamily orient_loops(const LoopFamily& loops, const Config& config, const PlanarGraph& g) {
  LoopFamily out = loops;
  if (loops.on_torus) {
    for (auto& loop : out.loops) {
      if (!torus_trace_primal_on_right(loop, config, g)) reverse_loop(loop);
      loop.orientation = loop.retractable() ? (loop.turning > 0 ? 1 : -1) : 0;
    }
    return out;
  }
  for (auto& loop : out.loops) {
    int steps = static_cast<int>(loop.points.size());
    // winding number of the polyline around a point off the curve
    auto winds_around = [&](const Vec2& t) {
      double total = 0;
      for (int i = 0; i < steps; ++i) {
        const Vec2& a = loop.points[i];
        const Vec2& b = loop.points[(i + 1) % steps];
        total += std::atan2((a.x - t.x) * (b.y - t.y) - (a.y - t.y) * (b.x - t.x),
                            (a.x - t.x) * (b.x - t.x) + (a.y - t.y) * (b.y - t.y));
      }
      return std::abs(total) > kPi;
    };
    // the primal material hugged by this interface: endpoints of open node
    // edges, nearer endpoints of closed ones
    int inside_votes = 0, outside_votes = 0;
    for (size_t s = 0; s < loop.edge_ids.size(); ++s) {
      int e = loop.edge_ids[s];
      if (config.open(e)) {
        inside_votes += winds_around(g.coords[g.edges[e].u]) ? 1 : 0;
        outside_votes += winds_around(g.coords[g.edges[e].u]) ? 0 : 1;
      } else {
        const Vec2& a = loop.points[2 * s];
        const Vec2& cu = g.coords[g.edges[e].u];
        const Vec2& cv = g.coords[g.edges[e].v];
        double du = std::hypot(cu.x - a.x, cu.y - a.y);
        double dv = std::hypot(cv.x - a.x, cv.y - a.y);
        const Vec2& hug = du <= dv ? cu : cv;
        if (winds_around(hug))
          ++inside_votes;
        else
          ++outside_votes;
      }
    }
    if (inside_votes == outside_votes) throw std::logic_error("orientation undetermined");
    bool primal_inside = inside_votes > outside_votes;
    double area2 = 0;
    for (int i = 0; i < steps; ++i) {
      const Vec2& a = loop.points[i];
      const Vec2& b = loop.points[(i + 1) % steps];
      area2 += a.x * b.y - a.y * b.x;
    }
    // primal on the right: clockwise when the primal side is enclosed
    bool want_ccw = !primal_inside;
    if ((area2 > 0) != want_ccw) {
      reverse_loop(loop);
      area2 = -area2;
    }
    loop.orientation = area2 > 0 ? 1 : -1;
  }
  return out;
}

// --- winding indicator -----------------------------------------------------------

int winding_indicator(const Config& config, const PlanarGraph& g) {
  if (g.topology != Topology::torus)
    throw std::invalid_argument("winding indicator needs a torus graph");
  int L = g.torus_w, M = g.torus_h;
  int nv = g.vertex_count();
  int parity = (static_cast<int>(std::lround(g.coords[0].x)) +
                static_cast<int>(std::lround(g.coords[0].y))) & 1;
  auto disp = [&](int i) {
    int a = i % L, b = i / L;
    return (a + b) % 2 == parity ? std::pair<int, int>{1, 1} : std::pair<int, int>{-1, 1};
  };
  std::vector<int> lift_x(nv, 0), lift_y(nv, 0), comp(nv, -1);
  std::vector<std::vector<std::pair<int, int>>> holonomy;
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!config.open(e)) continue;
    adj[g.edges[e].u].push_back({e, 1});
    adj[g.edges[e].v].push_back({e, -1});
  }
  int ncomp = 0;
  for (int s = 0; s < nv; ++s) {
    if (comp[s] >= 0) continue;
    int cid = ncomp++;
    holonomy.push_back({});
    comp[s] = cid;
    std::vector<int> stack = {s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [e, sgn] : adj[v]) {
        auto [dx, dy] = disp(e);
        int w = sgn > 0 ? g.edges[e].v : g.edges[e].u;
        int nx = lift_x[v] + sgn * dx, ny = lift_y[v] + sgn * dy;
        if (comp[w] < 0) {
          comp[w] = cid;
          lift_x[w] = nx;
          lift_y[w] = ny;
          stack.push_back(w);
        } else if (comp[w] == cid) {
          int hx = (nx - lift_x[w]) / L, hy = (ny - lift_y[w]) / M;
          if (hx != 0 || hy != 0) holonomy[cid].push_back({hx, hy});
        }
      }
    }
  }
  for (const auto& hs : holonomy)
    for (size_t i = 0; i < hs.size(); ++i)
      for (size_t j = i + 1; j < hs.size(); ++j) {
        long long cr =
            (long long)hs[i].first * hs[j].second - (long long)hs[i].second * hs[j].first;
        if (cr != 0) return 1;
      }
  return 0;
}

double fk_weight(const Config& config, const PlanarGraph& g, double p, double q) {
  int k = cluster_count(config, g, BoundaryCondition::free_bc());
  int open = config.open_count();
  return std::pow(p, open) * std::pow(1 - p, g.edge_count() - open) * std::pow(q, k);
}

// --- coherent orientations ----------------------------------------------------------

void coherent_orientations(const LoopFamily& loops, const BkwParams& bp,
                           const std::function<void(const OrientedFamily&)>& visit) {
  if (!loops.on_torus)
    throw std::invalid_argument("coherent orientations need torus loops");
  int n = loops.count();
  if (n > 24) throw std::invalid_argument("too many loops to enumerate orientations");
  for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
    OrientedFamily fam;
    fam.choice.resize(n);
    for (int i = 0; i < n; ++i) {
      int ch = ((mask >> i) & 1) ? 1 : -1;
      fam.choice[i] = static_cast<int8_t>(ch);
      const Loop& l = loops.loops[i];
      if (l.retractable()) {
        if (l.turning * ch > 0)
          fam.l_plus++;
        else
          fam.l_minus++;
      }
    }
    fam.weight = std::exp(bp.lambda * double(fam.l_plus - fam.l_minus));
    visit(fam);
  }
}

ArrowConfig to_arrow_config(const LoopFamily& loops, const std::vector<int8_t>& choice) {
  ArrowConfig arrows(loops.torus_w, loops.torus_h);
  int lm = loops.torus_w * loops.torus_h;
  for (int i = 0; i < loops.count(); ++i) {
    const Loop& l = loops.loops[i];
    for (size_t s = 0; s < l.edge_ids.size(); ++s) {
      int e = l.edge_ids[s];
      int d = l.dirs[s] * choice[i];
      if (e < lm)
        arrows.vert[e] = static_cast<int8_t>(d);
      else
        arrows.horiz[e - lm] = static_cast<int8_t>(d);
    }
  }
  return arrows;
}

std::complex<double> orientation_sum(const LoopFamily& loops, const BkwParams& bp) {
  std::complex<double> total = 0.0;
  coherent_orientations(loops, bp, [&](const OrientedFamily& fam) { total += fam.weight; });
  return total;
}

// --- splittings ------------------------------------------------------------------------

void coherent_splittings(const ArrowConfig& arrows, const std::function<void(int)>& visit) {
  int L = arrows.L, M = arrows.M;
  std::string err;
  if (!arrows.ice_rule_ok(&err)) throw std::invalid_argument(err);
  auto stub_in = [&](int a, int b, int stub) {
    switch (stub) {
      case 0: return arrows.vert[arrows.vidx(a, b - 1)] == 1;
      case 1: return arrows.vert[arrows.vidx(a, b)] == -1;
      case 2: return arrows.horiz[arrows.vidx(a - 1, b)] == 1;
      default: return arrows.horiz[arrows.vidx(a, b)] == -1;
    }
  };
  static const int pairing_map[2][4] = {{3, 2, 1, 0}, {2, 3, 0, 1}};
  int nn = L * M;
  std::vector<std::vector<int>> options(nn);
  std::vector<int> cnodes;
  for (int b = 0; b < M; ++b)
    for (int a = 0; a < L; ++a) {
      int n = arrows.vidx(a, b);
      for (int p = 0; p < 2; ++p) {
        bool valid = true;
        for (int stub = 0; stub < 4 && valid; ++stub)
          if (stub_in(a, b, stub) == stub_in(a, b, pairing_map[p][stub])) valid = false;
        if (valid) options[n].push_back(p);
      }
      if (options[n].empty()) throw std::logic_error("no valid pairing at a vertex");
      if (options[n].size() == 2) cnodes.push_back(n);
    }
  std::vector<int> chosen(nn);
  for (int n = 0; n < nn; ++n) chosen[n] = options[n][0];

  TorusMedial med{L, M, nullptr};
  auto trace_net = [&]() {
    std::vector<uint8_t> used(2 * L * M, 0);
    int total_turn = 0;
    for (int start = 0; start < 2 * L * M; ++start) {
      if (used[start]) continue;
      int e = start;
      int dir = e < L * M ? arrows.vert[e] : arrows.horiz[e - L * M];
      auto [t0, h0] = med.endpoints(e);
      int at = dir > 0 ? h0 : t0;
      Vec2 prev = med.step_vector(e, dir);
      do {
        used[e] = 1;
        int sin_ = med.arriving_stub(e, at);
        int sout = pairing_map[chosen[at]][sin_];
        int enext = med.stub_edge(at, sout);
        auto [t2, h2] = med.endpoints(enext);
        int dnext = (t2 == at) ? 1 : -1;
        at = (t2 == at) ? h2 : t2;
        Vec2 step = med.step_vector(enext, dnext);
        total_turn += cross_sign(prev, step);
        prev = step;
        e = enext;
        dir = dnext;
      } while (e != start);
    }
    if (total_turn % 4 != 0) throw std::logic_error("turning not a multiple of full turns");
    return total_turn / 4;
  };

  int nc = static_cast<int>(cnodes.size());
  if (nc > 24) throw std::invalid_argument("too many c-vertices to enumerate splittings");
  for (uint64_t mask = 0; mask < (uint64_t(1) << nc); ++mask) {
    for (int i = 0; i < nc; ++i) chosen[cnodes[i]] = options[cnodes[i]][(mask >> i) & 1];
    visit(trace_net());
  }
}

// --- arrow enumeration ---------------------------------------------------------------

void enumerate_arrow_configs(int L, int M,
                             const std::function<void(const ArrowConfig&)>& visit) {
  if (2 * L * M > 24)
    throw std::invalid_argument("arrow enumeration limited to 24 edges");
  int lm = L * M;
  ArrowConfig arrows(L, M);
  for (uint64_t mask = 0; mask < (uint64_t(1) << (2 * lm)); ++mask) {
    for (int i = 0; i < lm; ++i) {
      arrows.vert[i] = ((mask >> i) & 1) ? 1 : -1;
      arrows.horiz[i] = ((mask >> (lm + i)) & 1) ? 1 : -1;
    }
    if (arrows.ice_rule_ok()) visit(arrows);
  }
}

// --- correspondence --------------------------------------------------------------------

CorrespondenceReport check_correspondence(int L, int M, double q, bool other_branch) {
  CorrespondenceReport rep;
  rep.L = L;
  rep.M = M;
  rep.q = q;
  BkwParams bp = bkw_params(q, other_branch);
  PlanarGraph black = build_torus_black(L, M);
  int ne = black.edge_count();
  if (ne > kEnumerationCap) throw std::invalid_argument("torus too large to enumerate");
  double p = self_dual_point(q);
  double sq = std::sqrt(q);
  double constant = std::pow(sq, L * M / 2.0) / std::pow(1.0 + sq, L * M);
  rep.constant = constant;

  Accum zfk, zlhs;
  for (uint64_t m = 0; m < (uint64_t(1) << ne); ++m) {
    Config c = Config::from_mask(m, ne);
    double w = fk_weight(c, black, p, q);
    LoopFamily fam = loop_config(c, black);
    int s = winding_indicator(c, black);
    double rhs = constant * std::pow(sq, fam.count()) * std::pow(q, s);
    rep.max_config_error = std::max(rep.max_config_error, std::abs(w / rhs - 1.0));
    std::complex<double> osum = orientation_sum(fam, bp);
    int l0 = fam.count_winding();
    double expected = std::pow(sq, fam.count() - l0) * std::pow(2.0, l0);
    rep.max_orientation_error =
        std::max(rep.max_orientation_error,
                 std::abs(osum - std::complex<double>(expected)) / std::max(1.0, expected));
    zfk.add(w);
    zlhs.add(w * std::pow(2.0 / sq, l0) * std::pow(q, -s));
  }
  rep.z_fk = zfk.value();
  rep.fk_expectation = zlhs.value() / zfk.value();

  Accum z6v;
  enumerate_arrow_configs(L, M, [&](const ArrowConfig& arrows) {
    double w6 = six_vertex_weight(arrows, bp.c);
    std::complex<double> split_sum = 0.0;
    coherent_splittings(arrows,
                        [&](int net) { split_sum += std::exp(bp.lambda * double(net)); });
    rep.max_sixv_error = std::max(
        rep.max_sixv_error, std::abs(split_sum - std::complex<double>(w6)) / std::max(1.0, w6));
    z6v.add(w6);
  });
  rep.z_6v = z6v.value();
  double lhs = rep.z_fk * rep.fk_expectation;
  double rhs = constant * rep.z_6v;
  rep.aggregate_error = std::abs(lhs / rhs - 1.0);
  return rep;
}

// --- metrics ------------------------------------------------------------------------------

namespace {

double point_dist(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double open_frechet(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  size_t n = a.size(), m = b.size();
  std::vector<double> prev(m), cur(m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      double d = point_dist(a[i], b[j]);
      double best;
      if (i == 0 && j == 0)
        best = 0.0;
      else if (i == 0)
        best = cur[j - 1];
      else if (j == 0)
        best = prev[0];
      else
        best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::max(d, best);
    }
    prev.swap(cur);
  }
  return prev[m - 1];
}

}  // namespace

double loop_distance(const Loop& a, const Loop& b) {
  if (a.points.empty() || b.points.empty())
    throw std::invalid_argument("loop distance needs nonempty loops");
  const auto& p = a.points;
  const auto& q = b.points;
  size_t n = p.size(), m = q.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vec2> pa(p.begin(), p.end());
  pa.push_back(p[0]);
  for (size_t shift = 0; shift < m; ++shift) {
    std::vector<Vec2> qb;
    qb.reserve(m + 1);
    for (size_t j = 0; j <= m; ++j) qb.push_back(q[(shift + j) % m]);
    best = std::min(best, open_frechet(pa, qb));
  }
  std::vector<Vec2> qa(q.begin(), q.end());
  qa.push_back(q[0]);
  for (size_t shift = 0; shift < n; ++shift) {
    std::vector<Vec2> pb;
    pb.reserve(n + 1);
    for (size_t j = 0; j <= n; ++j) pb.push_back(p[(shift + j) % n]);
    best = std::min(best, open_frechet(qa, pb));
  }
  return best;
}

namespace {

bool loop_in_box(const Loop& l, double half) {
  for (const auto& p : l.points)
    if (std::abs(p.x) > half || std::abs(p.y) > half) return false;
  return true;
}

bool one_sided_match(const LoopFamily& f, const LoopFamily& g, double eps) {
  for (const auto& lf : f.loops) {
    if (!loop_in_box(lf, 1.0 / eps)) continue;
    if (lf.diameter() <= eps) continue;
    bool matched = false;
    for (const auto& lg : g.loops) {
      if (std::abs(lf.diameter() - lg.diameter()) >= 2 * eps) continue;
      if (loop_distance(lf, lg) < eps) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

bool cn_match(const LoopFamily& f, const LoopFamily& g, double eps) {
  return one_sided_match(f, g, eps) && one_sided_match(g, f, eps);
}

double cn_distance(const LoopFamily& f, const LoopFamily& g, double tol) {
  double lo = 1e-4, hi = 1.0;
  while (!cn_match(f, g, hi)) {
    hi *= 2;
    if (hi > 1e6) return hi;
  }
  if (cn_match(f, g, lo)) return lo;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (cn_match(f, g, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// --- serialization ---------------------------------------------------------------------------

std::string loop_family_to_json(const LoopFamily& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& l : f.loops) {
    nlohmann::json jl;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : l.points) pts.push_back({p.x, p.y});
    jl["points"] = pts;
    jl["orientation"] = l.orientation;
    jl["winding"] = {l.wind_h, l.wind_v};
    out.push_back(jl);
  }
  return out.dump();
}

LoopFamily loop_family_from_json(const std::string& s) {
  LoopFamily f;
  auto j = nlohmann::json::parse(s);
  for (const auto& jl : j) {
    Loop l;
    for (const auto& p : jl.at("points")) l.points.push_back({p.at(0), p.at(1)});
    l.orientation = jl.at("orientation");
    l.wind_h = jl.at("winding").at(0);
    l.wind_v = jl.at("winding").at(1);
    f.loops.push_back(std::move(l));
  }
  return f;
}

}  // namespace rcm
