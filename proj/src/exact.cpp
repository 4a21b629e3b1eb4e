#include "rcm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace rcm {

namespace {

// Neumaier compensated accumulator
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

void require_cap(const PlanarGraph& g) {
  if (g.edge_count() > kEnumerationCap)
    throw std::invalid_argument("graph exceeds the enumeration cap of " +
                                std::to_string(kEnumerationCap) + " edges");
}

}  // namespace

Config Config::from_mask(uint64_t mask, int n) {
  Config c(n);
  for (int i = 0; i < n; ++i) c.bits[i] = (mask >> i) & 1u;
  return c;
}

uint64_t Config::mask() const {
  uint64_t m = 0;
  for (int i = 0; i < size(); ++i)
    if (bits[i]) m |= (uint64_t(1) << i);
  return m;
}

int Config::open_count() const {
  int n = 0;
  for (uint8_t b : bits) n += b;
  return n;
}

bool Config::operator<=(const Config& o) const {
  for (int i = 0; i < size(); ++i)
    if (bits[i] && !o.bits[i]) return false;
  return true;
}

void UnionFind::reset() {
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
}

int UnionFind::find(int a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  parent[b] = a;
  return true;
}

int cluster_count(const Config& config, const PlanarGraph& g, const BoundaryCondition& bc) {
  if (config.size() != g.edge_count())
    throw std::invalid_argument("configuration does not match graph");
  UnionFind uf(g.vertex_count());
  int k = g.vertex_count();
  for (const auto& block : bc.blocks)
    for (size_t i = 1; i < block.size(); ++i)
      if (uf.unite(block[0], block[i])) --k;
  for (int e = 0; e < g.edge_count(); ++e)
    if (config.open(e) && uf.unite(g.edges[e].u, g.edges[e].v)) --k;
  return k;
}

std::vector<int> component_labels(const Config& config, const PlanarGraph& g,
                                  const BoundaryCondition& bc) {
  UnionFind uf(g.vertex_count());
  for (const auto& block : bc.blocks)
    for (size_t i = 1; i < block.size(); ++i) uf.unite(block[0], block[i]);
  for (int e = 0; e < g.edge_count(); ++e)
    if (config.open(e)) uf.unite(g.edges[e].u, g.edges[e].v);
  std::vector<int> label(g.vertex_count());
  std::map<int, int> order;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int r = uf.find(v);
    auto it = order.find(r);
    if (it == order.end()) it = order.insert({r, static_cast<int>(order.size())}).first;
    label[v] = it->second;
  }
  return label;
}

bool connected_in_config(const Config& config, const PlanarGraph& g,
                         const BoundaryCondition& bc, int u, int v) {
  auto label = component_labels(config, g, bc);
  return label[u] == label[v];
}

// --- events -----------------------------------------------------------------

EventSpec EventSpec::edge_open(int e) {
  EventSpec ev;
  ev.name = "edge:" + std::to_string(e);
  ev.increasing = true;
  ev.pred = [e](const PlanarGraph&, const Config& c) { return c.open(e); };
  return ev;
}

EventSpec EventSpec::connectivity(std::vector<int> a, std::vector<int> b,
                                  std::optional<std::vector<int>> edge_subset) {
  EventSpec ev;
  ev.name = "connectivity";
  ev.increasing = true;
  ev.pred = [a, b, edge_subset](const PlanarGraph& g, const Config& c) {
    UnionFind uf(g.vertex_count() + 2);
    int src = g.vertex_count(), dst = src + 1;
    for (int v : a) uf.unite(src, v);
    for (int v : b) uf.unite(dst, v);
    if (edge_subset) {
      for (int e : *edge_subset)
        if (c.open(e)) uf.unite(g.edges[e].u, g.edges[e].v);
    } else {
      for (int e = 0; e < g.edge_count(); ++e)
        if (c.open(e)) uf.unite(g.edges[e].u, g.edges[e].v);
    }
    return uf.find(src) == uf.find(dst);
  };
  return ev;
}

namespace {

EventSpec crossing_event(bool horizontal) {
  EventSpec ev;
  ev.name = horizontal ? "crossing:h" : "crossing:v";
  ev.increasing = true;
  ev.pred = [horizontal](const PlanarGraph& g, const Config& c) {
    double lo = 1e300, hi = -1e300;
    for (const auto& p : g.coords) {
      double t = horizontal ? p.x : p.y;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    UnionFind uf(g.vertex_count() + 2);
    int src = g.vertex_count(), dst = src + 1;
    for (int v = 0; v < g.vertex_count(); ++v) {
      double t = horizontal ? g.coords[v].x : g.coords[v].y;
      if (t == lo) uf.unite(src, v);
      if (t == hi) uf.unite(dst, v);
    }
    for (int e = 0; e < g.edge_count(); ++e)
      if (c.open(e)) uf.unite(g.edges[e].u, g.edges[e].v);
    return uf.find(src) == uf.find(dst);
  };
  return ev;
}

}  // namespace

EventSpec EventSpec::horizontal_crossing() { return crossing_event(true); }
EventSpec EventSpec::vertical_crossing() { return crossing_event(false); }

namespace {

// circuit of open edges inside the annulus Lambda_{2n} \ Lambda_n surrounding
// Lambda_n, detected through the absence of a radial dual crossing
bool annulus_circuit_present(const PlanarGraph& g, const Config& c, int n) {
  // usable edges: both endpoints with n < |x|_inf <= 2n
  auto in_annulus = [&](const Vec2& p) {
    double m = std::max(std::abs(p.x), std::abs(p.y));
    return m > n && m <= 2 * n + 1e-9;
  };
  std::map<std::pair<int, int>, int> open_edge;  // doubled midpoint -> edge id
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!c.open(e)) continue;
    const Vec2& a = g.coords[g.edges[e].u];
    const Vec2& b = g.coords[g.edges[e].v];
    if (!in_annulus(a) || !in_annulus(b)) continue;
    open_edge[{int(std::lround(a.x + b.x)), int(std::lround(a.y + b.y))}] = e;
  }
  // dual BFS over faces (fx,fy), center (fx+1/2, fy+1/2), fx,fy in [-2n-1, 2n]
  int lo = -2 * n - 1, hi = 2 * n;
  auto inner = [&](int fx, int fy) { return fx >= -n && fx <= n - 1 && fy >= -n && fy <= n - 1; };
  auto outer = [&](int fx, int fy) { return fx == lo || fx == hi || fy == lo || fy == hi; };
  int w = hi - lo + 1;
  std::vector<uint8_t> seen(static_cast<size_t>(w) * w, 0);
  std::deque<std::pair<int, int>> queue;
  auto push = [&](int fx, int fy) {
    size_t idx = static_cast<size_t>(fx - lo) * w + (fy - lo);
    if (!seen[idx]) {
      seen[idx] = 1;
      queue.push_back({fx, fy});
    }
  };
  for (int fx = lo; fx <= hi; ++fx)
    for (int fy = lo; fy <= hi; ++fy)
      if (inner(fx, fy)) push(fx, fy);
  while (!queue.empty()) {
    auto [fx, fy] = queue.front();
    queue.pop_front();
    if (outer(fx, fy)) return false;  // dual crossing found
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      int gx = fx + dx[d], gy = fy + dy[d];
      if (gx < lo || gx > hi || gy < lo || gy > hi) continue;
      // crossed primal edge has doubled midpoint = sum of doubled face centers / 2
      int mx2 = fx + gx + 1, my2 = fy + gy + 1;
      if (open_edge.count({mx2, my2})) continue;  // blocked
      push(gx, gy);
    }
  }
  return true;
}

}  // namespace

EventSpec EventSpec::annulus_circuit(int n, bool dual) {
  EventSpec ev;
  ev.name = dual ? "circuit*:" + std::to_string(n) : "circuit:" + std::to_string(n);
  ev.increasing = !dual;
  ev.pred = [n, dual](const PlanarGraph& g, const Config& c) {
    if (!dual) return annulus_circuit_present(g, c, n);
    // dual circuit surrounding Lambda_n: no radial open primal crossing from
    // Lambda_n to the boundary of Lambda_{2n}
    auto norm = [&](int v) {
      return std::max(std::abs(g.coords[v].x), std::abs(g.coords[v].y));
    };
    UnionFind uf(g.vertex_count() + 2);
    int src = g.vertex_count(), dst = src + 1;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (norm(v) <= n + 1e-9) uf.unite(src, v);
      if (std::abs(norm(v) - 2 * n) < 1e-9) uf.unite(dst, v);
    }
    for (int e = 0; e < g.edge_count(); ++e) {
      if (!c.open(e)) continue;
      if (norm(g.edges[e].u) > 2 * n + 1e-9 || norm(g.edges[e].v) > 2 * n + 1e-9) continue;
      uf.unite(g.edges[e].u, g.edges[e].v);
    }
    return uf.find(src) != uf.find(dst);
  };
  return ev;
}

EventSpec EventSpec::custom(std::string name,
                            std::function<bool(const PlanarGraph&, const Config&)> pred,
                            bool increasing) {
  EventSpec ev;
  ev.name = std::move(name);
  ev.pred = std::move(pred);
  ev.increasing = increasing;
  return ev;
}

bool certify_increasing(const PlanarGraph& g, const EventSpec& ev) {
  if (g.edge_count() > 16)
    throw std::invalid_argument("monotonicity certification limited to 16 edges");
  int ne = g.edge_count();
  uint64_t total = uint64_t(1) << ne;
  for (uint64_t m = 0; m < total; ++m) {
    Config c = Config::from_mask(m, ne);
    if (!ev.pred(g, c)) continue;
    for (int e = 0; e < ne; ++e) {
      if (c.open(e)) continue;
      Config up = c;
      up.set(e, true);
      if (!ev.pred(g, up)) return false;
    }
  }
  return true;
}

// --- enumeration ---------------------------------------------------------------

void enumerate_weights(const PlanarGraph& g, const BoundaryCondition& bc,
                       const FkParams& params,
                       const std::function<void(uint64_t, double)>& visit) {
  require_cap(g);
  params.validate(g);
  bc.validate(g);
  int ne = g.edge_count();
  int nv = g.vertex_count();
  std::vector<double> logy(ne);
  double base = 0.0;
  for (int e = 0; e < ne; ++e) {
    base += std::log1p(-params.p[e]);
    logy[e] = std::log(params.p[e]) - std::log1p(-params.p[e]);
  }
  bool bernoulli = params.q == 1.0;
  double logq = std::log(params.q);
  UnionFind uf(nv);
  std::vector<std::pair<int, int>> wired;
  for (const auto& block : bc.blocks)
    for (size_t i = 1; i < block.size(); ++i) wired.push_back({block[0], block[i]});
  uint64_t total = uint64_t(1) << ne;
  for (uint64_t m = 0; m < total; ++m) {
    double lw = base;
    int k = nv;
    if (!bernoulli) {
      uf.reset();
      for (auto [a, b] : wired)
        if (uf.unite(a, b)) --k;
    }
    uint64_t bitsleft = m;
    while (bitsleft) {
      int e = __builtin_ctzll(bitsleft);
      bitsleft &= bitsleft - 1;
      lw += logy[e];
      if (!bernoulli && uf.unite(g.edges[e].u, g.edges[e].v)) --k;
    }
    if (!bernoulli) lw += k * logq;
    visit(m, std::exp(lw));
  }
}

double partition_function(const PlanarGraph& g, const BoundaryCondition& bc,
                          const FkParams& params) {
  if (params.q == 1.0) {
    params.validate(g);
    return 1.0;
  }
  Accum z;
  enumerate_weights(g, bc, params, [&](uint64_t, double w) { z.add(w); });
  return z.value();
}

double event_probability(const PlanarGraph& g, const BoundaryCondition& bc,
                         const FkParams& params, const EventSpec& event) {
  Accum z, num;
  int ne = g.edge_count();
  enumerate_weights(g, bc, params, [&](uint64_t m, double w) {
    z.add(w);
    if (event.pred(g, Config::from_mask(m, ne))) num.add(w);
  });
  return num.value() / z.value();
}

double expectation(const PlanarGraph& g, const BoundaryCondition& bc, const FkParams& params,
                   const std::function<double(const PlanarGraph&, const Config&)>& f) {
  Accum z, num;
  int ne = g.edge_count();
  enumerate_weights(g, bc, params, [&](uint64_t m, double w) {
    z.add(w);
    num.add(w * f(g, Config::from_mask(m, ne)));
  });
  return num.value() / z.value();
}

ExactDistribution exact_distribution(const PlanarGraph& g, const BoundaryCondition& bc,
                                     const FkParams& params) {
  if (g.edge_count() > 20)
    throw std::invalid_argument("dense distribution limited to 20 edges");
  ExactDistribution d;
  d.graph = &g;
  d.bc = bc;
  d.params = params;
  d.probs.assign(uint64_t(1) << g.edge_count(), 0.0);
  Accum z;
  enumerate_weights(g, bc, params, [&](uint64_t m, double w) {
    d.probs[m] = w;
    z.add(w);
  });
  d.z = z.value();
  for (auto& p : d.probs) p /= d.z;
  return d;
}

// --- duality ---------------------------------------------------------------------

Config dual_config(const Config& config, const PlanarGraph& g) {
  if (!g.has_dual() && g.dual_edge.empty())
    throw std::invalid_argument("graph carries no dual-edge map");
  if (config.size() != g.edge_count())
    throw std::invalid_argument("configuration does not match graph");
  Config out(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) out.set(g.dual_edge[e], !config.open(e));
  return out;
}

DualityReport duality_identities(const Config& config, const PlanarGraph& box, int n) {
  if (box.topology != Topology::box || !box.has_dual())
    throw std::invalid_argument("duality identities require a box with its dual");
  DualityReport r;
  Config star = dual_config(config, box);
  r.edge_sum_ok = config.open_count() + star.open_count() == box.edge_count();
  int k1 = cluster_count(config, box, BoundaryCondition::wired(box));
  int kstar = cluster_count(star, *box.dual, BoundaryCondition::free_bc());
  r.cluster_id_ok = k1 - kstar == (2 * n - 1) * (2 * n - 1) - config.open_count();
  return r;
}

// --- phi_p(S) -----------------------------------------------------------------------

std::vector<LatticeEdge> star_at_origin() {
  return {{{0, 0}, {1, 0}}, {{0, 0}, {-1, 0}}, {{0, 0}, {0, 1}}, {{0, 0}, {0, -1}}};
}

double phi_s(const std::vector<LatticeEdge>& s, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (s.empty()) return 1.0;  // boundary of the empty set is {0}
  if (static_cast<int>(s.size()) > kEnumerationCap)
    throw std::invalid_argument("edge set exceeds the enumeration cap");
  // vertices and S-degrees
  std::map<std::pair<int, int>, int> vid;
  auto id_of = [&](std::pair<int, int> v) {
    auto it = vid.find(v);
    if (it == vid.end()) it = vid.insert({v, static_cast<int>(vid.size())}).first;
    return it->second;
  };
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> edgeset;
  for (const auto& e : s) {
    auto a = e.first, b = e.second;
    if (std::abs(a.first - b.first) + std::abs(a.second - b.second) != 1)
      throw std::invalid_argument("phi_s edges must be nearest-neighbour");
    edgeset.insert({std::min(a, b), std::max(a, b)});
  }
  if (edgeset.size() != s.size()) throw std::invalid_argument("phi_s edge set has repeats");
  for (const auto& e : star_at_origin()) {
    auto a = e.first, b = e.second;
    if (!edgeset.count({std::min(a, b), std::max(a, b)}))
      throw std::invalid_argument("phi_s needs all four edges at the origin");
  }
  std::vector<std::pair<int, int>> es;
  std::map<int, int> degree;
  for (const auto& e : edgeset) {
    int u = id_of(e.first), v = id_of(e.second);
    es.push_back({u, v});
    degree[u]++;
    degree[v]++;
  }
  int origin = id_of({0, 0});
  int nv = static_cast<int>(vid.size());
  std::vector<uint8_t> on_bd(nv, 0);
  for (auto& [v, d] : degree)
    if (d < 4) on_bd[v] = 1;  // touches an edge outside S in Z^2
  int ne = static_cast<int>(es.size());
  Accum total;
  UnionFind uf(nv);
  for (uint64_t m = 0; m < (uint64_t(1) << ne); ++m) {
    uf.reset();
    double w = 1.0;
    for (int e = 0; e < ne; ++e) {
      if ((m >> e) & 1) {
        w *= p;
        uf.unite(es[e].first, es[e].second);
      } else {
        w *= 1.0 - p;
      }
    }
    int r0 = uf.find(origin);
    int cnt = 0;
    for (int v = 0; v < nv; ++v)
      if (on_bd[v] && uf.find(v) == r0) ++cnt;
    total.add(w * cnt);
  }
  return total.value();
}

// --- derivatives ----------------------------------------------------------------------

double russo_derivative(const PlanarGraph& g, const BoundaryCondition& bc,
                        const FkParams& params, const EventSpec& event) {
  require_cap(g);
  double p = params.p.at(0);
  for (double pe : params.p)
    if (pe != p) throw std::invalid_argument("russo derivative needs a uniform parameter");
  int ne = g.edge_count();
  if (params.q == 1.0) {
    if (!event.increasing)
      throw std::invalid_argument("pivotal form requires an increasing event");
    // memoize event values
    std::vector<uint8_t> val(uint64_t(1) << ne);
    for (uint64_t m = 0; m < (uint64_t(1) << ne); ++m)
      val[m] = event.pred(g, Config::from_mask(m, ne)) ? 1 : 0;
    Accum total;
    enumerate_weights(g, bc, params, [&](uint64_t m, double w) {
      int pivots = 0;
      for (int e = 0; e < ne; ++e) {
        uint64_t up = m | (uint64_t(1) << e), dn = m & ~(uint64_t(1) << e);
        if (val[up] && !val[dn]) ++pivots;
      }
      total.add(w * pivots);
    });
    return total.value();
  }
  // covariance form
  Accum z, ea;
  std::vector<Accum> ee(ne), eae(ne);
  enumerate_weights(g, bc, params, [&](uint64_t m, double w) {
    z.add(w);
    bool a = event.pred(g, Config::from_mask(m, ne));
    if (a) ea.add(w);
    for (int e = 0; e < ne; ++e)
      if ((m >> e) & 1) {
        ee[e].add(w);
        if (a) eae[e].add(w);
      }
  });
  double zz = z.value(), pa = ea.value() / zz;
  double sum = 0.0;
  for (int e = 0; e < ne; ++e) sum += eae[e].value() / zz - pa * ee[e].value() / zz;
  return sum / (p * (1.0 - p));
}

// --- Holley / FKG ------------------------------------------------------------------------

namespace {

bool holley_cross(const ExactDistribution& mu, const ExactDistribution& nu, int ne) {
  const double tol = 1e-12;
  uint64_t total = uint64_t(1) << ne;
  for (uint64_t m = 0; m < total; ++m) {
    for (int i = 0; i < ne; ++i)
      for (int j = i; j < ne; ++j) {
        uint64_t clear = ~((uint64_t(1) << i) | (uint64_t(1) << j));
        for (int vi = 0; vi < 2; ++vi)
          for (int vj = 0; vj < 2; ++vj) {
            uint64_t mp = (m & clear) | (uint64_t(vi) << i) | (uint64_t(vj) << j);
            uint64_t meet = m & mp, join = m | mp;
            double lhs = mu.prob(meet) * nu.prob(join);
            double rhs = mu.prob(m) * nu.prob(mp);
            if (lhs + tol * (lhs + rhs) < rhs) return false;
          }
      }
  }
  return true;
}

}  // namespace

HolleyReport check_holley_fkg(const ExactDistribution& lo, const ExactDistribution& hi) {
  if (lo.probs.size() != hi.probs.size())
    throw std::invalid_argument("distributions live on different configuration spaces");
  int ne = 0;
  while ((uint64_t(1) << ne) < lo.probs.size()) ++ne;
  HolleyReport rep;
  rep.holley_pairs = holley_cross(lo, hi, ne);
  rep.fkg_lattice_lo = holley_cross(lo, lo, ne);
  rep.fkg_lattice_hi = holley_cross(hi, hi, ne);
  if (ne <= 4) {
    // enumerate all increasing events as up-closed subsets of the hypercube
    uint64_t nconf = uint64_t(1) << ne;
    bool ok = true;
    for (uint64_t s = 0; s < (uint64_t(1) << nconf) && ok; ++s) {
      bool upset = true;
      for (uint64_t c = 0; c < nconf && upset; ++c) {
        if (!((s >> c) & 1)) continue;
        for (int e = 0; e < ne; ++e) {
          uint64_t up = c | (uint64_t(1) << e);
          if (!((s >> up) & 1)) {
            upset = false;
            break;
          }
        }
      }
      if (!upset) continue;
      double pl = 0, ph = 0;
      for (uint64_t c = 0; c < nconf; ++c)
        if ((s >> c) & 1) {
          pl += lo.prob(c);
          ph += hi.prob(c);
        }
      if (pl > ph + 1e-12) ok = false;
    }
    rep.dominated = ok;
  }
  return rep;
}

// --- Potts coupling -----------------------------------------------------------------------

std::vector<int> potts_from_fk(const Config& config, const PlanarGraph& g, int q,
                               std::mt19937_64& rng) {
  if (q < 2) throw std::invalid_argument("potts coupling requires integer q >= 2");
  auto label = component_labels(config, g, BoundaryCondition::free_bc());
  int nclusters = *std::max_element(label.begin(), label.end()) + 1;
  std::uniform_int_distribution<int> spin(1, q);
  std::vector<int> cluster_spin(nclusters);
  for (int& s : cluster_spin) s = spin(rng);
  std::vector<int> out(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) out[v] = cluster_spin[label[v]];
  return out;
}

// --- symmetric quad -------------------------------------------------------------------------

QuadReport symmetric_quad_check(const PlanarGraph& quad, const std::vector<int>& arc_ab,
                                const std::vector<int>& arc_cd, double q, double p) {
  BoundaryCondition alt;
  alt.blocks = {arc_ab, arc_cd};
  FkParams params = FkParams::uniform(quad, p, q);
  QuadReport rep;
  rep.probability =
      event_probability(quad, alt, params, EventSpec::connectivity(arc_ab, arc_cd));
  rep.bound = 1.0 / (1.0 + q);
  rep.bound_ok = rep.probability >= rep.bound - 1e-12;
  return rep;
}

QuadReport symmetric_quad_check(int n, double q) {
  // the (n+1) x n rectangle with its two vertical sides as the wired arcs;
  // its dual is the same shape rotated by a quarter turn
  PlanarGraph quad = build_rect(n + 1, n);
  std::vector<int> left, right;
  for (int v = 0; v < quad.vertex_count(); ++v) {
    if (quad.coords[v].x == 0) left.push_back(v);
    if (quad.coords[v].x == n + 1) right.push_back(v);
  }
  return symmetric_quad_check(quad, left, right, q, self_dual_point(q));
}

// --- induced wiring ---------------------------------------------------------------------------

BoundaryCondition induced_wiring(const PlanarGraph& g, const BoundaryCondition& bc,
                                 const std::vector<uint8_t>& in_h, const Config& outside,
                                 const PlanarGraph& h, const std::vector<int>& vertex_map) {
  UnionFind uf(g.vertex_count());
  for (const auto& block : bc.blocks)
    for (size_t i = 1; i < block.size(); ++i) uf.unite(block[0], block[i]);
  for (int e = 0; e < g.edge_count(); ++e)
    if (!in_h[e] && outside.open(e)) uf.unite(g.edges[e].u, g.edges[e].v);
  // group boundary vertices of H by their root in G
  std::map<int, std::vector<int>> groups;
  for (int hv = 0; hv < h.vertex_count(); ++hv) {
    if (!h.boundary[hv]) continue;
    groups[uf.find(vertex_map[hv])].push_back(hv);
  }
  BoundaryCondition out;
  for (auto& [root, vs] : groups)
    if (vs.size() >= 2) out.blocks.push_back(vs);
  return out;
}

}  // namespace rcm
