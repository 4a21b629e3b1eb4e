#include "rcm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>
#include <thread>

namespace rcm {

BoundaryCondition make_bc(BcKind kind, const PlanarGraph& g) {
  return kind == BcKind::wired ? BoundaryCondition::wired(g) : BoundaryCondition::free_bc();
}

std::string bc_name(BcKind kind) { return kind == BcKind::wired ? "wired" : "free"; }

uint64_t split_seed(uint64_t seed, uint64_t index) {
  // splitmix64 over the (seed, index) pair
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

int default_burn_in(double q) { return q > 4.0 ? 2000 : 200; }

ChainState make_chain(const PlanarGraph& g, const BoundaryCondition& bc,
                      const FkParams& params, uint64_t seed) {
  params.validate(g);
  bc.validate(g);
  ChainState st;
  st.graph = &g;
  st.bc = bc;
  st.params = params;
  st.config = Config(g.edge_count());
  st.rng.seed(seed);
  st.block_of = bc.block_of(g);
  st.stamp.assign(g.vertex_count() + bc.blocks.size(), 0);
  st.stamp_counter = 0;
  return st;
}

bool connected_without_edge(ChainState& state, int edge) {
  const PlanarGraph& g = *state.graph;
  int src = g.edges[edge].u, dst = g.edges[edge].v;
  int nv = g.vertex_count();
  uint32_t stamp = ++state.stamp_counter;
  if (stamp == 0) {  // counter wrapped
    std::fill(state.stamp.begin(), state.stamp.end(), 0);
    stamp = ++state.stamp_counter;
  }
  // breadth-first search with early exit; entering a wired block teleports to
  // all of its members
  std::deque<int> queue;
  auto visit = [&](int v) {
    if (state.stamp[v] == stamp) return;
    state.stamp[v] = stamp;
    queue.push_back(v);
    int b = state.block_of[v];
    if (b >= 0 && state.stamp[nv + b] != stamp) {
      state.stamp[nv + b] = stamp;
      for (int w : state.bc.blocks[b])
        if (state.stamp[w] != stamp) {
          state.stamp[w] = stamp;
          queue.push_back(w);
        }
    }
  };
  visit(src);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == dst) return true;
    for (auto [w, e] : g.adjacency()[v]) {
      if (e == edge || !state.config.open(e)) continue;
      if (w == dst) return true;
      visit(w);
    }
  }
  return state.stamp[dst] == stamp;
}

void glauber_step(ChainState& state, int edge) {
  double pe = state.params.p[edge];
  double accept;
  if (state.params.q == 1.0) {
    accept = pe;
  } else {
    accept = connected_without_edge(state, edge)
                 ? pe
                 : pe / (pe + (1.0 - pe) * state.params.q);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  state.config.set(edge, u(state.rng) < accept);
}

void glauber_sweep(ChainState& state) {
  for (int e = 0; e < state.graph->edge_count(); ++e) glauber_step(state, e);
  ++state.sweeps;
}

Config sample(const PlanarGraph& g, const BoundaryCondition& bc, const FkParams& params,
              int burn_in, uint64_t seed) {
  if (burn_in < 1) throw std::invalid_argument("burn-in must be at least one sweep");
  if (params.q == 1.0) {
    // product measure: a single fixed-order sweep is an exact sample
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Config c(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) c.set(e, u(rng) < params.p[e]);
    return c;
  }
  ChainState st = make_chain(g, bc, params, seed);
  for (int sweep = 0; sweep < burn_in; ++sweep) glauber_sweep(st);
  return st.config;
}

// --- estimator scaffolding ----------------------------------------------------------

namespace {

// mean of an indicator over independent trials, optionally across threads;
// per-trial seeds make the result independent of the partitioning
double indicator_mean(long trials, int workers, uint64_t seed,
                      const std::function<bool(uint64_t trial_seed)>& run) {
  if (trials < 1) throw std::invalid_argument("at least one trial required");
  workers = std::max(1, workers);
  std::vector<long> hits(workers, 0);
  auto task = [&](int w) {
    long own = 0;
    for (long t = w; t < trials; t += workers)
      if (run(split_seed(seed, static_cast<uint64_t>(t)))) ++own;
    hits[w] = own;
  };
  if (workers == 1) {
    task(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(task, w);
    for (auto& th : pool) th.join();
  }
  long total = 0;
  for (long h : hits) total += h;
  return double(total) / double(trials);
}

double binomial_stderr(double phat, long trials) {
  return std::sqrt(std::max(0.0, phat * (1.0 - phat) / double(trials)));
}

}  // namespace

EstimateRecord crossing_estimator(int width, int height, double p, double q, BcKind bc,
                                  long trials, uint64_t seed, int workers, int burn_in) {
  PlanarGraph g = build_rect(width, height);
  BoundaryCondition cond = make_bc(bc, g);
  FkParams params = FkParams::uniform(g, p, q);
  EventSpec ev = EventSpec::horizontal_crossing();
  if (burn_in < 0) burn_in = default_burn_in(q);
  double mean = indicator_mean(trials, workers, seed, [&](uint64_t s) {
    Config c = sample(g, cond, params, burn_in, s);
    return ev.pred(g, c);
  });
  EstimateRecord rec;
  rec.observable = "crossing";
  rec.estimate = mean;
  rec.stderror = binomial_stderr(mean, trials);
  rec.trials = trials;
  rec.seed = seed;
  rec.graph_desc = "rect:" + std::to_string(width) + "x" + std::to_string(height);
  rec.p = p;
  rec.q = q;
  rec.n = height;
  rec.bc = bc_name(bc);
  return rec;
}

EstimateRecord one_arm_estimator(int n, double p, double q, BcKind bc, long trials,
                                 uint64_t seed, int workers, int burn_in) {
  PlanarGraph g = build_box(n);
  BoundaryCondition cond = make_bc(bc, g);
  FkParams params = FkParams::uniform(g, p, q);
  int origin = -1;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.coords[v].x == 0 && g.coords[v].y == 0) origin = v;
  std::vector<int> boundary = g.boundary_vertices();
  EventSpec ev = EventSpec::connectivity({origin}, boundary);
  if (burn_in < 0) burn_in = default_burn_in(q);
  double mean = indicator_mean(trials, workers, seed, [&](uint64_t s) {
    Config c = sample(g, cond, params, burn_in, s);
    return ev.pred(g, c);
  });
  EstimateRecord rec;
  rec.observable = "one_arm";
  rec.estimate = mean;
  rec.stderror = binomial_stderr(mean, trials);
  rec.trials = trials;
  rec.seed = seed;
  rec.graph_desc = "box:" + std::to_string(n);
  rec.p = p;
  rec.q = q;
  rec.n = n;
  rec.bc = bc_name(bc);
  return rec;
}

EstimateRecord circuit_estimator(int n, double p, double q, BcKind bc, long trials,
                                 uint64_t seed, bool dual, int workers, int burn_in) {
  PlanarGraph g = build_box(2 * n);
  BoundaryCondition cond = make_bc(bc, g);
  FkParams params = FkParams::uniform(g, p, q);
  EventSpec ev = EventSpec::annulus_circuit(n, dual);
  if (burn_in < 0) burn_in = default_burn_in(q);
  double mean = indicator_mean(trials, workers, seed, [&](uint64_t s) {
    Config c = sample(g, cond, params, burn_in, s);
    return ev.pred(g, c);
  });
  EstimateRecord rec;
  rec.observable = dual ? "circuit_dual" : "circuit";
  rec.estimate = mean;
  rec.stderror = binomial_stderr(mean, trials);
  rec.trials = trials;
  rec.seed = seed;
  rec.graph_desc = "box:" + std::to_string(2 * n);
  rec.p = p;
  rec.q = q;
  rec.n = n;
  rec.bc = bc_name(bc);
  return rec;
}

DichotomyReport u_n_sequence(const std::vector<int>& ns, double q, long trials,
                             uint64_t seed, int workers) {
  if (trials < 1) throw std::invalid_argument("at least one trial required");
  if (ns.size() < 2) throw std::invalid_argument("need at least two scales");
  double p = self_dual_point(q);
  DichotomyReport rep;
  for (size_t i = 0; i < ns.size(); ++i) {
    int n = ns[i];
    PlanarGraph g = build_box(10 * n);
    FkParams params = FkParams::uniform(g, p, q);
    EventSpec ev = EventSpec::annulus_circuit(n);
    EstimateRecord rec;
    rec.observable = "u_n";
    rec.trials = trials;
    rec.seed = seed;
    rec.graph_desc = "box:" + std::to_string(10 * n);
    rec.p = p;
    rec.q = q;
    rec.n = n;
    rec.bc = "free";
    if (q == 1.0) {
      double mean = indicator_mean(trials, workers, split_seed(seed, 1000 + i), [&](uint64_t s) {
        Config c = sample(g, BoundaryCondition::free_bc(), params, 1, s);
        return ev.pred(g, c);
      });
      rec.estimate = mean;
      rec.stderror = binomial_stderr(mean, trials);
    } else {
      // one thinned chain with batch-means errors
      ChainState st = make_chain(g, BoundaryCondition::free_bc(), params,
                                 split_seed(seed, 1000 + i));
      int burn = default_burn_in(q);
      for (int swp = 0; swp < burn; ++swp) glauber_sweep(st);
      const int thin = 2;
      const int nbatch = 25;
      long per_batch = std::max<long>(1, trials / nbatch);
      std::vector<double> batch_means;
      long done = 0;
      double total = 0;
      while (done < trials) {
        long this_batch = std::min<long>(per_batch, trials - done);
        long hit = 0;
        for (long t = 0; t < this_batch; ++t) {
          for (int swp = 0; swp < thin; ++swp) glauber_sweep(st);
          if (ev.pred(g, st.config)) ++hit;
        }
        batch_means.push_back(double(hit) / double(this_batch));
        total += hit;
        done += this_batch;
      }
      rec.estimate = total / double(trials);
      double mean_of_means = 0;
      for (double b : batch_means) mean_of_means += b;
      mean_of_means /= batch_means.size();
      double var = 0;
      for (double b : batch_means) var += (b - mean_of_means) * (b - mean_of_means);
      var /= std::max<size_t>(1, batch_means.size() - 1);
      rec.stderror = std::sqrt(var / batch_means.size());
    }
    rep.records.push_back(rec);
  }
  // decay: successive decrease at three sigma with decreasing ratios;
  // positivity: all estimates bounded away from zero at three sigma
  bool decreasing = true;
  for (size_t i = 0; i + 1 < rep.records.size(); ++i) {
    const auto& a = rep.records[i];
    const auto& b = rep.records[i + 1];
    double gap = a.estimate - b.estimate;
    double sigma = std::sqrt(a.stderror * a.stderror + b.stderror * b.stderror);
    if (gap < 3 * sigma) decreasing = false;
  }
  bool ratios_decreasing = true;
  for (size_t i = 0; i + 2 < rep.records.size(); ++i) {
    double r1 = rep.records[i + 1].estimate / std::max(1e-300, rep.records[i].estimate);
    double r2 = rep.records[i + 2].estimate / std::max(1e-300, rep.records[i + 1].estimate);
    if (!(r2 < r1)) ratios_decreasing = false;
  }
  rep.decay_flag = decreasing && ratios_decreasing;
  bool positive = true;
  for (const auto& r : rep.records)
    if (r.estimate - 3 * r.stderror <= 0) positive = false;
  rep.positive_flag = positive && !rep.decay_flag;
  rep.note = rep.decay_flag ? "geometric decay at three sigma (statistical evidence only)"
             : rep.positive_flag
                 ? "uniformly positive at three sigma (statistical evidence only)"
                 : "inconclusive at three sigma";
  return rep;
}

SlopeFit correlation_length_estimator(const std::vector<int>& ns, double p, double q,
                                      long trials, uint64_t seed, int workers) {
  if (ns.size() < 3) throw std::invalid_argument("need at least three scales for the fit");
  SlopeFit fit;
  std::vector<double> xs, ys, ws;
  for (size_t i = 0; i < ns.size(); ++i) {
    EstimateRecord rec =
        one_arm_estimator(ns[i], p, q, BcKind::free_bc, trials, split_seed(seed, 7000 + i),
                          workers);
    fit.records.push_back(rec);
    if (rec.estimate <= 0)
      throw std::runtime_error("one-arm estimate vanished; increase trials");
    xs.push_back(ns[i]);
    ys.push_back(std::log(rec.estimate));
    double sigma_log = rec.stderror / rec.estimate;
    ws.push_back(sigma_log > 0 ? 1.0 / (sigma_log * sigma_log) : 1.0);
  }
  // weighted least squares for y = a + b x
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    swx += ws[i] * xs[i];
    swy += ws[i] * ys[i];
    swxx += ws[i] * xs[i] * xs[i];
    swxy += ws[i] * xs[i] * ys[i];
  }
  double denom = sw * swxx - swx * swx;
  fit.slope = (sw * swxy - swx * swy) / denom;
  fit.slope_stderr = std::sqrt(sw / denom);
  fit.xi = fit.slope < 0 ? -1.0 / fit.slope : std::numeric_limits<double>::infinity();
  return fit;
}

int cylinder_crossing_clusters(const Config& config, const PlanarGraph& g) {
  if (g.topology != Topology::torus) throw std::invalid_argument("needs a torus graph");
  int L = g.torus_w, M = g.torus_h;
  UnionFind uf(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!config.open(e)) continue;
    int b = e / L;
    if (b == M - 1) continue;  // seam edges removed by the cut
    uf.unite(g.edges[e].u, g.edges[e].v);
  }
  // crossing clusters touch both boundary rows of the cut cylinder
  std::map<int, int> flags;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int y = static_cast<int>(std::lround(g.coords[v].y));
    if (y == 0) flags[uf.find(v)] |= 1;
    if (y == M - 1) flags[uf.find(v)] |= 2;
  }
  int count = 0;
  for (auto& [root, f] : flags)
    if (f == 3) ++count;
  return count;
}

EstimateRecord ek_crossing_estimator(int L, int M, int k, double q, long trials,
                                     uint64_t seed, int workers, int burn_in) {
  PlanarGraph g = build_torus_black(L, M);
  double p = self_dual_point(q);
  FkParams params = FkParams::uniform(g, p, q);
  if (burn_in < 0) burn_in = default_burn_in(q);
  double mean = indicator_mean(trials, workers, seed, [&](uint64_t s) {
    Config c = sample(g, BoundaryCondition::free_bc(), params, burn_in, s);
    return cylinder_crossing_clusters(c, g) >= k;
  });
  EstimateRecord rec;
  rec.observable = "ek_crossing";
  rec.estimate = mean;
  rec.stderror = binomial_stderr(mean, trials);
  rec.trials = trials;
  rec.seed = seed;
  rec.graph_desc = "torus-black:" + std::to_string(L) + "x" + std::to_string(M);
  rec.p = p;
  rec.q = q;
  rec.n = k;
  rec.torus_l = L;
  rec.torus_m = M;
  rec.bc = "periodic";
  return rec;
}

bool rect_dual_vertical_crossing(const PlanarGraph& rect, const Config& config) {
  if (rect.topology != Topology::rect && rect.topology != Topology::box)
    throw std::invalid_argument("needs a rectangle graph");
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& c : rect.coords) {
    x0 = std::min(x0, c.x);
    x1 = std::max(x1, c.x);
    y0 = std::min(y0, c.y);
    y1 = std::max(y1, c.y);
  }
  int w = static_cast<int>(std::lround(x1 - x0));
  int h = static_cast<int>(std::lround(y1 - y0));
  // faces indexed by lower-left corner offset; -1 = top terminal, -2 = bottom
  auto fid = [&](int fx, int fy) { return fx + fy * w; };
  std::map<std::pair<int, int>, int> edge_at;  // doubled midpoint -> edge
  for (int e = 0; e < rect.edge_count(); ++e) {
    const Vec2& a = rect.coords[rect.edges[e].u];
    const Vec2& b = rect.coords[rect.edges[e].v];
    edge_at[{int(std::lround(a.x + b.x - 2 * x0)), int(std::lround(a.y + b.y - 2 * y0))}] = e;
  }
  auto passable = [&](int mx2, int my2) {
    auto it = edge_at.find({mx2, my2});
    if (it == edge_at.end()) return false;  // outside the rectangle
    return !config.open(it->second);
  };
  std::vector<uint8_t> seen(std::max(1, w * h), 0);
  std::deque<int> queue;
  // enter from above through closed top-row horizontal edges
  for (int fx = 0; fx < w; ++fx)
    if (passable(2 * fx + 1, 2 * h) && !seen[fid(fx, h - 1)]) {
      seen[fid(fx, h - 1)] = 1;
      queue.push_back(fid(fx, h - 1));
    }
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    int fx = f % w, fy = f / w;
    if (fy == 0 && passable(2 * fx + 1, 0)) return true;  // exit below
    struct Step {
      int dx, dy, mx2, my2;
    };
    Step steps[4] = {{1, 0, 2 * fx + 2, 2 * fy + 1},
                     {-1, 0, 2 * fx, 2 * fy + 1},
                     {0, 1, 2 * fx + 1, 2 * fy + 2},
                     {0, -1, 2 * fx + 1, 2 * fy}};
    for (const auto& s : steps) {
      int gx = fx + s.dx, gy = fy + s.dy;
      if (gx < 0 || gx >= w || gy < 0 || gy >= h) continue;
      if (!passable(s.mx2, s.my2)) continue;
      int gidx = fid(gx, gy);
      if (!seen[gidx]) {
        seen[gidx] = 1;
        queue.push_back(gidx);
      }
    }
  }
  return false;
}

std::vector<Config> bernoulli_monotone_coupling(const PlanarGraph& g,
                                                const std::vector<double>& ps,
                                                uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> us(g.edge_count());
  for (auto& x : us) x = u(rng);
  std::vector<Config> out;
  for (double p : ps) {
    Config c(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) c.set(e, us[e] > 1.0 - p);
    out.push_back(std::move(c));
  }
  return out;
}

CoupledChainsReport coupled_chains(const PlanarGraph& g, const BoundaryCondition& bc,
                                   double p_lo, double p_hi, double q, int sweeps,
                                   uint64_t seed) {
  if (p_lo > p_hi) throw std::invalid_argument("parameters out of order");
  ChainState lo = make_chain(g, bc, FkParams::uniform(g, p_lo, q), seed);
  ChainState hi = make_chain(g, bc, FkParams::uniform(g, p_hi, q), seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  CoupledChainsReport rep;
  rep.ordered_throughout = true;
  for (int swp = 0; swp < sweeps; ++swp) {
    for (int e = 0; e < g.edge_count(); ++e) {
      double u = dist(rng);
      auto accept = [&](ChainState& st) {
        double pe = st.params.p[e];
        double a = (st.params.q == 1.0 || connected_without_edge(st, e))
                       ? pe
                       : pe / (pe + (1.0 - pe) * st.params.q);
        st.config.set(e, u < a);
      };
      accept(lo);
      accept(hi);
    }
    for (int e = 0; e < g.edge_count(); ++e)
      if (lo.config.open(e) && !hi.config.open(e)) rep.ordered_throughout = false;
  }
  rep.lo = lo.config;
  rep.hi = hi.config;
  return rep;
}

double chain_occupation_tv(const PlanarGraph& g, const BoundaryCondition& bc,
                           const FkParams& params, long sweeps, uint64_t seed) {
  if (g.edge_count() > 16) throw std::invalid_argument("occupation check limited to 16 edges");
  auto exact = exact_distribution(g, bc, params);
  ChainState st = make_chain(g, bc, params, seed);
  std::vector<long> counts(uint64_t(1) << g.edge_count(), 0);
  for (long swp = 0; swp < sweeps; ++swp) {
    glauber_sweep(st);
    counts[st.config.mask()]++;
  }
  double tv = 0;
  for (size_t m = 0; m < counts.size(); ++m)
    tv += std::abs(double(counts[m]) / double(sweeps) - exact.prob(m));
  return tv / 2;
}

}  // namespace rcm
