#pragma once

// Deliberately plain reference implementations used as independent oracles in
// the test suites. Nothing here shares code with the library paths it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "rcm/exact.hpp"
#include "rcm/lattice.hpp"

namespace oracle {

// component count by repeated sweeps of label propagation
inline int components(const rcm::PlanarGraph& g, const std::vector<int>& open,
                      const std::vector<std::vector<int>>& blocks) {
  int n = g.vertex_count();
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int e : open) {
      int a = g.edges[e].u, b = g.edges[e].v;
      int m = std::min(label[a], label[b]);
      if (label[a] != m || label[b] != m) {
        label[a] = label[b] = m;
        changed = true;
      }
    }
    for (const auto& blk : blocks)
      for (size_t i = 1; i < blk.size(); ++i) {
        int a = blk[0], b = blk[i];
        int m = std::min(label[a], label[b]);
        if (label[a] != m || label[b] != m) {
          label[a] = label[b] = m;
          changed = true;
        }
      }
  }
  std::set<int> roots(label.begin(), label.end());
  return static_cast<int>(roots.size());
}

// partition function summed configuration by configuration
inline double partition_function(const rcm::PlanarGraph& g,
                                 const std::vector<std::vector<int>>& blocks,
                                 const std::vector<double>& p, double q) {
  int ne = g.edge_count();
  double total = 0.0;
  for (long long mask = 0; mask < (1LL << ne); ++mask) {
    double w = 1.0;
    std::vector<int> open;
    for (int e = 0; e < ne; ++e) {
      if ((mask >> e) & 1) {
        w *= p[e];
        open.push_back(e);
      } else {
        w *= 1.0 - p[e];
      }
    }
    w *= std::pow(q, components(g, open, blocks));
    total += w;
  }
  return total;
}

inline double event_probability(const rcm::PlanarGraph& g,
                                const std::vector<std::vector<int>>& blocks,
                                const std::vector<double>& p, double q,
                                const std::function<bool(long long)>& in_event) {
  int ne = g.edge_count();
  double total = 0.0, hit = 0.0;
  for (long long mask = 0; mask < (1LL << ne); ++mask) {
    double w = 1.0;
    std::vector<int> open;
    for (int e = 0; e < ne; ++e) {
      if ((mask >> e) & 1) {
        w *= p[e];
        open.push_back(e);
      } else {
        w *= 1.0 - p[e];
      }
    }
    w *= std::pow(q, components(g, open, blocks));
    total += w;
    if (in_event(mask)) hit += w;
  }
  return hit / total;
}

// circuit detection by explicit cycle search: does the open subgraph restricted
// to the annulus contain a cycle winding around the origin? Implemented by
// cutting the annulus along the positive x-axis and doubling the cut vertices.
inline bool annulus_circuit_bruteforce(const rcm::PlanarGraph& g, const rcm::Config& c,
                                       int n) {
  auto in_annulus = [&](int v) {
    double m = std::max(std::abs(g.coords[v].x), std::abs(g.coords[v].y));
    return m > n && m <= 2 * n + 1e-9;
  };
  // cut along the half line y = -1/2-ish between y=0 and y=-1 for x>n ... use
  // edges crossing the ray {(x, -0.5): x > n}: vertical edges with x > n
  // joining y=0 and y=-1
  int nv = g.vertex_count();
  std::vector<std::vector<std::pair<int, int>>> adj(2 * nv);  // (to, crossing flag)
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!c.open(e)) continue;
    int u = g.edges[e].u, v = g.edges[e].v;
    if (!in_annulus(u) || !in_annulus(v)) continue;
    const auto& a = g.coords[u];
    const auto& b = g.coords[v];
    bool crossing = a.x == b.x && a.x > n && std::min(a.y, b.y) == -1 && std::max(a.y, b.y) == 0;
    for (int copy = 0; copy < 2; ++copy) {
      int uu = u + copy * nv;
      int vv = crossing ? v + (1 - copy) * nv : v + copy * nv;
      adj[uu].push_back({vv, crossing});
      adj[vv].push_back({uu, crossing});
    }
  }
  // winding cycle exists iff some vertex connects to its own shadow copy
  for (int s = 0; s < nv; ++s) {
    if (!in_annulus(s)) continue;
    std::vector<int> stack = {s};
    std::vector<char> seen(2 * nv, 0);
    seen[s] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (auto [y, flag] : adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    if (seen[s + nv]) return true;
  }
  return false;
}

// exact Bernoulli connection probability between two vertex sets through a
// frontier dynamic programme (independent of the enumeration module); the
// graph must be a grid-like planar graph with integer coordinates.
class BernoulliConnectionDp {
 public:
  // probability that src-set meets dst-set in the open subgraph
  static double probability(const rcm::PlanarGraph& g, double p, const std::set<int>& src,
                            const std::set<int>& dst) {
    // process vertices in index order; state: partition labels of the frontier
    // with two flags per block (touches src / touches dst), plus "done" flag
    int nv = g.vertex_count();
    std::vector<std::vector<std::pair<int, int>>> incident(nv);  // (other, edge)
    for (int e = 0; e < g.edge_count(); ++e) {
      incident[std::max(g.edges[e].u, g.edges[e].v)].push_back(
          {std::min(g.edges[e].u, g.edges[e].v), e});
    }
    // last vertex index at which each vertex is still needed
    std::vector<int> last(nv);
    for (int v = 0; v < nv; ++v) last[v] = v;
    for (int e = 0; e < g.edge_count(); ++e) {
      int a = g.edges[e].u, b = g.edges[e].v;
      last[std::min(a, b)] = std::max(last[std::min(a, b)], std::max(a, b));
    }

    struct State {
      std::vector<int> frontier;         // vertex ids
      std::vector<int> label;            // block label per frontier slot
      std::vector<uint8_t> s_flag, d_flag;  // per block label
    };
    using Key = std::string;
    auto canon = [](const State& st) {
      Key k;
      std::map<int, int> rename;
      for (int l : st.label) {
        auto it = rename.find(l);
        if (it == rename.end()) rename[l] = static_cast<int>(rename.size());
      }
      for (size_t i = 0; i < st.label.size(); ++i) {
        int l = rename[st.label[i]];
        k += char('a' + l);
        k += char('0' + st.s_flag[st.label[i]] + 2 * st.d_flag[st.label[i]]);
      }
      return k;
    };

    std::map<Key, std::pair<State, double>> states;
    double done = 0.0;
    State init;
    states[canon(init)] = {init, 1.0};

    for (int v = 0; v < nv; ++v) {
      // introduce v
      std::map<Key, std::pair<State, double>> next;
      for (auto& [k, sp] : states) {
        State st = sp.first;
        int lbl = 0;
        for (int l : st.label) lbl = std::max(lbl, l + 1);
        st.frontier.push_back(v);
        st.label.push_back(lbl);
        if (static_cast<int>(st.s_flag.size()) <= lbl) {
          st.s_flag.resize(lbl + 1, 0);
          st.d_flag.resize(lbl + 1, 0);
        }
        st.s_flag[lbl] = src.count(v) ? 1 : 0;
        st.d_flag[lbl] = dst.count(v) ? 1 : 0;
        auto key = canon(st);
        auto it = next.find(key);
        if (it == next.end())
          next[key] = {st, sp.second};
        else
          it->second.second += sp.second;
      }
      states.swap(next);
      // add edges from v to earlier vertices
      for (auto [u, e] : incident[v]) {
        std::map<Key, std::pair<State, double>> out;
        auto add = [&](State st, double w) {
          auto key = canon(st);
          auto it = out.find(key);
          if (it == out.end())
            out[key] = {st, w};
          else
            it->second.second += w;
        };
        for (auto& [k, sp] : states) {
          const State& st = sp.first;
          double w = sp.second;
          add(st, w * (1 - p));  // closed
          State open = st;
          int iu = -1, iv = -1;
          for (size_t i = 0; i < open.frontier.size(); ++i) {
            if (open.frontier[i] == u) iu = static_cast<int>(i);
            if (open.frontier[i] == v) iv = static_cast<int>(i);
          }
          int lu = open.label[iu], lv = open.label[iv];
          if (lu != lv) {
            for (auto& l : open.label)
              if (l == lv) l = lu;
            open.s_flag[lu] |= open.s_flag[lv];
            open.d_flag[lu] |= open.d_flag[lv];
          }
          add(open, w * p);
        }
        states.swap(out);
      }
      // retire vertices no longer needed
      std::map<Key, std::pair<State, double>> out;
      for (auto& [k, sp] : states) {
        State st = sp.first;
        double w = sp.second;
        bool success = false;
        for (size_t i = 0; i < st.frontier.size();) {
          if (last[st.frontier[i]] <= v) {
            int l = st.label[i];
            st.frontier.erase(st.frontier.begin() + i);
            st.label.erase(st.label.begin() + i);
            bool alive = false;
            for (int x : st.label) alive |= (x == l);
            if (!alive) {
              if (st.s_flag[l] && st.d_flag[l]) success = true;
              st.s_flag[l] = st.d_flag[l] = 0;
            }
          } else {
            ++i;
          }
        }
        if (success) {
          done += w;
          continue;
        }
        auto key = canon(st);
        auto it = out.find(key);
        if (it == out.end())
          out[key] = {st, w};
        else
          it->second.second += w;
      }
      states.swap(out);
    }
    for (auto& [k, sp] : states) {
      // any surviving block with both flags
      bool success = false;
      for (size_t l = 0; l < sp.first.s_flag.size(); ++l)
        if (sp.first.s_flag[l] && sp.first.d_flag[l]) success = true;
      if (success) done += sp.second;
    }
    return done;
  }
};

// one-arm probability P_p[0 <-> boundary of Lambda_n] for Bernoulli percolation
inline double one_arm_exact(int n, double p) {
  rcm::PlanarGraph g = rcm::build_box(n);
  std::set<int> src, dst;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.coords[v].x == 0 && g.coords[v].y == 0) src.insert(v);
    if (g.boundary[v]) dst.insert(v);
  }
  return BernoulliConnectionDp::probability(g, p, src, dst);
}

}  // namespace oracle
