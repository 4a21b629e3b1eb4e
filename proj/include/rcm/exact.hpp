#pragma once

// Exhaustive-enumeration oracle for random-cluster measures on small graphs:
// partition functions, event probabilities, derivatives, coupling checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rcm/lattice.hpp"

namespace rcm {

// percolation configuration: one bit per edge
struct Config {
  std::vector<uint8_t> bits;

  Config() = default;
  explicit Config(int n) : bits(n, 0) {}
  static Config from_mask(uint64_t mask, int n);
  uint64_t mask() const;

  int size() const { return static_cast<int>(bits.size()); }
  bool open(int e) const { return bits[e] != 0; }
  void set(int e, bool v) { bits[e] = v ? 1 : 0; }
  int open_count() const;
  bool operator==(const Config& o) const { return bits == o.bits; }
  bool operator<=(const Config& o) const;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { reset(); }
  void reset();
  int find(int a);
  bool unite(int a, int b);  // true if components merged
};

// number of connected components k(omega^xi), wired blocks pre-merged
int cluster_count(const Config& config, const PlanarGraph& g, const BoundaryCondition& bc);

// connectivity partition label per vertex under config + wiring
std::vector<int> component_labels(const Config& config, const PlanarGraph& g,
                                  const BoundaryCondition& bc);

bool connected_in_config(const Config& config, const PlanarGraph& g,
                         const BoundaryCondition& bc, int u, int v);

// --- events -----------------------------------------------------------------

struct EventSpec {
  std::string name;
  std::function<bool(const PlanarGraph&, const Config&)> pred;
  bool increasing = false;

  static EventSpec edge_open(int e);
  // some vertex of A connected to some vertex of B in omega (no boundary wiring),
  // optionally restricted to an edge subset
  static EventSpec connectivity(std::vector<int> a, std::vector<int> b,
                                std::optional<std::vector<int>> edge_subset = {});
  // left-right open crossing of a rect/box graph
  static EventSpec horizontal_crossing();
  static EventSpec vertical_crossing();
  // open circuit in Lambda_{2n} \ Lambda_n surrounding Lambda_n, on a box graph
  // containing Lambda_{2n}; dual=true tests the same for the dual configuration
  static EventSpec annulus_circuit(int n, bool dual = false);
  static EventSpec custom(std::string name,
                          std::function<bool(const PlanarGraph&, const Config&)> pred,
                          bool increasing);
};

// brute-force monotonicity certificate, E <= 16
bool certify_increasing(const PlanarGraph& g, const EventSpec& ev);

// --- enumeration ------------------------------------------------------------

inline constexpr int kEnumerationCap = 26;

// visits every configuration with its unnormalized weight
void enumerate_weights(const PlanarGraph& g, const BoundaryCondition& bc,
                       const FkParams& params,
                       const std::function<void(uint64_t mask, double w)>& visit);

double partition_function(const PlanarGraph& g, const BoundaryCondition& bc,
                          const FkParams& params);

double event_probability(const PlanarGraph& g, const BoundaryCondition& bc,
                         const FkParams& params, const EventSpec& event);

// E[f(omega)] under the exact measure
double expectation(const PlanarGraph& g, const BoundaryCondition& bc, const FkParams& params,
                   const std::function<double(const PlanarGraph&, const Config&)>& f);

struct ExactDistribution {
  const PlanarGraph* graph = nullptr;
  BoundaryCondition bc;
  FkParams params;
  double z = 0.0;
  std::vector<double> probs;  // indexed by edge mask

  double prob(uint64_t mask) const { return probs[mask]; }
};

ExactDistribution exact_distribution(const PlanarGraph& g, const BoundaryCondition& bc,
                                     const FkParams& params);

// --- duality ----------------------------------------------------------------

// omega*(e*) = 1 - omega(e) through the dual-edge bijection
Config dual_config(const Config& config, const PlanarGraph& g);

struct DualityReport {
  bool edge_sum_ok = false;   // |omega| + |omega*| = |E|
  bool cluster_id_ok = false;  // k(omega^1) - k(omega*) = (2n-1)^2 - |omega|
};
DualityReport duality_identities(const Config& config, const PlanarGraph& box, int n);

// --- phi_p(S) ----------------------------------------------------------------

// S given as endpoints in Z^2 coordinates; must contain all four edges at the
// origin, or be empty
using LatticeEdge = std::pair<std::pair<int, int>, std::pair<int, int>>;
double phi_s(const std::vector<LatticeEdge>& s, double p);
std::vector<LatticeEdge> star_at_origin();

// --- derivatives --------------------------------------------------------------

// q=1: sum of pivotal probabilities; q>1: covariance form
double russo_derivative(const PlanarGraph& g, const BoundaryCondition& bc,
                        const FkParams& params, const EventSpec& event);

// --- Holley / FKG / domination ------------------------------------------------

struct HolleyReport {
  bool holley_pairs = false;      // cross condition on pairs differing in <= 2 edges
  bool fkg_lattice_lo = false;    // lattice condition for dist_lo
  bool fkg_lattice_hi = false;    // lattice condition for dist_hi
  std::optional<bool> dominated;  // lo <=st hi over all increasing events (E <= 4)
};
HolleyReport check_holley_fkg(const ExactDistribution& lo, const ExactDistribution& hi);

// --- Potts coupling -------------------------------------------------------------

// constant uniform spin per cluster; spins in 1..q
std::vector<int> potts_from_fk(const Config& config, const PlanarGraph& g, int q,
                               std::mt19937_64& rng);

// --- symmetric quad --------------------------------------------------------------

struct QuadReport {
  double probability = 0.0;
  double bound = 0.0;  // 1/(1+q)
  bool bound_ok = false;
};
// rectangle [0,n] x [0,n+1] with left and right sides wired as two blocks,
// at the self-dual point
QuadReport symmetric_quad_check(int n, double q);
QuadReport symmetric_quad_check(const PlanarGraph& quad, const std::vector<int>& arc_ab,
                                const std::vector<int>& arc_cd, double q, double p);

// boundary condition on a subgraph induced by an outside configuration
// (spatial Markov property); `in_h[e]`=1 marks edges of H
BoundaryCondition induced_wiring(const PlanarGraph& g, const BoundaryCondition& bc,
                                 const std::vector<uint8_t>& in_h, const Config& outside,
                                 const PlanarGraph& h, const std::vector<int>& vertex_map);

}  // namespace rcm
