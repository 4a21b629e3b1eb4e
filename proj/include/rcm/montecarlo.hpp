#pragma once

// Seedable heat-bath dynamics for random-cluster measures and the standard
// observable estimators: crossings, one-arm decay, circuits, cylinder
// crossings, correlation length.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rcm/exact.hpp"
#include "rcm/lattice.hpp"

namespace rcm {

enum class BcKind { free_bc, wired };
BoundaryCondition make_bc(BcKind kind, const PlanarGraph& g);
std::string bc_name(BcKind kind);

struct ChainState {
  const PlanarGraph* graph = nullptr;
  BoundaryCondition bc;
  FkParams params;
  Config config;
  std::mt19937_64 rng;
  uint64_t sweeps = 0;

  // scratch for connectivity queries
  std::vector<int> block_of;
  std::vector<uint32_t> stamp;
  uint32_t stamp_counter = 0;
};

ChainState make_chain(const PlanarGraph& g, const BoundaryCondition& bc,
                      const FkParams& params, uint64_t seed);

// resample one edge from its exact conditional law
void glauber_step(ChainState& state, int edge);
// one full sweep in fixed edge order
void glauber_sweep(ChainState& state);

// are u and v connected in the configuration with `edge` removed, counting
// boundary wiring as connections
bool connected_without_edge(ChainState& state, int edge);

// deterministic stream split for per-trial seeds
uint64_t split_seed(uint64_t seed, uint64_t index);

int default_burn_in(double q);

// configuration after `burn_in` full sweeps (i.i.d. fill for q = 1)
Config sample(const PlanarGraph& g, const BoundaryCondition& bc, const FkParams& params,
              int burn_in, uint64_t seed);

struct EstimateRecord {
  std::string observable;
  double estimate = 0.0;
  double stderror = 0.0;
  long trials = 0;
  uint64_t seed = 0;
  std::string graph_desc;
  double p = 0.0, q = 1.0;
  int n = 0, torus_l = 0, torus_m = 0;
  std::string bc;
};

EstimateRecord crossing_estimator(int width, int height, double p, double q, BcKind bc,
                                  long trials, uint64_t seed, int workers = 1,
                                  int burn_in = -1);
EstimateRecord one_arm_estimator(int n, double p, double q, BcKind bc, long trials,
                                 uint64_t seed, int workers = 1, int burn_in = -1);
EstimateRecord circuit_estimator(int n, double p, double q, BcKind bc, long trials,
                                 uint64_t seed, bool dual = false, int workers = 1,
                                 int burn_in = -1);

struct DichotomyReport {
  std::vector<EstimateRecord> records;  // one per n, observable = circuit probability
  bool decay_flag = false;              // geometric decay at three sigma
  bool positive_flag = false;           // uniformly positive at three sigma
  std::string note;
};
// u_n = circuit probability around the n-annulus inside the free 10n-box at
// the self-dual point
DichotomyReport u_n_sequence(const std::vector<int>& ns, double q, long trials,
                             uint64_t seed, int workers = 1);

struct SlopeFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double xi = 0.0;  // -1/slope
  std::vector<EstimateRecord> records;
};
SlopeFit correlation_length_estimator(const std::vector<int>& ns, double p, double q,
                                      long trials, uint64_t seed, int workers = 1);

// number of clusters crossing the cylinder obtained by cutting the torus at
// height zero
int cylinder_crossing_clusters(const Config& config, const PlanarGraph& torus_black);
EstimateRecord ek_crossing_estimator(int L, int M, int k, double q, long trials,
                                     uint64_t seed, int workers = 1, int burn_in = -1);

// open top-bottom crossing of the rectangle's dual configuration
bool rect_dual_vertical_crossing(const PlanarGraph& rect, const Config& config);

// shared-uniform coupling of Bernoulli configurations across parameters
std::vector<Config> bernoulli_monotone_coupling(const PlanarGraph& g,
                                                const std::vector<double>& ps, uint64_t seed);

struct CoupledChainsReport {
  Config lo, hi;
  bool ordered_throughout = false;
};
// two heat-bath chains driven by the same uniforms at p_lo <= p_hi; edgewise
// order is checked after every sweep
CoupledChainsReport coupled_chains(const PlanarGraph& g, const BoundaryCondition& bc,
                                   double p_lo, double p_hi, double q, int sweeps,
                                   uint64_t seed);

// total-variation distance of the chain occupation measure from the exact one
double chain_occupation_tv(const PlanarGraph& g, const BoundaryCondition& bc,
                           const FkParams& params, long sweeps, uint64_t seed);

}  // namespace rcm
