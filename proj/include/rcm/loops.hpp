#pragma once

// Loop (interface) representation of random-cluster configurations, arrow
// configurations on the torus, and the weight correspondences between the
// random-cluster, loop and six-vertex models.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "rcm/exact.hpp"
#include "rcm/lattice.hpp"

namespace rcm {

struct Loop {
  std::vector<Vec2> points;    // medial midpoints along the loop
  std::vector<int> edge_ids;   // torus loops: medial edge index per step
  std::vector<int8_t> dirs;    // torus loops: +1 = along canonical direction
  int orientation = 0;         // 0 unoriented, +1 ccw, -1 cw (retractable loops)
  int wind_h = 0, wind_v = 0;  // torus winding numbers
  int turning = 0;             // net quarter turns of the oriented trace

  bool retractable() const { return wind_h == 0 && wind_v == 0; }
  double diameter() const;
};

struct LoopFamily {
  std::vector<Loop> loops;
  bool on_torus = false;
  int torus_w = 0, torus_h = 0;

  int count() const { return static_cast<int>(loops.size()); }
  int count_winding() const;     // l0: loops not retractable to a point
  int count_horizontal() const;  // lh: winding loops with zero vertical winding
};

// parameters of the loop/six-vertex correspondence
struct BkwParams {
  double q = 1.0;
  std::complex<double> lambda;  // e^lambda + e^-lambda = sqrt(q)
  double c = 0.0;               // e^(lambda/2) + e^(-lambda/2)
  double delta = 0.0;           // 1 - c^2/2
  double kappa = 0.0;           // 4*pi/arccos(-sqrt(q)/2), q in [1,4]
};
BkwParams bkw_params(double q, bool other_branch = false);

// --- torus arrow configurations ----------------------------------------------

// arrows on the L x M medial torus grid: vert[a + L*b] orients the edge from
// node (a,b) to node (a,b+1) (+1 = up); horiz[a + L*b] orients node (a,b) to
// node (a+1,b) (+1 = right)
struct ArrowConfig {
  int L = 0, M = 0;
  std::vector<int8_t> vert;
  std::vector<int8_t> horiz;

  ArrowConfig() = default;
  ArrowConfig(int l, int m) : L(l), M(m), vert(l * m, 1), horiz(l * m, 1) {}
  int vidx(int a, int b) const { return ((a % L) + L) % L + L * (((b % M) + M) % M); }
  bool ice_rule_ok(std::string* err = nullptr) const;
  std::vector<int> row_up_counts() const;
};

int c_vertex_count(const ArrowConfig& arrows);
// c^{#type-c vertices}; throws naming the vertex on an ice-rule violation
double six_vertex_weight(const ArrowConfig& arrows, double c);

// --- loop encodings ------------------------------------------------------------

// unoriented loop family separating omega from its dual; torus-black graphs
// use the periodic tracer, box/isoradial graphs the planar one
LoopFamily loop_config(const Config& config, const PlanarGraph& g);

// deterministic orientation with the primal on the right of each loop
LoopFamily orient_loops(const LoopFamily& loops, const Config& config, const PlanarGraph& g);

// s(omega): 1 if some cluster winds around the torus in two independent
// directions (homology rank 2)
int winding_indicator(const Config& config, const PlanarGraph& torus_black);

// random-cluster weight p^{|omega|} (1-p)^{E - |omega|} q^{k(omega)}
double fk_weight(const Config& config, const PlanarGraph& g, double p, double q);

// --- coherent orientations -------------------------------------------------------

struct OrientedFamily {
  std::vector<int8_t> choice;  // +1 / -1 per loop
  int l_plus = 0, l_minus = 0;  // retractable loops, ccw / cw
  std::complex<double> weight;  // e^{lambda (l_plus - l_minus)}
};

// enumerate the 2^l orientation choices of a torus loop family
void coherent_orientations(const LoopFamily& loops, const BkwParams& bp,
                           const std::function<void(const OrientedFamily&)>& visit);

ArrowConfig to_arrow_config(const LoopFamily& loops, const std::vector<int8_t>& choice);

// sum of e^{lambda (l+ - l-)} over all coherent orientations
std::complex<double> orientation_sum(const LoopFamily& loops, const BkwParams& bp);

// all oriented loop splittings coherent with an arrow configuration; visit
// receives (l_plus - l_minus) of each splitting
void coherent_splittings(const ArrowConfig& arrows,
                         const std::function<void(int net_turning_loops)>& visit);

// --- correspondence checks --------------------------------------------------------

struct CorrespondenceReport {
  int L = 0, M = 0;
  double q = 0.0;
  double max_config_error = 0.0;       // per-configuration weight identity
  double max_orientation_error = 0.0;  // orientation sums vs closed form
  double max_sixv_error = 0.0;         // six-vertex weights vs splitting sums
  double aggregate_error = 0.0;        // partition-function identity
  double z_fk = 0.0, z_6v = 0.0, fk_expectation = 0.0, constant = 0.0;
  bool ok(double tol = 1e-9) const {
    return max_config_error < tol && max_orientation_error < tol && max_sixv_error < tol &&
           aggregate_error < tol;
  }
};
CorrespondenceReport check_correspondence(int L, int M, double q, bool other_branch = false);

// enumerate all ice-rule arrow configurations on the L x M torus
void enumerate_arrow_configs(int L, int M, const std::function<void(const ArrowConfig&)>& visit);

// --- metrics ------------------------------------------------------------------------

// cyclic discrete Frechet distance between closed polylines over
// orientation-preserving alignments
double loop_distance(const Loop& a, const Loop& b);

// two-sided matching criterion: every loop of f inside the 1/eps box with
// diameter > eps has a partner in g at loop distance < eps, and vice versa
bool cn_match(const LoopFamily& f, const LoopFamily& g, double eps);
// minimal matching eps by bisection
double cn_distance(const LoopFamily& f, const LoopFamily& g, double tol = 1e-6);

// --- serialization -------------------------------------------------------------------

std::string loop_family_to_json(const LoopFamily& f);
LoopFamily loop_family_from_json(const std::string& s);

}  // namespace rcm
