#pragma once

// Graph families for the two-dimensional random-cluster model: boxes, tori,
// rectangles and isoradial rectangular lattices, together with their duals
// and per-edge weights.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rcm {

enum class Topology { box, rect, cylinder, torus, strip, isoradial, generic };

std::string topology_name(Topology t);
Topology topology_from_name(const std::string& s);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  int u = -1;
  int v = -1;
  // subtended angle in (0,pi) for isoradial graphs, otherwise pi/2
  double theta = 0.0;
};

class PlanarGraph {
 public:
  Topology topology = Topology::generic;
  std::vector<Vec2> coords;          // one per vertex
  std::vector<uint8_t> boundary;     // one per vertex, 1 = boundary
  std::vector<Edge> edges;

  // dual structure; dual_edge[i] is the index of edge i's dual edge in *dual
  std::shared_ptr<PlanarGraph> dual;
  std::vector<int> dual_edge;

  // torus bookkeeping (width/height in vertices)
  int torus_w = 0;
  int torus_h = 0;

  // isoradial window bookkeeping: track angles per row of rhombi,
  // rows*cols rhombi, one edge per rhombus indexed row-major.
  std::vector<double> track_angles;
  int iso_rows = 0;
  int iso_cols = 0;
  // map from (line r, column c) of the diamond grid to primal vertex index,
  // -1 when that diamond vertex is dual. size (rows+1)*(cols+1).
  std::vector<int> iso_vertex_id;

  int vertex_count() const { return static_cast<int>(coords.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  bool has_dual() const { return dual != nullptr; }

  std::vector<int> boundary_vertices() const;
  // adjacency as (neighbour, edge index) pairs
  const std::vector<std::vector<std::pair<int, int>>>& adjacency() const;

  int iso_vertex(int line, int col) const {
    return iso_vertex_id[static_cast<size_t>(line) * (iso_cols + 1) + col];
  }

 private:
  mutable std::vector<std::vector<std::pair<int, int>>> adj_cache_;
};

// A partition of the boundary vertices into wired blocks. Vertices absent
// from every block are free (singletons).
class BoundaryCondition {
 public:
  std::vector<std::vector<int>> blocks;

  static BoundaryCondition free_bc() { return {}; }
  static BoundaryCondition wired(const PlanarGraph& g);

  bool is_free() const;
  void validate(const PlanarGraph& g) const;
  // block id per vertex; -1 for unwired vertices
  std::vector<int> block_of(const PlanarGraph& g) const;
  std::string name() const;
};

struct FkParams {
  double q = 1.0;
  std::vector<double> p;  // one per edge

  static FkParams uniform(const PlanarGraph& g, double p, double q);
  static FkParams isoradial(const PlanarGraph& g, double q);
  void validate(const PlanarGraph& g) const;
};

// Lattice builders ---------------------------------------------------------

// box Lambda_n = {-n..n}^2 with its dual
PlanarGraph build_box(int n);
// rectangle [0,w] x [0,h] of Z^2 with its dual
PlanarGraph build_rect(int w, int h);
// torus of width L and height M (both even), vertices L*M, edges 2*L*M
PlanarGraph build_torus(int L, int M);
// black sublattice of an even torus: the FK graph whose medial is the torus,
// one edge per torus face, with the white sublattice as dual
PlanarGraph build_torus_black(int L, int M);
// finite window of an isoradial rectangular lattice: `angles[r]` is the
// transverse angle of horizontal track r; cols vertical tracks
PlanarGraph build_isoradial(const std::vector<double>& angles, int cols);
PlanarGraph build_isoradial_uniform(double alpha, int cols, int rows);
// alternating lattice: angle `alpha` on even tracks, `beta` on odd tracks
PlanarGraph build_isoradial_mix(double alpha, double beta, int cols, int rows);
// triangle ABC (3-cycle) and star ABCO (center O = vertex 3) with boundary
// A,B,C; edge order: triangle {BC, CA, AB}, star {OA, OB, OC}
PlanarGraph build_triangle();
PlanarGraph build_star();
// path with n edges
PlanarGraph build_path(int n);
PlanarGraph build_cycle(int n);
PlanarGraph build_single_edge();

// Edge weights --------------------------------------------------------------

// critical isoradial edge probability for subtended angle theta in (0,pi)
double edge_weight(double theta, double q);
// p* solving (p/(1-p)) (p*/(1-p*)) = q
double dual_parameter(double p, double q);
// sqrt(q)/(1+sqrt(q))
double self_dual_point(double q);
// odds p/(1-p)
inline double odds(double p) { return p / (1.0 - p); }

// Serialization --------------------------------------------------------------

void write_graph(std::ostream& os, const PlanarGraph& g);
PlanarGraph read_graph(std::istream& is);
std::string graph_to_string(const PlanarGraph& g);
PlanarGraph graph_from_string(const std::string& s);
uint64_t graph_hash(const PlanarGraph& g);

}  // namespace rcm
