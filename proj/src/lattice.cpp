#include "rcm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rcm {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace

std::string topology_name(Topology t) {
  switch (t) {
    case Topology::box: return "box";
    case Topology::rect: return "rect";
    case Topology::cylinder: return "cylinder";
    case Topology::torus: return "torus";
    case Topology::strip: return "strip";
    case Topology::isoradial: return "isoradial";
    case Topology::generic: return "generic";
  }
  return "generic";
}

Topology topology_from_name(const std::string& s) {
  if (s == "box") return Topology::box;
  if (s == "rect") return Topology::rect;
  if (s == "cylinder") return Topology::cylinder;
  if (s == "torus") return Topology::torus;
  if (s == "strip") return Topology::strip;
  if (s == "isoradial") return Topology::isoradial;
  if (s == "generic") return Topology::generic;
  throw std::invalid_argument("unknown graph type: " + s);
}

std::vector<int> PlanarGraph::boundary_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (boundary[v]) out.push_back(v);
  return out;
}

const std::vector<std::vector<std::pair<int, int>>>& PlanarGraph::adjacency() const {
  if (adj_cache_.empty() && vertex_count() > 0) {
    adj_cache_.assign(vertex_count(), {});
    for (int i = 0; i < edge_count(); ++i) {
      adj_cache_[edges[i].u].push_back({edges[i].v, i});
      adj_cache_[edges[i].v].push_back({edges[i].u, i});
    }
  }
  return adj_cache_;
}

BoundaryCondition BoundaryCondition::wired(const PlanarGraph& g) {
  BoundaryCondition bc;
  bc.blocks.push_back(g.boundary_vertices());
  return bc;
}

bool BoundaryCondition::is_free() const {
  for (const auto& b : blocks)
    if (b.size() >= 2) return false;
  return true;
}

void BoundaryCondition::validate(const PlanarGraph& g) const {
  std::set<int> seen;
  for (const auto& b : blocks) {
    for (int v : b) {
      if (v < 0 || v >= g.vertex_count())
        throw std::invalid_argument("boundary condition references missing vertex");
      if (!g.boundary[v])
        throw std::invalid_argument("boundary condition wires a non-boundary vertex");
      if (!seen.insert(v).second)
        throw std::invalid_argument("boundary condition blocks are not disjoint");
    }
  }
}

std::vector<int> BoundaryCondition::block_of(const PlanarGraph& g) const {
  std::vector<int> out(g.vertex_count(), -1);
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int v : blocks[b]) out[v] = static_cast<int>(b);
  return out;
}

std::string BoundaryCondition::name() const {
  if (blocks.empty()) return "free";
  if (blocks.size() == 1) return "wired";
  return "blocks" + std::to_string(blocks.size());
}

FkParams FkParams::uniform(const PlanarGraph& g, double p, double q) {
  FkParams out;
  out.q = q;
  out.p.assign(g.edge_count(), p);
  out.validate(g);
  return out;
}

FkParams FkParams::isoradial(const PlanarGraph& g, double q) {
  FkParams out;
  out.q = q;
  out.p.resize(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) out.p[i] = edge_weight(g.edges[i].theta, q);
  return out;
}

void FkParams::validate(const PlanarGraph& g) const {
  if (q < 1.0) throw std::invalid_argument("cluster weight q must satisfy q >= 1");
  if (static_cast<int>(p.size()) != g.edge_count())
    throw std::invalid_argument("edge probability vector size mismatch");
  for (double pe : p)
    if (!(pe > 0.0 && pe < 1.0))
      throw std::invalid_argument("edge probabilities must lie strictly in (0,1)");
}

// --- Z^2 boxes and rectangles ----------------------------------------------

namespace {

// grid graph on vertices [x0..x1] x [y0..y1] with dual; horizontal edge block
// first, then vertical, both row-major
PlanarGraph build_grid(int x0, int x1, int y0, int y1, Topology topo) {
  int w = x1 - x0, h = y1 - y0;
  PlanarGraph g;
  g.topology = topo;
  auto vid = [&](int x, int y) { return (x - x0) + (w + 1) * (y - y0); };
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      g.coords.push_back({double(x), double(y)});
      g.boundary.push_back(x == x0 || x == x1 || y == y0 || y == y1 ? 1 : 0);
    }
  if (w == 0 && h == 0) g.boundary[0] = 1;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x < x1; ++x)
      g.edges.push_back({vid(x, y), vid(x + 1, y), kPi / 2});
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x <= x1; ++x)
      g.edges.push_back({vid(x, y), vid(x, y + 1), kPi / 2});

  // dual: one vertex per face of Z^2 adjacent to an edge of g; the faces
  // strictly inside plus one exterior face per boundary edge
  auto dual = std::make_shared<PlanarGraph>();
  dual->topology = Topology::generic;
  std::map<std::pair<int, int>, int> face_id;  // keyed by doubled center coords
  auto face = [&](int cx2, int cy2) {
    auto it = face_id.find({cx2, cy2});
    if (it != face_id.end()) return it->second;
    int id = dual->vertex_count();
    face_id[{cx2, cy2}] = id;
    dual->coords.push_back({cx2 / 2.0, cy2 / 2.0});
    bool interior = cx2 > 2 * x0 && cx2 < 2 * x1 && cy2 > 2 * y0 && cy2 < 2 * y1;
    dual->boundary.push_back(interior ? 0 : 1);
    return id;
  };
  for (const auto& e : g.edges) {
    Vec2 a = g.coords[e.u], b = g.coords[e.v];
    int mx2 = int(a.x + b.x), my2 = int(a.y + b.y);  // doubled midpoint
    int f1, f2;
    if (a.y == b.y) {  // horizontal edge: faces above and below
      f1 = face(mx2, my2 + 1);
      f2 = face(mx2, my2 - 1);
    } else {  // vertical edge: faces right and left
      f1 = face(mx2 + 1, my2);
      f2 = face(mx2 - 1, my2);
    }
    dual->edges.push_back({f1, f2, kPi / 2});
  }
  g.dual = dual;
  g.dual_edge.resize(g.edge_count());
  dual->dual_edge.resize(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) g.dual_edge[i] = i, dual->dual_edge[i] = i;
  g.adjacency();
  dual->adjacency();
  return g;
}

}  // namespace

PlanarGraph build_box(int n) {
  if (n < 0) throw std::invalid_argument("box size must be nonnegative");
  if (n == 0) {
    PlanarGraph g;
    g.topology = Topology::box;
    g.coords.push_back({0, 0});
    g.boundary.push_back(1);
    return g;
  }
  return build_grid(-n, n, -n, n, Topology::box);
}

PlanarGraph build_rect(int w, int h) {
  if (w < 1 || h < 0) throw std::invalid_argument("rectangle must have positive width");
  return build_grid(0, w, 0, h, Topology::rect);
}

PlanarGraph build_torus(int L, int M) {
  if (L < 2 || M < 2 || L % 2 || M % 2)
    throw std::invalid_argument("torus width and height must be even and >= 2");
  PlanarGraph g;
  g.topology = Topology::torus;
  g.torus_w = L;
  g.torus_h = M;
  auto vid = [&](int x, int y) { return ((x % L) + L) % L + L * (((y % M) + M) % M); };
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x) {
      g.coords.push_back({double(x), double(y)});
      g.boundary.push_back(0);
    }
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x) g.edges.push_back({vid(x, y), vid(x + 1, y), kPi / 2});
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x) g.edges.push_back({vid(x, y), vid(x, y + 1), kPi / 2});

  // dual torus on the faces; dual edge i crosses primal edge i
  auto dual = std::make_shared<PlanarGraph>();
  dual->topology = Topology::torus;
  dual->torus_w = L;
  dual->torus_h = M;
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x) {
      dual->coords.push_back({x + 0.5, y + 0.5});
      dual->boundary.push_back(0);
    }
  auto fid = vid;
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x) dual->edges.push_back({fid(x, y - 1), fid(x, y), kPi / 2});
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x) dual->edges.push_back({fid(x - 1, y), fid(x, y), kPi / 2});
  g.dual = dual;
  g.dual_edge.resize(g.edge_count());
  dual->dual_edge.resize(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) g.dual_edge[i] = i, dual->dual_edge[i] = i;
  g.adjacency();
  dual->adjacency();
  return g;
}

PlanarGraph build_torus_black(int L, int M) {
  if (L < 2 || M < 2 || L % 2 || M % 2)
    throw std::invalid_argument("torus width and height must be even and >= 2");
  PlanarGraph g;
  g.topology = Topology::torus;
  g.torus_w = L;
  g.torus_h = M;
  std::vector<int> black_id(L * M, -1);
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x)
      if ((x + y) % 2 == 0) {
        black_id[x + L * y] = g.vertex_count();
        g.coords.push_back({double(x), double(y)});
        g.boundary.push_back(0);
      }
  auto black = [&](int x, int y) {
    return black_id[((x % L) + L) % L + L * (((y % M) + M) % M)];
  };
  // one edge per torus face [a,a+1]x[b,b+1]: the black diagonal
  for (int b = 0; b < M; ++b)
    for (int a = 0; a < L; ++a) {
      if ((a + b) % 2 == 0)
        g.edges.push_back({black(a, b), black(a + 1, b + 1), kPi / 2});
      else
        g.edges.push_back({black(a + 1, b), black(a, b + 1), kPi / 2});
    }
  // dual: white sublattice, white diagonal of the same face
  auto dual = std::make_shared<PlanarGraph>();
  dual->topology = Topology::torus;
  dual->torus_w = L;
  dual->torus_h = M;
  std::vector<int> white_id(L * M, -1);
  for (int y = 0; y < M; ++y)
    for (int x = 0; x < L; ++x)
      if ((x + y) % 2 == 1) {
        white_id[x + L * y] = dual->vertex_count();
        dual->coords.push_back({double(x), double(y)});
        dual->boundary.push_back(0);
      }
  auto white = [&](int x, int y) {
    return white_id[((x % L) + L) % L + L * (((y % M) + M) % M)];
  };
  for (int b = 0; b < M; ++b)
    for (int a = 0; a < L; ++a) {
      if ((a + b) % 2 == 0)
        dual->edges.push_back({white(a + 1, b), white(a, b + 1), kPi / 2});
      else
        dual->edges.push_back({white(a, b), white(a + 1, b + 1), kPi / 2});
    }
  g.dual = dual;
  g.dual_edge.resize(g.edge_count());
  dual->dual_edge.resize(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) g.dual_edge[i] = i, dual->dual_edge[i] = i;
  g.adjacency();
  dual->adjacency();
  return g;
}

// --- isoradial windows ------------------------------------------------------

PlanarGraph build_isoradial(const std::vector<double>& angles, int cols) {
  int rows = static_cast<int>(angles.size());
  if (rows < 1 || cols < 1) throw std::invalid_argument("isoradial window must be nonempty");
  for (double a : angles)
    if (!(a > 0.0 && a < kPi))
      throw std::invalid_argument("track angles must lie in (0,pi)");

  // diamond vertex p_{r,c} at (c + sum cos(angles[<r]), sum sin(angles[<r]));
  // primal iff r+c even; rhombus (r,c) carries one primal edge
  std::vector<double> cx(rows + 1, 0.0), hy(rows + 1, 0.0);
  for (int r = 0; r < rows; ++r) {
    cx[r + 1] = cx[r] + std::cos(angles[r]);
    hy[r + 1] = hy[r] + std::sin(angles[r]);
  }
  PlanarGraph g;
  g.topology = Topology::isoradial;
  g.track_angles = angles;
  g.iso_rows = rows;
  g.iso_cols = cols;
  g.iso_vertex_id.assign(static_cast<size_t>(rows + 1) * (cols + 1), -1);
  auto dual = std::make_shared<PlanarGraph>();
  dual->topology = Topology::isoradial;
  dual->track_angles = angles;
  dual->iso_rows = rows;
  dual->iso_cols = cols;
  dual->iso_vertex_id.assign(static_cast<size_t>(rows + 1) * (cols + 1), -1);

  for (int r = 0; r <= rows; ++r)
    for (int c = 0; c <= cols; ++c) {
      PlanarGraph& target = ((r + c) % 2 == 0) ? g : *dual;
      int id = target.vertex_count();
      target.iso_vertex_id[static_cast<size_t>(r) * (cols + 1) + c] = id;
      target.coords.push_back({c + cx[r], hy[r]});
      target.boundary.push_back(r == 0 || r == rows || c == 0 || c == cols ? 1 : 0);
    }
  auto pv = [&](int r, int c) { return g.iso_vertex(r, c); };
  auto dv = [&](int r, int c) {
    return dual->iso_vertex_id[static_cast<size_t>(r) * (cols + 1) + c];
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double a = angles[r];
      if ((r + c) % 2 == 0) {
        g.edges.push_back({pv(r, c), pv(r + 1, c + 1), kPi - a});
        dual->edges.push_back({dv(r, c + 1), dv(r + 1, c), a});
      } else {
        g.edges.push_back({pv(r, c + 1), pv(r + 1, c), a});
        dual->edges.push_back({dv(r, c), dv(r + 1, c + 1), kPi - a});
      }
    }
  g.dual = dual;
  g.dual_edge.resize(g.edge_count());
  dual->dual_edge.resize(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) g.dual_edge[i] = i, dual->dual_edge[i] = i;
  g.adjacency();
  dual->adjacency();
  return g;
}

PlanarGraph build_isoradial_uniform(double alpha, int cols, int rows) {
  return build_isoradial(std::vector<double>(rows, alpha), cols);
}

PlanarGraph build_isoradial_mix(double alpha, double beta, int cols, int rows) {
  std::vector<double> angles(rows);
  for (int r = 0; r < rows; ++r) angles[r] = (r % 2 == 0) ? alpha : beta;
  return build_isoradial(angles, cols);
}

// --- small special graphs ---------------------------------------------------

PlanarGraph build_triangle() {
  PlanarGraph g;
  g.topology = Topology::generic;
  g.coords = {{1, 0}, {-0.5, 0.8660254037844386}, {-0.5, -0.8660254037844386}};
  g.boundary = {1, 1, 1};
  g.edges = {{1, 2, kPi / 2}, {2, 0, kPi / 2}, {0, 1, kPi / 2}};  // BC, CA, AB
  g.adjacency();
  return g;
}

PlanarGraph build_star() {
  PlanarGraph g;
  g.topology = Topology::generic;
  g.coords = {{1, 0}, {-0.5, 0.8660254037844386}, {-0.5, -0.8660254037844386}, {0, 0}};
  g.boundary = {1, 1, 1, 0};
  g.edges = {{3, 0, kPi / 2}, {3, 1, kPi / 2}, {3, 2, kPi / 2}};  // OA, OB, OC
  g.adjacency();
  return g;
}

PlanarGraph build_path(int n) {
  if (n < 1) throw std::invalid_argument("path needs at least one edge");
  PlanarGraph g;
  g.topology = Topology::generic;
  for (int i = 0; i <= n; ++i) {
    g.coords.push_back({double(i), 0});
    g.boundary.push_back(i == 0 || i == n ? 1 : 0);
  }
  for (int i = 0; i < n; ++i) g.edges.push_back({i, i + 1, kPi / 2});
  g.adjacency();
  return g;
}

PlanarGraph build_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least three edges");
  PlanarGraph g;
  g.topology = Topology::generic;
  for (int i = 0; i < n; ++i) {
    g.coords.push_back({std::cos(2 * kPi * i / n), std::sin(2 * kPi * i / n)});
    g.boundary.push_back(1);
  }
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n, kPi / 2});
  g.adjacency();
  return g;
}

PlanarGraph build_single_edge() { return build_path(1); }

// --- edge weights -----------------------------------------------------------

double edge_weight(double theta, double q) {
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("subtended angle must lie in (0,pi)");
  if (q < 1.0) throw std::invalid_argument("cluster weight q must satisfy q >= 1");
  double sq = std::sqrt(q);
  if (q < 4.0) {
    double r = std::acos(sq / 2.0) / kPi;
    double s = std::sin(r * theta), sbar = std::sin(r * (kPi - theta));
    return sq * sbar / (s + sq * sbar);
  }
  if (q == 4.0) return (2 * kPi - 2 * theta) / (2 * kPi - theta);
  double r = std::acosh(sq / 2.0) / kPi;
  double s = std::sinh(r * theta), sbar = std::sinh(r * (kPi - theta));
  return sq * sbar / (s + sq * sbar);
}

double dual_parameter(double p, double q) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
  return q * (1.0 - p) / (p + q * (1.0 - p));
}

double self_dual_point(double q) {
  if (q < 1.0) throw std::invalid_argument("cluster weight q must satisfy q >= 1");
  double sq = std::sqrt(q);
  return sq / (1.0 + sq);
}

// --- serialization ----------------------------------------------------------

void write_graph(std::ostream& os, const PlanarGraph& g) {
  os << "graph " << topology_name(g.topology) << " V=" << g.vertex_count()
     << " E=" << g.edge_count() << "\n";
  for (int v = 0; v < g.vertex_count(); ++v)
    os << "v " << v << " " << fmt_double(g.coords[v].x) << " " << fmt_double(g.coords[v].y)
       << " " << int(g.boundary[v]) << "\n";
  for (int i = 0; i < g.edge_count(); ++i) {
    os << "e " << i << " " << g.edges[i].u << " " << g.edges[i].v;
    if (g.topology == Topology::isoradial) os << " theta=" << fmt_double(g.edges[i].theta);
    os << "\n";
  }
}

PlanarGraph read_graph(std::istream& is) {
  PlanarGraph g;
  std::string tag, type;
  int nv = 0, ne = 0;
  is >> tag;
  if (tag != "graph") throw std::invalid_argument("bad graph header");
  is >> type;
  g.topology = topology_from_name(type);
  std::string field;
  while (is >> field && field.rfind("V=", 0) != 0) {}
  nv = std::stoi(field.substr(2));
  is >> field;
  ne = std::stoi(field.substr(2));
  g.coords.resize(nv);
  g.boundary.resize(nv);
  g.edges.resize(ne);
  for (int k = 0; k < nv; ++k) {
    int id, b;
    double x, y;
    is >> tag >> id >> x >> y >> b;
    if (tag != "v" || id < 0 || id >= nv) throw std::invalid_argument("bad vertex line");
    g.coords[id] = {x, y};
    g.boundary[id] = static_cast<uint8_t>(b);
  }
  for (int k = 0; k < ne; ++k) {
    int id, u, v;
    is >> tag >> id >> u >> v;
    if (tag != "e" || id < 0 || id >= ne) throw std::invalid_argument("bad edge line");
    double theta = kPi / 2;
    if (is.peek() == ' ') {
      std::string rest;
      std::getline(is, rest);
      auto pos = rest.find("theta=");
      if (pos != std::string::npos) theta = std::stod(rest.substr(pos + 6));
    }
    g.edges[id] = {u, v, theta};
  }
  g.adjacency();
  return g;
}

std::string graph_to_string(const PlanarGraph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

PlanarGraph graph_from_string(const std::string& s) {
  std::istringstream is(s);
  return read_graph(is);
}

uint64_t graph_hash(const PlanarGraph& g) {
  std::string s = graph_to_string(g);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rcm
