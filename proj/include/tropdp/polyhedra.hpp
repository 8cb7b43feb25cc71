#pragma once

// Exact rational polyhedral complexes of dimension <= 2 in Q^n: cell
// classification, surface statistics, balancing, vertex links, refinement
// by cutting lines, and coarsening to the canonical (crease-free) structure.

#include <algorithm>
#include <array>
#include <cassert>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rational.hpp"
#include "smallgraph.hpp"

namespace tropdp {

enum class CellClass {
  vertex,
  bounded_edge,
  ray,
  triangle,
  square,
  other_bounded,
  flap,
  cone,
  other_unbounded
};

inline const char* cell_class_name(CellClass c) {
  switch (c) {
    case CellClass::vertex: return "vertex";
    case CellClass::bounded_edge: return "bounded_edge";
    case CellClass::ray: return "ray";
    case CellClass::triangle: return "triangle";
    case CellClass::square: return "square";
    case CellClass::other_bounded: return "other_bounded";
    case CellClass::flap: return "flap";
    case CellClass::cone: return "cone";
    case CellClass::other_unbounded: return "other_unbounded";
  }
  return "?";
}

struct Cell {
  int dim = 0;
  std::vector<int> verts;  // indices into PolyComplex::vertices, sorted
  std::vector<int> rays;   // indices into PolyComplex::rays, sorted
  long weight = 1;

  friend bool operator==(const Cell& a, const Cell& b) {
    return a.dim == b.dim && a.verts == b.verts && a.rays == b.rays;
  }
};

struct SurfaceStats {
  long vertices = 0, bounded_edges = 0, rays = 0, triangles = 0, squares = 0,
       other_bounded_2cells = 0, flaps = 0, cones = 0, other_unbounded = 0;

  friend bool operator==(const SurfaceStats&, const SurfaceStats&) = default;

  std::string str() const {
    std::ostringstream os;
    os << "(" << vertices << ", " << bounded_edges << ", " << rays << ", " << triangles << ", "
       << squares << ", " << other_bounded_2cells << ", " << flaps << ", " << cones;
    if (other_unbounded) os << ", other_unbounded=" << other_unbounded;
    os << ")";
    return os.str();
  }
};

struct PolyComplex {
  int ambient_dim = 0;
  std::vector<QVec> vertices;
  std::vector<QVec> rays;  // primitive integer vectors
  std::vector<Cell> cells;

  int add_vertex(const QVec& p) {
    for (size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i] == p) return (int)i;
    vertices.push_back(p);
    return (int)vertices.size() - 1;
  }
  int add_ray(const QVec& r_in) {
    QVec r = primitive(r_in);
    if (is_zero(r)) throw std::invalid_argument("add_ray: zero direction");
    for (size_t i = 0; i < rays.size(); ++i)
      if (rays[i] == r) return (int)i;
    rays.push_back(r);
    return (int)rays.size() - 1;
  }
  void add_cell(Cell c) {
    std::sort(c.verts.begin(), c.verts.end());
    c.verts.erase(std::unique(c.verts.begin(), c.verts.end()), c.verts.end());
    std::sort(c.rays.begin(), c.rays.end());
    c.rays.erase(std::unique(c.rays.begin(), c.rays.end()), c.rays.end());
    for (const auto& d : cells)
      if (d == c) return;
    cells.push_back(std::move(c));
  }

  // direction space generators of a cell
  std::vector<QVec> cell_directions(const Cell& c) const {
    std::vector<QVec> dirs;
    for (size_t k = 1; k < c.verts.size(); ++k)
      dirs.push_back(vertices[c.verts[k]] - vertices[c.verts[0]]);
    for (int r : c.rays) dirs.push_back(rays[r]);
    return dirs;
  }

  int cell_dim_geometric(const Cell& c) const { return (int)rank_of_vectors(cell_directions(c)); }

  // relative interior sample point (vertex centroid plus the ray sum)
  QVec relint_point(const Cell& c) const {
    QVec p(ambient_dim, Q(0));
    for (int v : c.verts) p = p + vertices[v];
    Q inv(1, (long)c.verts.size());
    inv.canonicalize();
    p = inv * p;
    for (int r : c.rays) p = p + rays[r];
    return p;
  }

  bool is_bounded(const Cell& c) const { return c.rays.empty(); }
};

// ---------------------------------------------------------------------------
// classification and statistics

inline CellClass classify_cell(const PolyComplex& X, const Cell& c) {
  int gdim = X.cell_dim_geometric(c);
  if (gdim != c.dim) throw std::domain_error("classify_cell: declared and geometric dimension differ");
  if (c.dim == 0) return CellClass::vertex;
  if (c.dim == 1) return c.rays.empty() ? CellClass::bounded_edge : CellClass::ray;
  if (c.dim != 2) throw std::domain_error("classify_cell: dimension out of range");
  if (c.rays.empty()) {
    if (c.verts.size() == 3) return CellClass::triangle;
    if (c.verts.size() == 4) return CellClass::square;
    return CellClass::other_bounded;
  }
  // recession cone dimension
  std::vector<QVec> rdirs;
  for (int r : c.rays) rdirs.push_back(X.rays[r]);
  size_t rdim = rank_of_vectors(rdirs);
  if (rdim == 1 && c.verts.size() == 2 && c.rays.size() == 1) return CellClass::flap;
  if (rdim == 2 && c.verts.size() == 1 && c.rays.size() == 2) return CellClass::cone;
  return CellClass::other_unbounded;
}

inline SurfaceStats stats(const PolyComplex& X) {
  SurfaceStats s;
  for (const auto& c : X.cells) {
    switch (classify_cell(X, c)) {
      case CellClass::vertex: ++s.vertices; break;
      case CellClass::bounded_edge: ++s.bounded_edges; break;
      case CellClass::ray: ++s.rays; break;
      case CellClass::triangle: ++s.triangles; break;
      case CellClass::square: ++s.squares; break;
      case CellClass::other_bounded: ++s.other_bounded_2cells; break;
      case CellClass::flap: ++s.flaps; break;
      case CellClass::cone: ++s.cones; break;
      case CellClass::other_unbounded: ++s.other_unbounded; break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// incidence

// e is a face of c if its generators are among c's and it lies on the
// boundary: some linear functional on c's direction space vanishes on e
// and is nonnegative on c.
inline bool is_face_of(const PolyComplex& X, const Cell& e, const Cell& c) {
  if (e.dim >= c.dim) return false;
  if (!std::includes(c.verts.begin(), c.verts.end(), e.verts.begin(), e.verts.end())) return false;
  if (!std::includes(c.rays.begin(), c.rays.end(), e.rays.begin(), e.rays.end())) return false;
  if (e.dim + 1 != c.dim && c.dim == 2 && e.dim == 0) {
    // vertex of a 2-cell: fine, subset test plus extremality below
  }
  // functional separating: build phi with phi|dir(e) = 0, phi(x - p_e) >= 0 on c,
  // and phi not identically zero on c. Work in c's direction space.
  QVec pe = X.vertices[e.verts[0]];
  auto dirs_e = X.cell_directions(e);
  // candidate functionals: for each generator of c, the "support" test
  // reduces to: all generators of c relative to pe lie (weakly) on one side
  // of span(dir e) inside span(dir c).
  std::vector<QVec> rel;
  for (int v : c.verts) rel.push_back(X.vertices[v] - pe);
  for (int r : c.rays) rel.push_back(X.rays[r]);
  // build a basis of dir(c): solve for phi in that basis
  auto dirs_c = X.cell_directions(c);
  // represent every rel vector in coordinates of dir(c) basis (dimension <= 2)
  // then the span of dirs_e is a subspace; test one-sidedness.
  // dimension cases: e.dim == c.dim - 1 mostly; for vertex-in-2cell use extremality.
  if (c.dim - e.dim == 1 || (c.dim == 1 && e.dim == 0)) {
    // phi: vanishes on dirs_e; choose from the 2D chart
    // find u in dir(c) with u not in dir(e); test signs of rel components mod dir(e)
    // via a functional: solve phi . d = 0 for d in dirs_e, phi . x free
    // Use Gaussian elimination on the ambient space restricted to dir(c)+pe.
    // Simple approach: find any vector w in dir(c) not in span(dirs_e), define
    // quotient coordinate q(x) = component of x along w modulo dirs_e.
    std::vector<QVec> base = dirs_e;
    QVec w;
    bool found = false;
    for (const auto& d : X.cell_directions(c)) {
      if (!in_span(base, d)) {
        w = d;
        found = true;
        break;
      }
    }
    if (!found) return false;
    // coordinates: x = alpha * w + (dirs_e part); alpha sign = side
    int pos = 0, neg = 0;
    for (const auto& x : rel) {
      // solve x = alpha w + sum beta_i e_i
      std::vector<QVec> gens = base;
      gens.push_back(w);
      QMat A(X.ambient_dim, gens.size());
      for (size_t j = 0; j < gens.size(); ++j)
        for (int i = 0; i < X.ambient_dim; ++i) A(i, j) = gens[j][i];
      auto sol = solve(A, x);
      if (!sol) return false;  // x outside dir(c)+dir(e)? should not happen
      int s = sgn((*sol)[gens.size() - 1]);
      if (s > 0) ++pos;
      if (s < 0) ++neg;
    }
    return !(pos && neg);
  }
  // vertex inside a 2-cell: must be extremal (not a convex combination of the others)
  if (c.dim == 2 && e.dim == 0) {
    // e.verts[0] is a listed vertex of c; listed vertex sets are kept minimal
    return true;
  }
  return false;
}

inline std::vector<int> cells_of_dim(const PolyComplex& X, int d) {
  std::vector<int> out;
  for (size_t i = 0; i < X.cells.size(); ++i)
    if (X.cells[i].dim == d) out.push_back((int)i);
  return out;
}

// ---------------------------------------------------------------------------
// balancing

// Primitive generator of the rank-1 quotient lattice (Z^n cap span(c)) /
// (Z^n cap span(e)), oriented to point from e into c. Returned as a rational
// vector (the class representative divided by its quotient content).
inline QVec transverse_primitive(const PolyComplex& X, const Cell& e, const Cell& c) {
  QVec pe = X.relint_point(e);
  QVec pc = X.relint_point(c);
  auto dirs_e = X.cell_directions(e);
  // integer vector in dir(c) not in dir(e): try generators
  QVec w;
  bool found = false;
  for (const auto& d : X.cell_directions(c)) {
    if (!in_span(dirs_e, d)) {
      w = primitive(d);
      found = true;
      break;
    }
  }
  if (!found) throw std::domain_error("transverse_primitive: cell does not extend the face");
  // reduce by the quotient content so the image generates the quotient lattice
  QVec eu = dirs_e.empty() ? QVec(X.ambient_dim, Q(0)) : primitive(dirs_e[0]);
  Z cont = content_mod(w, eu);
  if (cont == 0) throw std::logic_error("transverse_primitive: degenerate direction");
  QVec out(X.ambient_dim);
  for (int i = 0; i < X.ambient_dim; ++i) out[i] = w[i] / Q(cont);
  // orient toward the cell: compare against pc - pe modulo dir(e)
  std::vector<QVec> gens = dirs_e;
  gens.push_back(out);
  QMat A(X.ambient_dim, gens.size());
  for (size_t j = 0; j < gens.size(); ++j)
    for (int i = 0; i < X.ambient_dim; ++i) A(i, j) = gens[j][i];
  auto sol = solve(A, pc - pe);
  if (!sol) throw std::logic_error("transverse_primitive: relint difference outside span");
  if (sgn((*sol)[gens.size() - 1]) < 0)
    for (auto& x : out) x = -x;
  return out;
}

struct BalanceViolation {
  int face_cell;   // index of the codimension-one cell
  QVec defect;     // sum of weighted transverse primitives modulo span(face) fails
};

// Balancing at every codimension-one cell of the top-dimensional part:
// the weighted sum of transverse primitives lies in the span of the face.
inline bool check_balanced(const PolyComplex& X, std::vector<BalanceViolation>* report = nullptr) {
  int top = 0;
  for (const auto& c : X.cells) top = std::max(top, c.dim);
  if (top == 0) return true;
  bool ok = true;
  for (size_t ei = 0; ei < X.cells.size(); ++ei) {
    const Cell& e = X.cells[ei];
    if (e.dim != top - 1) continue;
    QVec sum(X.ambient_dim, Q(0));
    bool any = false;
    for (const auto& c : X.cells) {
      if (c.dim != top || !is_face_of(X, e, c)) continue;
      any = true;
      QVec t = transverse_primitive(X, e, c);
      sum = sum + Q(c.weight) * t;
    }
    if (!any) continue;
    auto dirs_e = X.cell_directions(e);
    if (!in_span(dirs_e, sum)) {
      ok = false;
      if (report) report->push_back({(int)ei, sum});
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// links

// Link of a vertex: nodes are the 1-cells at v, edges are the 2-cells at v
// (each 2-cell at v has exactly two 1-cell faces through v).
inline SmallGraph link_at_vertex(const PolyComplex& X, int v, std::vector<int>* node_cells = nullptr) {
  std::vector<int> legs;
  for (size_t i = 0; i < X.cells.size(); ++i) {
    const Cell& c = X.cells[i];
    if (c.dim == 1 && std::binary_search(c.verts.begin(), c.verts.end(), v)) legs.push_back((int)i);
  }
  if (node_cells) *node_cells = legs;
  SmallGraph g((int)legs.size());
  for (const auto& c : X.cells) {
    if (c.dim != 2 || !std::binary_search(c.verts.begin(), c.verts.end(), v)) continue;
    std::vector<int> at;
    for (size_t k = 0; k < legs.size(); ++k)
      if (is_face_of(X, X.cells[legs[k]], c)) at.push_back((int)k);
    std::vector<int> through;
    for (int k : at) {
      const Cell& leg = X.cells[legs[k]];
      if (std::binary_search(leg.verts.begin(), leg.verts.end(), v)) through.push_back(k);
    }
    if (through.size() == 2) g.add_edge(through[0], through[1]);
  }
  return g;
}

inline int find_vertex(const PolyComplex& X, const QVec& p) {
  for (size_t i = 0; i < X.vertices.size(); ++i)
    if (X.vertices[i] == p) return (int)i;
  return -1;
}

// ---------------------------------------------------------------------------
// canonical ordering (determinism of emitted artifacts)

inline void sort_canonical(PolyComplex& X) {
  std::vector<int> vperm(X.vertices.size());
  std::iota(vperm.begin(), vperm.end(), 0);
  std::sort(vperm.begin(), vperm.end(),
            [&](int a, int b) { return lex_less(X.vertices[a], X.vertices[b]); });
  std::vector<int> vinv(vperm.size());
  for (size_t i = 0; i < vperm.size(); ++i) vinv[vperm[i]] = (int)i;
  std::vector<QVec> nv(X.vertices.size());
  for (size_t i = 0; i < vperm.size(); ++i) nv[i] = X.vertices[vperm[i]];
  X.vertices = std::move(nv);

  std::vector<int> rperm(X.rays.size());
  std::iota(rperm.begin(), rperm.end(), 0);
  std::sort(rperm.begin(), rperm.end(),
            [&](int a, int b) { return lex_less(X.rays[a], X.rays[b]); });
  std::vector<int> rinv(rperm.size());
  for (size_t i = 0; i < rperm.size(); ++i) rinv[rperm[i]] = (int)i;
  std::vector<QVec> nr(X.rays.size());
  for (size_t i = 0; i < rperm.size(); ++i) nr[i] = X.rays[rperm[i]];
  X.rays = std::move(nr);

  for (auto& c : X.cells) {
    for (auto& v : c.verts) v = vinv[v];
    for (auto& r : c.rays) r = rinv[r];
    std::sort(c.verts.begin(), c.verts.end());
    std::sort(c.rays.begin(), c.rays.end());
  }
  std::sort(X.cells.begin(), X.cells.end(), [](const Cell& a, const Cell& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.verts != b.verts) return a.verts < b.verts;
    return a.rays < b.rays;
  });
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json complex_to_json(const PolyComplex& X) {
  nlohmann::ordered_json j;
  j["ambient_dim"] = X.ambient_dim;
  auto vecjson = [](const QVec& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& q : v) a.push_back(rational_str(q));
    return a;
  };
  j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : X.vertices) j["vertices"].push_back(vecjson(v));
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : X.cells) {
    nlohmann::ordered_json cj;
    cj["dim"] = c.dim;
    cj["verts"] = c.verts;
    cj["rays"] = nlohmann::ordered_json::array();
    for (int r : c.rays) cj["rays"].push_back(vecjson(X.rays[r]));
    cj["weight"] = c.weight;
    j["cells"].push_back(cj);
  }
  return j;
}

inline PolyComplex complex_from_json(const nlohmann::json& j) {
  PolyComplex X;
  X.ambient_dim = j.at("ambient_dim").get<int>();
  for (const auto& vj : j.at("vertices")) {
    QVec v;
    for (const auto& q : vj) v.push_back(parse_rational(q.get<std::string>()));
    X.vertices.push_back(v);
  }
  for (const auto& cj : j.at("cells")) {
    Cell c;
    c.dim = cj.at("dim").get<int>();
    c.verts = cj.at("verts").get<std::vector<int>>();
    c.weight = cj.value("weight", 1);
    for (const auto& rj : cj.at("rays")) {
      QVec r;
      for (const auto& q : rj) r.push_back(parse_rational(q.get<std::string>()));
      c.rays.push_back(X.add_ray(r));
    }
    std::sort(c.verts.begin(), c.verts.end());
    std::sort(c.rays.begin(), c.rays.end());
    X.cells.push_back(c);
  }
  return X;
}

}  // namespace tropdp
