#pragma once

// Plane tropical curves (max convention): stable curves through points by
// tropical Cramer, curve structure from the dual subdivision, stable
// intersections by exact infinitesimal displacement, tropical triangles of
// three points in TP^2 and the parallelogram type classifier.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "planar.hpp"
#include "rational.hpp"

namespace tropdp {

struct NonGenericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

using LatticePt = std::pair<long, long>;

struct PlaneCurve {
  std::vector<LatticePt> support;
  QVec coeffs;

  struct Piece {
    bool bounded;
    V2 a, b;      // endpoints; for rays b is unused
    V2 dir;       // primitive direction (a->b for bounded)
    long weight;  // lattice length of the dual Newton edge
    std::vector<int> dual;  // support indices attaining the maximum on the piece
  };
  std::vector<V2> verts;      // curve vertices (argmax spans 2-dim)
  std::vector<Piece> pieces;  // edges and rays

  Q eval(const V2& w) const {
    Q best;
    bool first = true;
    for (size_t m = 0; m < support.size(); ++m) {
      Q v = coeffs[m] + Q(support[m].first) * w.x + Q(support[m].second) * w.y;
      if (first || v > best) {
        best = v;
        first = false;
      }
    }
    return best;
  }
  std::vector<int> argmax(const V2& w) const {
    Q best = eval(w);
    std::vector<int> out;
    for (size_t m = 0; m < support.size(); ++m) {
      Q v = coeffs[m] + Q(support[m].first) * w.x + Q(support[m].second) * w.y;
      if (v == best) out.push_back((int)m);
    }
    return out;
  }
  bool contains(const V2& w) const { return argmax(w).size() >= 2; }

  // linear part of eval on the region where support point m wins
  V2 gradient(int m) const { return V2{Q(support[m].first), Q(support[m].second)}; }
};

// Builds the 1-complex structure of the corner locus from the coefficients.
inline void build_curve_structure(PlaneCurve& C) {
  C.verts.clear();
  C.pieces.clear();
  size_t n = C.support.size();
  std::set<V2> vset;
  // vertices: solutions of ties among affinely spanning triples that attain
  // the global maximum
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t c = b + 1; c < n; ++c) {
        QMat A(2, 2);
        A(0, 0) = Q(C.support[b].first - C.support[a].first);
        A(0, 1) = Q(C.support[b].second - C.support[a].second);
        A(1, 0) = Q(C.support[c].first - C.support[a].first);
        A(1, 1) = Q(C.support[c].second - C.support[a].second);
        Q det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        if (det == 0) continue;
        QVec rhs{C.coeffs[a] - C.coeffs[b], C.coeffs[a] - C.coeffs[c]};
        V2 w{(rhs[0] * A(1, 1) - rhs[1] * A(0, 1)) / det,
             (A(0, 0) * rhs[1] - A(1, 0) * rhs[0]) / det};
        if (C.argmax(w).size() >= 3) vset.insert(w);
      }
  C.verts.assign(vset.begin(), vset.end());

  // edges and rays: tie loci of pairs, clipped by the other monomials
  std::set<std::vector<int>> seen_duals_at;  // dedup by (argmax set, sample)
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      V2 da{Q(C.support[a].first), Q(C.support[a].second)};
      V2 db{Q(C.support[b].first), Q(C.support[b].second)};
      V2 diff = db - da;
      if (diff.x == 0 && diff.y == 0) continue;
      // tie line: <diff, w> = c_a - c_b ; direction perpendicular to diff
      V2 dir = primitive2(V2{-diff.y, diff.x});
      // base point on the line
      V2 w0;
      if (diff.x != 0)
        w0 = V2{(C.coeffs[a] - C.coeffs[b]) / diff.x, Q(0)};
      else
        w0 = V2{Q(0), (C.coeffs[a] - C.coeffs[b]) / diff.y};
      // interval in t where a,b attain the max: constraints from every other m
      bool empty = false;
      std::optional<Q> tmin, tmax;
      for (size_t m = 0; m < n && !empty; ++m) {
        if (m == a || m == b) continue;
        V2 dm{Q(C.support[m].first), Q(C.support[m].second)};
        // value_a(w0 + t dir) >= value_m(...): affine in t
        Q k = dot2(da - dm, dir);
        Q r = (C.coeffs[m] + dot2(dm, w0)) - (C.coeffs[a] + dot2(da, w0));
        // need k * t >= r
        if (k == 0) {
          if (r > 0) empty = true;
        } else if (k > 0) {
          Q bound = r / k;
          if (!tmin || bound > *tmin) tmin = bound;
        } else {
          Q bound = r / k;
          if (!tmax || bound < *tmax) tmax = bound;
        }
      }
      if (empty) continue;
      if (tmin && tmax && *tmin >= *tmax) continue;  // point or empty: not an edge
      // sample point in the relative interior
      Q tmid = tmin && tmax ? (*tmin + *tmax) / 2 : (tmin ? *tmin + 1 : (tmax ? *tmax - 1 : Q(0)));
      V2 sample = w0 + dir.scaled(tmid);
      auto am = C.argmax(sample);
      // generate each geometric piece once, from its lex-smallest dual pair
      if (am.size() < 2 || am[0] != (int)a || am[1] != (int)b) continue;
      // weight: lattice length of the dual cell (the argmax set is collinear
      // in the Newton polygon since all attain equality along a segment)
      long lo0 = C.support[am.front()].first, lo1 = C.support[am.front()].second;
      long hi0 = lo0, hi1 = lo1;
      for (int m : am) {
        // project onto diff direction to find the extremes
        // (all dual points are collinear along diff)
        if (std::make_pair(C.support[m].first, C.support[m].second) <
            std::make_pair(lo0, lo1)) {
          lo0 = C.support[m].first;
          lo1 = C.support[m].second;
        }
        if (std::make_pair(C.support[m].first, C.support[m].second) >
            std::make_pair(hi0, hi1)) {
          hi0 = C.support[m].first;
          hi1 = C.support[m].second;
        }
      }
      long weight = (long)mpz_get_si(content(QVec{Q(hi0 - lo0), Q(hi1 - lo1)}).get_mpz_t());

      PlaneCurve::Piece p;
      p.weight = weight;
      p.dual = am;
      if (tmin && tmax) {
        p.bounded = true;
        p.a = w0 + dir.scaled(*tmin);
        p.b = w0 + dir.scaled(*tmax);
        p.dir = dir;
        C.pieces.push_back(p);
      } else if (tmin || tmax) {
        p.bounded = false;
        if (tmin) {
          p.a = w0 + dir.scaled(*tmin);
          p.dir = dir;
        } else {
          p.a = w0 + dir.scaled(*tmax);
          p.dir = V2{-dir.x, -dir.y};
        }
        C.pieces.push_back(p);
      } else {
        // full line (support is a segment): split at a canonical base point
        p.bounded = false;
        p.a = w0;
        p.dir = dir;
        C.pieces.push_back(p);
        PlaneCurve::Piece q = p;
        q.dir = V2{-dir.x, -dir.y};
        C.pieces.push_back(q);
        vset.insert(w0);
        C.verts.assign(vset.begin(), vset.end());
      }
    }
}

// ---------------------------------------------------------------------------
// stable curve through points: tropical Cramer

// Tropical determinant (max-plus permanent) with a uniqueness certificate.
inline std::pair<Q, bool> trop_det(const std::vector<QVec>& m) {
  size_t n = m.size();
  std::vector<int> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = (int)i;
  bool first = true, unique = true;
  Q best;
  do {
    Q s = 0;
    for (size_t i = 0; i < n; ++i) s += m[i][perm[i]];
    if (first || s > best) {
      best = s;
      unique = true;
      first = false;
    } else if (s == best) {
      unique = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, unique};
}

// The stable curve with the given Newton support through #support-1 points.
inline PlaneCurve curve_through(const std::vector<V2>& points,
                                const std::vector<LatticePt>& support) {
  size_t n = support.size();
  if (points.size() + 1 != n)
    throw std::invalid_argument("curve_through: need #support - 1 points");
  PlaneCurve C;
  C.support = support;
  C.coeffs.resize(n);
  for (size_t m = 0; m < n; ++m) {
    std::vector<QVec> minor;
    for (size_t i = 0; i < points.size(); ++i) {
      QVec row;
      for (size_t k = 0; k < n; ++k) {
        if (k == m) continue;
        row.push_back(Q(support[k].first) * points[i].x + Q(support[k].second) * points[i].y);
      }
      minor.push_back(row);
    }
    auto [val, unique] = trop_det(minor);
    if (!unique) {
      std::ostringstream os;
      os << "curve_through: tropical minor for support point (" << support[m].first << ","
         << support[m].second << ") attains its optimum twice";
      throw NonGenericError(os.str());
    }
    C.coeffs[m] = val;
  }
  build_curve_structure(C);
  for (const auto& p : points)
    if (!C.contains(p)) throw std::logic_error("curve_through: point escaped the stable curve");
  return C;
}

// ---------------------------------------------------------------------------
// stable intersection

struct IntersectionPoint {
  V2 point;
  long mult;
};

// Exact fan-displacement: C2 is translated by eps*(1, K); crossings of the
// displaced pieces are affine in eps, so the limit points are exact.
inline std::vector<IntersectionPoint> stable_intersect_displaced(const PlaneCurve& C1,
                                                                 const PlaneCurve& C2, long K) {
  std::map<V2, long> acc;
  V2 v{Q(1), Q(K)};
  for (const auto& p1 : C1.pieces) {
    for (const auto& p2 : C2.pieces) {
      Q det = cross(p1.dir, p2.dir);
      if (det == 0) continue;
      // solve p1.a + s d1 = p2.a + eps v + t d2; s and t are affine in eps
      V2 u0 = p2.a - p1.a;
      V2 nd2{-p2.dir.x, -p2.dir.y};
      Q D = cross(p1.dir, nd2);
      Q sA = cross(u0, nd2) / D, sB = cross(v, nd2) / D;
      Q tA = cross(p1.dir, u0) / D, tB = cross(p1.dir, v) / D;
      // membership with eps infinitesimal: lex compare (const, eps-coeff)
      auto ge0 = [](const Q& a0, const Q& a1) { return a0 > 0 || (a0 == 0 && a1 >= 0); };
      auto le = [](const Q& a0, const Q& a1, const Q& b0, const Q& b1) {
        return a0 < b0 || (a0 == b0 && a1 <= b1);
      };
      bool ok = ge0(sA, sB) && ge0(tA, tB);
      if (ok && p1.bounded) {
        // s <= length along piece1: p1.b = p1.a + s_max d1
        Q smax = (p1.dir.x != 0) ? (p1.b.x - p1.a.x) / p1.dir.x : (p1.b.y - p1.a.y) / p1.dir.y;
        if (!le(sA, sB, smax, Q(0))) ok = false;
      }
      if (ok && p2.bounded) {
        Q tmax = (p2.dir.x != 0) ? (p2.b.x - p2.a.x) / p2.dir.x : (p2.b.y - p2.a.y) / p2.dir.y;
        if (!le(tA, tB, tmax, Q(0))) ok = false;
      }
      if (!ok) continue;
      V2 limit = p1.a + p1.dir.scaled(sA);
      Z m = abs(Z(cross(p1.dir, p2.dir).get_num()));
      acc[limit] += p1.weight * p2.weight * (long)mpz_get_si(m.get_mpz_t());
    }
  }
  std::vector<IntersectionPoint> out;
  for (auto& [p, m] : acc) out.push_back({p, m});
  return out;
}

inline std::vector<IntersectionPoint> stable_intersect(const PlaneCurve& C1,
                                                       const PlaneCurve& C2) {
  if (C1.support == C2.support && C1.coeffs == C2.coeffs)
    throw std::invalid_argument("stable_intersect: identical curves");
  // displacement slope must avoid the finitely many piece directions; verify
  // stability by comparing two generic choices
  auto r1 = stable_intersect_displaced(C1, C2, 101);
  auto r2 = stable_intersect_displaced(C1, C2, 103);
  if (!(r1.size() == r2.size() &&
        std::equal(r1.begin(), r1.end(), r2.begin(), [](const auto& a, const auto& b) {
          return a.point == b.point && a.mult == b.mult;
        })))
    throw NonGenericError("stable_intersect: displacement-dependent result");
  return r1;
}

// ---------------------------------------------------------------------------
// tropical triangles (max-plus convex hull in TP^2 of three points)

enum class TriangleShape { triangle3, parallelogram4, trapezoid4, pentagon5, hexagon6, degenerate };

inline const char* shape_name(TriangleShape s) {
  switch (s) {
    case TriangleShape::triangle3: return "triangle";
    case TriangleShape::parallelogram4: return "parallelogram";
    case TriangleShape::trapezoid4: return "trapezoid";
    case TriangleShape::pentagon5: return "pentagon";
    case TriangleShape::hexagon6: return "hexagon";
    case TriangleShape::degenerate: return "degenerate";
  }
  return "?";
}

struct TropTriangleCell {
  TriangleShape shape = TriangleShape::degenerate;
  std::vector<V2> verts;  // CCW polygon (empty when degenerate)
};

// membership in tconv{p1,p2,p3} in TP^2, chart (0, u, v)
inline bool in_tropical_triangle(const V2& x, const std::array<V2, 3>& p) {
  std::array<Q, 3> lambda;
  for (int i = 0; i < 3; ++i)
    lambda[i] = std::min(std::min(Q(0), Q(x.x - p[i].x)), Q(x.y - p[i].y));
  Q y0 = std::max(std::max(lambda[0], lambda[1]), lambda[2]);
  Q y1 = std::max(std::max(Q(lambda[0] + p[0].x), Q(lambda[1] + p[1].x)), Q(lambda[2] + p[2].x));
  Q y2 = std::max(std::max(Q(lambda[0] + p[0].y), Q(lambda[1] + p[1].y)), Q(lambda[2] + p[2].y));
  return (y1 - y0 == x.x) && (y2 - y0 == x.y);
}

inline TropTriangleCell trop_triangle(const V2& a, const V2& b, const V2& c) {
  std::array<V2, 3> p{a, b, c};
  // the nine supporting lines
  struct L {
    Q A, B, C;
  };
  std::vector<L> lines;
  for (const auto& q : p) {
    lines.push_back({Q(1), Q(0), q.x});        // u = q.x
    lines.push_back({Q(0), Q(1), q.y});        // v = q.y
    lines.push_back({Q(1), Q(-1), q.x - q.y}); // u - v = const
  }
  // bounding box
  Q M(1);
  for (const auto& q : p) M = std::max(std::max(M, Q(abs(q.x))), Q(abs(q.y)));
  M = 3 * M + 10;
  Cell2 box;
  box.halves = {{Q(1), Q(0), -M}, {Q(-1), Q(0), -M}, {Q(0), Q(1), -M}, {Q(0), Q(-1), -M}};
  std::vector<Cell2> cells{box};
  for (const auto& ln : lines) {
    std::vector<Cell2> next;
    for (const auto& cell : cells) {
      auto [hi, lo] = split(cell, ln.A, ln.B, ln.C);
      for (auto& piece : {hi, lo}) {
        auto v = vrep(piece);
        if (v.dim == 2) next.push_back(piece);
      }
    }
    cells = std::move(next);
  }
  std::vector<V2> member_pts;
  Q member_area = 0;
  for (const auto& cell : cells) {
    auto v = vrep(cell);
    V2 ctr{Q(0), Q(0)};
    for (const auto& q : v.verts) ctr = ctr + q;
    Q inv(1, (long)v.verts.size());
    inv.canonicalize();
    ctr = ctr.scaled(inv);
    if (!in_tropical_triangle(ctr, p)) continue;
    auto hull = convex_hull(v.verts);
    for (const auto& q : hull) member_pts.push_back(q);
    Q area2 = 0;
    for (size_t i = 0; i < hull.size(); ++i)
      area2 += cross(hull[i], hull[(i + 1) % hull.size()]);
    member_area += abs(area2);
  }
  TropTriangleCell out;
  if (member_pts.empty()) {
    out.shape = TriangleShape::degenerate;
    return out;
  }
  auto hull = convex_hull(member_pts);
  if (hull.size() <= 2) {
    out.shape = TriangleShape::degenerate;
    return out;
  }
  // certificate: the member cells tile the hull (areas add up)
  Q hull_area2 = 0;
  for (size_t i = 0; i < hull.size(); ++i)
    hull_area2 += cross(hull[i], hull[(i + 1) % hull.size()]);
  if (abs(hull_area2) != member_area)
    throw InconsistencyError("trop_triangle: 2-cell is not convex");
  out.verts = hull;
  switch (hull.size()) {
    case 3: out.shape = TriangleShape::triangle3; break;
    case 4: {
      V2 e0 = hull[1] - hull[0], e1 = hull[2] - hull[1], e2 = hull[3] - hull[2],
         e3 = hull[0] - hull[3];
      bool par02 = cross(e0, e2) == 0, par13 = cross(e1, e3) == 0;
      out.shape = (par02 && par13) ? TriangleShape::parallelogram4 : TriangleShape::trapezoid4;
      break;
    }
    case 5: out.shape = TriangleShape::pentagon5; break;
    case 6: out.shape = TriangleShape::hexagon6; break;
    default:
      throw InconsistencyError("trop_triangle: unexpected vertex count " +
                               std::to_string(hull.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// the degree-3 type classifier

enum class SurfaceType { type_parallelogram, type_other, non_generic };

struct TypeVerdict {
  SurfaceType type = SurfaceType::non_generic;
  TriangleShape triangle_shape = TriangleShape::degenerate;
  std::string detail;
};

inline std::vector<LatticePt> conic_square_support() {
  return {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
}

// The conic-side criterion from the classification proof: the bounded edge
// of the conic through P4,P5,P6 has slope -1 and carries a marked point, or
// slope +1 with a marked point and the other two points on opposite sides.
inline std::optional<bool> conic_criterion_parallelogram(const V2& p4, const V2& p5, const V2& p6,
                                                         std::string* why = nullptr) {
  PlaneCurve G;
  try {
    G = curve_through({p4, p5, p6}, conic_square_support());
  } catch (const NonGenericError& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
  Q s = (G.coeffs[0] + G.coeffs[3]) - (G.coeffs[1] + G.coeffs[2]);
  if (s == 0) {
    if (why) *why = "conic has a four-valent vertex";
    return std::nullopt;
  }
  // find the bounded edge
  const PlaneCurve::Piece* edge = nullptr;
  for (const auto& pc : G.pieces)
    if (pc.bounded) edge = &pc;
  if (!edge) {
    if (why) *why = "conic has no bounded edge";
    return std::nullopt;
  }
  std::array<V2, 3> pts{p4, p5, p6};
  auto on_edge = [&](const V2& q) -> int {
    // 0: off, 1: relative interior, 2: endpoint
    if (q == edge->a || q == edge->b) return 2;
    if (cross(edge->b - edge->a, q - edge->a) != 0) return 0;
    Q t = (edge->dir.x != 0) ? (q.x - edge->a.x) / edge->dir.x : (q.y - edge->a.y) / edge->dir.y;
    Q tmax = (edge->dir.x != 0) ? (edge->b.x - edge->a.x) / edge->dir.x
                                : (edge->b.y - edge->a.y) / edge->dir.y;
    return (t > 0 && t < tmax) ? 1 : 0;
  };
  int marked = -1;
  for (int j = 0; j < 3; ++j) {
    int o = on_edge(pts[j]);
    if (o == 2) {
      if (why) *why = "marked point at a vertex of the conic";
      return std::nullopt;
    }
    if (o == 1) marked = j;
  }
  if (marked < 0) return false;
  if (s > 0) return true;  // slope -1 bounded edge containing a marked point
  // slope +1: other two points must lie strictly on opposite sides
  std::vector<Q> sides;
  for (int j = 0; j < 3; ++j) {
    if (j == marked) continue;
    sides.push_back(cross(edge->dir, pts[j] - edge->a));
  }
  if (sides[0] == 0 || sides[1] == 0) {
    if (why) *why = "marked point on the supporting line of the bounded edge";
    return std::nullopt;
  }
  return sgn(sides[0]) != sgn(sides[1]);
}

inline TypeVerdict classify_type(const V2& p5, const V2& p6) {
  V2 p4{Q(0), Q(0)};
  TypeVerdict v;
  auto cell = trop_triangle(p4, p5, p6);
  v.triangle_shape = cell.shape;
  if (cell.shape == TriangleShape::degenerate) {
    v.type = SurfaceType::non_generic;
    v.detail = "tropical triangle of the marked points is degenerate";
    return v;
  }
  bool par = cell.shape == TriangleShape::parallelogram4;
  std::string why;
  auto conic = conic_criterion_parallelogram(p4, p5, p6, &why);
  if (!conic) {
    v.type = SurfaceType::non_generic;
    v.detail = why;
    return v;
  }
  if (*conic != par)
    throw InconsistencyError("classify_type: parallelogram and conic criteria disagree");
  v.type = par ? SurfaceType::type_parallelogram : SurfaceType::type_other;
  return v;
}

}  // namespace tropdp
