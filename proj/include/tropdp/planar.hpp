#pragma once

// Exact 2D convex polyhedra (possibly unbounded), halfplane splitting, face
// extraction and convex hulls. Everything runs over Q; cells carry an
// H-representation and derive V-representations on demand.

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace tropdp {

struct V2 {
  Q x, y;
  friend bool operator==(const V2&, const V2&) = default;
  friend bool operator<(const V2& a, const V2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
  V2 operator+(const V2& o) const { return {x + o.x, y + o.y}; }
  V2 operator-(const V2& o) const { return {x - o.x, y - o.y}; }
  V2 scaled(const Q& c) const { return {c * x, c * y}; }
};

inline Q cross(const V2& a, const V2& b) { return a.x * b.y - a.y * b.x; }
inline Q dot2(const V2& a, const V2& b) { return a.x * b.x + a.y * b.y; }

inline V2 primitive2(const V2& v) {
  QVec p = primitive(QVec{v.x, v.y});
  return {p[0], p[1]};
}

// halfplane a*x + b*y >= c
struct Half2 {
  Q a, b, c;
  Q eval(const V2& p) const { return a * p.x + b * p.y - c; }
  Q eval_dir(const V2& d) const { return a * d.x + b * d.y; }
  friend bool operator==(const Half2&, const Half2&) = default;
};

struct VRep2 {
  int dim = -1;           // -1 empty, else 0/1/2
  std::vector<V2> verts;  // extreme points, sorted
  std::vector<V2> rays;   // primitive extreme rays, sorted
};

// Convex cell as a halfplane list. Cells in this project are pointed (they
// are cut out of pointed parents), so a nonempty cell has a vertex.
struct Cell2 {
  std::vector<Half2> halves;

  bool contains(const V2& p) const {
    for (const auto& h : halves)
      if (sgn(h.eval(p)) < 0) return false;
    return true;
  }
  bool on_boundary(const V2& p) const {
    if (!contains(p)) return false;
    for (const auto& h : halves)
      if (h.eval(p) == 0) return true;
    return false;
  }
};

// V-representation by constraint-pair enumeration (cells here carry few
// constraints, so the quadratic scan is fine).
inline VRep2 vrep(const Cell2& cell) {
  const auto& H = cell.halves;
  VRep2 out;
  std::set<V2> vset;
  for (size_t i = 0; i < H.size(); ++i)
    for (size_t j = i + 1; j < H.size(); ++j) {
      Q det = H[i].a * H[j].b - H[j].a * H[i].b;
      if (det == 0) continue;
      V2 p{(H[i].c * H[j].b - H[j].c * H[i].b) / det, (H[i].a * H[j].c - H[j].a * H[i].c) / det};
      if (cell.contains(p)) vset.insert(p);
    }
  if (vset.empty()) {
    out.dim = -1;  // empty or non-pointed; callers only use pointed cells
    return out;
  }
  std::set<V2> rset;
  for (const auto& h : H) {
    V2 d{h.b, -h.a};
    for (const V2& cand : {d, V2{-d.x, -d.y}}) {
      bool ok = !(cand.x == 0 && cand.y == 0);
      for (const auto& g : H)
        if (ok && sgn(g.eval_dir(cand)) < 0) ok = false;
      if (!ok) continue;
      // the direction must be attached: some vertex + cand stays inside
      V2 prim = primitive2(cand);
      bool attached = false;
      for (const auto& v : vset)
        if (cell.contains(v + prim)) attached = true;
      if (attached) rset.insert(prim);
    }
  }
  // keep extreme points only
  std::vector<V2> verts(vset.begin(), vset.end());
  std::vector<V2> rays(rset.begin(), rset.end());
  auto extreme = [&](size_t k) {
    const V2& p = verts[k];
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j) {
        if (i == k || j == k) continue;
        V2 u = verts[i], v = verts[j];
        if (cross(v - u, p - u) == 0) {
          Q t = (v.x != u.x) ? (p.x - u.x) / (v.x - u.x) : (p.y - u.y) / (v.y - u.y);
          if (t > 0 && t < 1) return false;
        }
      }
    for (size_t i = 0; i < verts.size(); ++i) {
      if (i == k) continue;
      for (const auto& r : rays) {
        V2 u = verts[i];
        if (cross(r, p - u) == 0) {
          Q t = (r.x != 0) ? (p.x - u.x) / r.x : (p.y - u.y) / r.y;
          if (t > 0) return false;
        }
      }
    }
    return true;
  };
  for (size_t k = 0; k < verts.size(); ++k)
    if (extreme(k)) out.verts.push_back(verts[k]);
  out.rays = std::move(rays);

  if (out.verts.size() == 1 && out.rays.empty()) {
    out.dim = 0;
    return out;
  }
  std::vector<QVec> dirs;
  for (size_t i = 1; i < out.verts.size(); ++i)
    dirs.push_back(QVec{out.verts[i].x - out.verts[0].x, out.verts[i].y - out.verts[0].y});
  for (const auto& r : out.rays) dirs.push_back(QVec{r.x, r.y});
  out.dim = (int)rank_of_vectors(dirs);
  if (out.dim == 1 && out.rays.size() == 2) {
    // a full line would be non-pointed; with a vertex present this is a
    // segment+both rays situation that only arises from degenerate input
    throw std::domain_error("vrep: unexpected line-like cell");
  }
  return out;
}

// The face of a cell on the boundary line of one of its halfplanes.
inline VRep2 face_on(const Cell2& cell, const Half2& h) {
  Cell2 f = cell;
  f.halves.push_back({-h.a, -h.b, -h.c});
  return vrep(f);
}

// Splits a cell by the line a*x + b*y = c into the >= and <= pieces.
inline std::pair<Cell2, Cell2> split(const Cell2& cell, const Q& a, const Q& b, const Q& c) {
  Cell2 hi = cell, lo = cell;
  hi.halves.push_back({a, b, c});
  lo.halves.push_back({-a, -b, -c});
  return {hi, lo};
}

// Convex hull of points (monotone chain); returns extreme points in CCW
// order starting from the lexicographically smallest.
inline std::vector<V2> convex_hull(std::vector<V2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<V2> lo, hi;
  for (const auto& p : pts) {
    while (lo.size() >= 2 && sgn(cross(lo.back() - lo[lo.size() - 2], p - lo.back())) <= 0)
      lo.pop_back();
    lo.push_back(p);
  }
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    const auto& p = *it;
    while (hi.size() >= 2 && sgn(cross(hi.back() - hi[hi.size() - 2], p - hi.back())) <= 0)
      hi.pop_back();
    hi.push_back(p);
  }
  lo.pop_back();
  hi.pop_back();
  lo.insert(lo.end(), hi.begin(), hi.end());
  // handle collinear input: monotone chain with <= popping may leave 2 points
  return lo;
}

}  // namespace tropdp
