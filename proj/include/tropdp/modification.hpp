#pragma once

// Iterated open tropical modifications building trop(X0) for del Pezzo
// surfaces of degree 5, 4, 3 from marked points in TP^2.
//
// The pipeline tracks every (-1)-curve as an embedded 1-complex through the
// sequence of re-embeddings. Each step appends one coordinate: on arcs away
// from the new divisor the value is the restriction of the tropical
// polynomial; on arcs inside cancellation zones it is forced by balancing;
// puncture points sprout downward rays. Every curve also carries its own
// "cap" coordinate, the level at which its flap meets the rest of the
// surface. The final surface is assembled from the plane arrangement
// (graph cells), the capped curves (hanging cells) and bridge cells between
// stacked curves, then coarsened to its canonical cell structure.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "planar.hpp"
#include "polyhedra.hpp"
#include "rational.hpp"
#include "rootsys.hpp"
#include "trees.hpp"
#include "tropcurves.hpp"

namespace tropdp {

// ---------------------------------------------------------------------------
// tracked curves

struct TrackedArc {
  int u = -1;                     // base vertex index
  int v = -1;                     // far vertex (-1 for rays)
  QVec dir;                       // direction, one unit per val-parameter step
  long weight = 1;
  std::optional<LineLabel> leaf;  // marking for leaf rays
  int column = -1;                // marked point index when this is an E_r vertical
  Q s_lo = 0;                     // column depth at the base vertex (verticals)
};

struct TrackedCurve {
  LineLabel label;
  int self_coord = -1;  // coordinate index 2 + step of this curve
  std::vector<QVec> verts;
  std::vector<TrackedArc> arcs;

  int find_vertex(const QVec& p) const {
    for (size_t i = 0; i < verts.size(); ++i)
      if (verts[i] == p) return (int)i;
    return -1;
  }
  int add_vertex(const QVec& p) {
    int i = find_vertex(p);
    if (i >= 0) return i;
    verts.push_back(p);
    return (int)verts.size() - 1;
  }
};

inline V2 plane_of(const QVec& p) { return V2{p[0], p[1]}; }
inline V2 plane_dir(const QVec& d) { return V2{d[0], d[1]}; }

inline bool is_vertical(const TrackedArc& a) {
  return a.dir[0] == 0 && a.dir[1] == 0;
}


// ---------------------------------------------------------------------------
// plane setup

struct PipelineCurveSpec {
  LineLabel label;
  std::vector<LatticePt> support;
  std::vector<int> through;  // marked point indices (0: P4, 1: P5, 2: P6)
  bool conic = false;        // quadratic in the plane coordinates
};

inline std::vector<PipelineCurveSpec> pipeline_curves(int degree) {
  std::vector<PipelineCurveSpec> out;
  auto idx = [&](int j) { return j - 4; };
  auto fline = [&](int i, int j) {
    PipelineCurveSpec s;
    s.label = Fline(i, j);
    if (i == 1) s.support = {{1, 0}, {0, 1}};
    if (i == 2) s.support = {{0, 0}, {0, 1}};
    if (i == 3) s.support = {{0, 0}, {1, 0}};
    if (i >= 4) s.support = {{0, 0}, {1, 0}, {0, 1}};
    if (i >= 4)
      s.through = {idx(i), idx(j)};
    else
      s.through = {idx(j)};
    return s;
  };
  if (degree == 5) {
    for (int i = 1; i <= 3; ++i) out.push_back(fline(i, 4));
    return out;
  }
  if (degree == 4) {
    for (int i = 1; i <= 3; ++i)
      for (int j = 4; j <= 5; ++j) out.push_back(fline(i, j));
    out.push_back(fline(4, 5));
    PipelineCurveSpec g;
    g.label = Gline();
    g.support = {{1, 0}, {0, 1}, {1, 1}};
    g.through = {0, 1};
    g.conic = true;
    out.push_back(g);
    return out;
  }
  if (degree == 3) {
    for (int i = 1; i <= 3; ++i)
      for (int j = 4; j <= 6; ++j) out.push_back(fline(i, j));
    out.push_back(fline(4, 5));
    out.push_back(fline(4, 6));
    out.push_back(fline(5, 6));
    for (int j = 1; j <= 6; ++j) {
      PipelineCurveSpec g;
      g.label = Gline(j);
      if (j == 1) g.support = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
      if (j == 2) g.support = {{1, 0}, {2, 0}, {0, 1}, {1, 1}};
      if (j == 3) g.support = {{1, 0}, {0, 1}, {1, 1}, {0, 2}};
      if (j >= 4) g.support = {{1, 0}, {0, 1}, {1, 1}};
      g.conic = true;
      for (int r = 4; r <= 6; ++r)
        if (r != j) g.through.push_back(idx(r));
      out.push_back(g);
    }
    return out;
  }
  throw std::invalid_argument("pipeline_curves: degree must be 3, 4 or 5");
}

struct PlaneData {
  int degree = 3;
  std::vector<V2> marked;
  std::vector<PipelineCurveSpec> specs;
  std::vector<PlaneCurve> curves;
  std::vector<LineLabel> labels;

  bool through_point(int curve, int marked_idx) const {
    for (int t : specs[curve].through)
      if (t == marked_idx) return true;
    return false;
  }
};

inline PlaneData build_plane_data(int degree, const std::vector<V2>& extra_points) {
  PlaneData pd;
  pd.degree = degree;
  pd.marked.push_back(V2{Q(0), Q(0)});
  for (const auto& p : extra_points) pd.marked.push_back(p);
  if ((int)pd.marked.size() != 6 - degree)
    throw std::invalid_argument("build_plane_data: wrong number of marked points");
  for (size_t i = 0; i < pd.marked.size(); ++i)
    for (size_t j = i + 1; j < pd.marked.size(); ++j)
      if (pd.marked[i] == pd.marked[j]) throw NonGenericError("coincident marked points");
  pd.specs = pipeline_curves(degree);
  for (const auto& s : pd.specs) {
    std::vector<V2> pts;
    for (int t : s.through) pts.push_back(pd.marked[t]);
    try {
      pd.curves.push_back(curve_through(pts, s.support));
    } catch (const NonGenericError& e) {
      throw NonGenericError(std::string("curve ") + s.label.str() + ": " + e.what());
    }
    pd.labels.push_back(s.label);
  }
  // marked points must avoid the curves they are not on, and the trees'
  // vertices: coincidences there change the combinatorial type
  for (size_t c = 0; c < pd.curves.size(); ++c)
    for (size_t r = 0; r < pd.marked.size(); ++r) {
      bool on = pd.through_point((int)c, (int)r);
      if (!on && pd.curves[c].contains(pd.marked[r]))
        throw NonGenericError("marked point P" + std::to_string(r + 4) + " lies on trop(" +
                              pd.labels[c].str() + ")");
      if (on)
        for (const auto& vtx : pd.curves[c].verts) {
          if (vtx != pd.marked[r]) continue;
          int deg = 0;
          for (const auto& pc : pd.curves[c].pieces)
            deg += (pc.a == vtx) + (pc.bounded && pc.b == vtx);
          if (deg >= 3)
            throw NonGenericError("marked point P" + std::to_string(r + 4) +
                                  " sits on a vertex of trop(" + pd.labels[c].str() + ")");
        }
    }
  return pd;
}

// boundary label of an unbounded plane direction
inline std::optional<LineLabel> direction_boundary_label(const V2& d) {
  if (d.x < 0 && d.y < 0 && d.x == d.y) return Eline(1);
  if (d.x > 0 && d.y == 0) return Eline(2);
  if (d.x == 0 && d.y > 0) return Eline(3);
  if (d.x < 0 && d.y == 0) return Fline(1, 3);
  if (d.x == 0 && d.y < 0) return Fline(1, 2);
  if (d.x > 0 && d.y > 0 && d.x == d.y) return Fline(2, 3);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// germ separation data
//
// Curves through the same marked point approach it with directions whose
// valuation distances are visible in the plane as the lattice extents of
// the overlaps of the tropical germs. Pairs that are not both lines also
// interact quadratically: the value of one along the other drops with
// slope 2 down to the separation depth, then with slope 1.

struct GermData {
  Q sep = 0;
  bool quad = false;
};

// lattice extent of the longest common straight path of A and B through P
inline Q germ_overlap_depth(const PlaneCurve& A, const PlaneCurve& B, const V2& P) {
  if (!A.contains(P) || !B.contains(P)) return Q(0);
  Q best = 0;
  for (const V2& draw :
       {V2{Q(1), Q(0)}, V2{Q(0), Q(1)}, V2{Q(1), Q(1)}, V2{Q(-1), Q(0)}, V2{Q(0), Q(-1)},
        V2{Q(-1), Q(-1)}, V2{Q(1), Q(-1)}, V2{Q(-1), Q(1)}, V2{Q(1), Q(2)}, V2{Q(2), Q(1)},
        V2{Q(-1), Q(-2)}, V2{Q(-2), Q(-1)}, V2{Q(1), Q(-2)}, V2{Q(-2), Q(1)}, V2{Q(2), Q(-1)},
        V2{Q(-1), Q(2)}}) {
    // candidate germ directions: primitive directions of pieces at P
    V2 prim = primitive2(draw);
    // collect candidate extents: distances from P to piece endpoints along prim
    std::vector<Q> stops;
    for (const PlaneCurve* C : {&A, &B})
      for (const auto& pc : C->pieces) {
        for (int which = 0; which < (pc.bounded ? 2 : 1); ++which) {
          V2 q = which ? pc.b : pc.a;
          V2 rel = q - P;
          if (cross(prim, rel) != 0) continue;
          Q s = (prim.x != 0) ? rel.x / prim.x : rel.y / prim.y;
          if (s > 0) stops.push_back(s);
        }
      }
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    Q reach = 0;
    for (const Q& s : stops) {
      V2 mid = P + prim.scaled((reach + s) / 2);
      if (A.contains(mid) && B.contains(mid))
        reach = s;
      else
        break;
    }
    // lattice length along prim
    best = std::max(best, reach);
  }
  return best;
}

// ---------------------------------------------------------------------------
// divisor oracle

struct DivPoint {
  V2 pos;
  LineLabel label;
  bool phantom;  // marked blown-up point rather than a true intersection
};

inline std::vector<DivPoint> divisor_points(const PlaneData& pd, int i, int j) {
  std::vector<DivPoint> out;
  if (i == j) return out;
  const auto& si = pd.specs[i];
  const auto& sj = pd.specs[j];
  std::set<int> common;
  for (int a : si.through)
    for (int b : sj.through)
      if (a == b) common.insert(a);
  for (int r : common) out.push_back({pd.marked[r], Eline(r + 4), true});

  bool adjacent = false;
  {
    std::vector<LineLabel> ls;
    SmallGraph g = intersection_graph(pd.degree, &ls);
    size_t a = std::find(ls.begin(), ls.end(), si.label) - ls.begin();
    size_t b = std::find(ls.begin(), ls.end(), sj.label) - ls.begin();
    adjacent = g.has_edge((int)a, (int)b);
  }
  if (!adjacent) return out;

  // The single true intersection point. The valuations of the zeros of f_i
  // along C_j add up to the weighted sum of the stable intersection
  // positions (tropical resultant balance), so subtracting the marked point
  // positions isolates the true point even when the stable intersection is
  // displaced by overlapping germs. This subsumes the mirror rule for a
  // conic whose bounded edge lies on one of the lines.
  auto stable = stable_intersect(pd.curves[i], pd.curves[j]);
  V2 q{Q(0), Q(0)};
  long total = 0;
  for (auto& p : stable) {
    q = q + p.point.scaled(Q(p.mult));
    total += p.mult;
  }
  if (total != (long)common.size() + 1)
    throw NonGenericError("divisor_points: unexpected stable multiplicity between " +
                          si.label.str() + " and " + sj.label.str());
  for (int r : common) q = q - pd.marked[r];
  if (!pd.curves[i].contains(q) || !pd.curves[j].contains(q))
    throw NonGenericError("divisor_points: true intersection of " + si.label.str() + " and " +
                          sj.label.str() + " escapes the curves");
  // genericity: away from a marked point, the puncture must avoid every
  // third curve and all tree vertices
  bool at_marked = false;
  for (size_t r = 0; r < pd.marked.size(); ++r)
    if (q == pd.marked[r]) at_marked = true;
  if (!at_marked) {
    for (int cc : {i, j})
      for (const auto& vtx : pd.curves[cc].verts) {
        if (vtx != q) continue;
        int deg = 0;
        for (const auto& pc : pd.curves[cc].pieces)
          deg += (pc.a == vtx) + (pc.bounded && pc.b == vtx);
        if (deg >= 3)
          throw NonGenericError("puncture of " + sj.label.str() + " by " + si.label.str() +
                                " sits on a tree vertex");
      }
  }
  out.push_back({q, si.label, false});
  return out;
}

// ---------------------------------------------------------------------------
// lift machinery helpers

namespace detail_mod {

inline Q trop_value(const PlaneCurve& C, const V2& w) { return C.eval(w); }

inline Q trop_slope(const PlaneCurve& C, const V2& w, const V2& d) {
  Q best;
  bool first = true;
  for (int m : C.argmax(w)) {
    Q s = Q(C.support[m].first) * d.x + Q(C.support[m].second) * d.y;
    if (first || s > best) {
      best = s;
      first = false;
    }
  }
  return best;
}

// parameter of point q on the line through base with direction dir
inline std::optional<Q> line_param(const V2& base, const V2& dir, const V2& q) {
  if (cross(dir, q - base) != 0) return std::nullopt;
  return (dir.x != 0) ? (q.x - base.x) / dir.x : (q.y - base.y) / dir.y;
}

// sub-intervals of [0, tmax] (tmax absent for rays) where the segment
// base + t*dir lies inside |C| (overlap zones); returned as sorted breakpoints
inline std::vector<std::pair<Q, std::optional<Q>>> overlap_intervals(
    const PlaneCurve& C, const V2& base, const V2& dir, std::optional<Q> tmax) {
  std::vector<std::pair<Q, std::optional<Q>>> out;
  // collinear pieces of C on the same line give candidate intervals
  for (const auto& pc : C.pieces) {
    if (cross(pc.dir, dir) != 0) continue;          // not parallel
    if (cross(dir, pc.a - base) != 0) continue;     // not the same line
    auto t0 = line_param(base, dir, pc.a);
    std::optional<Q> t1;
    if (pc.bounded) t1 = line_param(base, dir, pc.b);
    // orient the piece interval along dir
    Q lo = *t0;
    std::optional<Q> hi = t1;
    bool piece_forward = dot2(pc.dir, dir) > 0;
    if (pc.bounded && *t1 < lo) {
      lo = *t1;
      hi = *t0;
    } else if (!pc.bounded && !piece_forward) {
      // piece extends toward -infinity along dir: interval (-inf, t0]
      // clip to [0, ...]
      hi = *t0;
      lo = Q(0);
      if (*hi < lo) continue;
      out.push_back({lo, hi});
      continue;
    }
    // clip to [0, tmax]
    if (hi && *hi < 0) continue;
    if (lo < 0) lo = 0;
    if (tmax) {
      if (lo > *tmax) continue;
      if (!hi || *hi > *tmax) hi = tmax;
    }
    if (hi && *hi == lo) continue;  // single point, not an overlap
    out.push_back({lo, hi});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace detail_mod

// value of a track coordinate over a plane position (on non-vertical arcs)
inline std::optional<Q> track_value_at(const TrackedCurve& t, const V2& pos, size_t coord) {
  for (const auto& arc : t.arcs) {
    if (is_vertical(arc)) continue;
    V2 b = plane_of(t.verts[arc.u]);
    V2 d = plane_dir(arc.dir);
    auto tp = detail_mod::line_param(b, d, pos);
    if (!tp || *tp < 0) continue;
    if (arc.v >= 0) {
      const QVec& bb = t.verts[arc.u];
      const QVec& ff = t.verts[arc.v];
      Q tmax;
      for (size_t k = 0; k < bb.size(); ++k)
        if (arc.dir[k] != 0) {
          tmax = (ff[k] - bb[k]) / arc.dir[k];
          break;
        }
      if (*tp > tmax) continue;
    }
    return Q(t.verts[arc.u][coord] + *tp * arc.dir[coord]);
  }
  return std::nullopt;
}


// ---------------------------------------------------------------------------
// curve lifting through one modification step

// Appends the coordinate "val f_i" to sigma (the track of curve j != i).
inline void lift_curve(std::vector<TrackedCurve>& tracks, const PlaneData& pd, int i, int j,
                       const std::vector<DivPoint>& div_pts) {
  TrackedCurve& sigma = tracks[j];
  const PlaneCurve& Ci = pd.curves[i];
  size_t n0 = sigma.verts[0].size();

  auto split_arc_at = [&](size_t a, const Q& t) -> int {
    TrackedArc& arc = sigma.arcs[a];
    QVec mid = sigma.verts[arc.u];
    for (size_t k = 0; k < mid.size(); ++k) mid[k] = mid[k] + t * arc.dir[k];
    int vm = sigma.add_vertex(mid);
    TrackedArc tail = arc;
    tail.u = vm;
    if (tail.column >= 0) tail.s_lo = arc.s_lo + t;
    tail.leaf = arc.leaf;
    arc.v = vm;
    arc.leaf.reset();
    sigma.arcs.push_back(tail);
    return vm;
  };
  auto arc_tmax = [&](const TrackedArc& arc) -> std::optional<Q> {
    if (arc.v < 0) return std::nullopt;
    const QVec& b = sigma.verts[arc.u];
    const QVec& f = sigma.verts[arc.v];
    for (size_t k = 0; k < b.size(); ++k)
      if (arc.dir[k] != 0) return (f[k] - b[k]) / arc.dir[k];
    throw std::logic_error("arc_tmax: zero direction");
  };

  // 1. locate divisor points. Phantoms sit on the horizontal part over their
  // position. A true puncture q of curves C_i, C_j sits at the coordinate
  // vector min(reading_i, reading_j); when some coordinate is deeper than
  // sigma's horizontal reading, the point lies down an existing vertical ray
  // (q inside a cancellation zone) and the ray will kink there.
  struct LocatedPunct {
    int vertex;       // attachment vertex (after refinement)
    LineLabel label;
    bool phantom;
    bool deferred;    // attached mid-ray: new coordinate slope -1 above
    int head_arc = -1;  // the vertical piece above the kink (deferred only)
  };
  std::vector<LocatedPunct> punctures;
  for (const auto& dp : div_pts) {
    // horizontal candidate
    int hvert = -1;
    for (size_t a = 0; a < sigma.arcs.size() && hvert < 0; ++a) {
      TrackedArc& arc = sigma.arcs[a];
      if (is_vertical(arc)) continue;
      V2 pdv = plane_dir(arc.dir);
      auto t = detail_mod::line_param(plane_of(sigma.verts[arc.u]), pdv, dp.pos);
      if (!t || *t < 0) continue;
      auto tmax = arc_tmax(arc);
      if (tmax && *t > *tmax) continue;
      if (*t == 0)
        hvert = arc.u;
      else if (tmax && *t == *tmax)
        hvert = arc.v;
      else
        hvert = split_arc_at(a, *t);
    }
    if (hvert < 0)
      throw std::logic_error("lift_curve: divisor point not on the tracked curve (" +
                             dp.label.str() + " on " + sigma.label.str() + ")");
    if (dp.phantom) {
      punctures.push_back({hvert, dp.label, true, false, -1});
      continue;
    }
    // expected coordinates of the true puncture
    QVec expect = sigma.verts[hvert];
    for (size_t c = 2; c < expect.size(); ++c) {
      auto ri = track_value_at(tracks[i], dp.pos, c);
      if (ri && *ri < expect[c]) expect[c] = *ri;
    }
    if (expect == sigma.verts[hvert]) {
      punctures.push_back({hvert, dp.label, false, false, -1});
      continue;
    }
    // walk down the vertical structure below hvert to the expected point:
    // depth-first over vertical arcs, bounded by not overshooting any
    // coordinate of the expected vector
    std::function<int(int)> descend = [&](int at) -> int {
      if (sigma.verts[at] == expect) return at;
      for (size_t a = 0; a < sigma.arcs.size(); ++a) {
        TrackedArc& arc = sigma.arcs[a];
        if (!is_vertical(arc) || arc.u != at) continue;
        // farthest parameter before overshooting the target
        std::optional<Q> tcap;
        bool progress = false;
        for (size_t c = 2; c < expect.size(); ++c) {
          if (arc.dir[c] >= 0) continue;
          Q lim = (expect[c] - sigma.verts[at][c]) / arc.dir[c];
          if (lim > 0) progress = true;
          if (!tcap || lim < *tcap) tcap = lim;
        }
        if (!tcap || !progress || *tcap <= 0) continue;
        auto tmax = arc_tmax(arc);
        Q t_go = (tmax && *tmax < *tcap) ? *tmax : *tcap;
        QVec probe = sigma.verts[at];
        for (size_t c = 0; c < probe.size(); ++c) probe[c] += t_go * arc.dir[c];
        // feasibility: never overshoot below the target
        bool feasible = true;
        for (size_t c = 2; c < expect.size(); ++c)
          if (probe[c] < expect[c]) feasible = false;
        if (!feasible) continue;
        if (tmax && t_go == *tmax) {
          int deeper = descend(arc.v);
          if (deeper >= 0) return deeper;
          continue;
        }
        if (probe == expect) {
          int vk = (t_go == 0) ? arc.u : split_arc_at(a, t_go);
          return vk;
        }
      }
      return -1;
    };
    int vk = descend(hvert);
    if (vk < 0) {
      std::ostringstream os;
      os << "lift_curve: puncture of " << sigma.label.str() << " by " << dp.label.str()
         << " not on the track; expect (";
      for (size_t c = 0; c < expect.size(); ++c)
        os << rational_str(expect[c]) << (c + 1 < expect.size() ? "," : ")");
      throw NonGenericError(os.str());
    }
    int head = -1;
    for (size_t b = 0; b < sigma.arcs.size(); ++b)
      if (is_vertical(sigma.arcs[b]) && sigma.arcs[b].v == vk) head = (int)b;
    punctures.push_back({vk, dp.label, false, true, head});
  }

  // 2. refine non-vertical arcs at shadow boundaries (ends of overlaps with
  //    |trop C_i|), so that arcs are entirely inside or outside the shadow
  for (size_t a = 0; a < sigma.arcs.size(); ++a) {
    bool again = true;
    while (again) {
      again = false;
      TrackedArc& arc = sigma.arcs[a];
      if (is_vertical(arc)) break;
      V2 base = plane_of(sigma.verts[arc.u]);
      V2 pdv = plane_dir(arc.dir);
      auto tmax = arc_tmax(arc);
      for (auto& [lo, hi] : detail_mod::overlap_intervals(Ci, base, pdv, tmax)) {
        if (lo > 0 && (!tmax || lo < *tmax)) {
          split_arc_at(a, lo);
          again = true;
          break;
        }
        if (hi && *hi > 0 && (!tmax || *hi < *tmax)) {
          split_arc_at(a, *hi);
          again = true;
          break;
        }
      }
    }
  }

  // 3. vertical slopes: E_r columns of curves through p_r descend with
  // slope 1; vertical pieces above a deferred puncture descend with slope 1
  // down to the puncture; everything else vertical is constant.
  size_t A0 = sigma.arcs.size();
  std::vector<std::optional<Q>> slope;
  slope.resize(A0);
  for (size_t a = 0; a < A0; ++a) {
    const TrackedArc& arc = sigma.arcs[a];
    if (!is_vertical(arc)) continue;
    if (arc.column >= 0 && pd.through_point(i, arc.column))
      slope[a] = Q(-1);
    else
      slope[a] = Q(0);
  }
  for (const auto& pc : punctures) {
    if (!pc.deferred) continue;
    // all vertical arcs on the path from the top down to the kink descend
    int at = pc.vertex;
    while (true) {
      int head = -1;
      for (size_t b = 0; b < sigma.arcs.size(); ++b)
        if (is_vertical(sigma.arcs[b]) && sigma.arcs[b].v == at) head = (int)b;
      if (head < 0) break;
      slope[head] = Q(-1);
      at = sigma.arcs[head].u;
    }
  }

  // 4. horizontal slopes: restriction of trop f_i off shadows, balance inside
  size_t A = sigma.arcs.size();
  slope.resize(A);
  std::vector<char> shadowed(A, 0);
  for (size_t a = 0; a < A; ++a) {
    const TrackedArc& arc = sigma.arcs[a];
    if (is_vertical(arc)) continue;
    V2 base = plane_of(sigma.verts[arc.u]);
    V2 pdv = plane_dir(arc.dir);
    auto tmax = arc_tmax(arc);
    Q tmid = tmax ? *tmax / 2 : Q(1);
    V2 mid = base + pdv.scaled(tmid);
    bool inside = Ci.contains(base) && Ci.contains(mid);
    if (inside) {
      shadowed[a] = 1;
      // an unbounded shadowed arc: the divisor of f_i along the curve only
      // kinks at finite points, so far out the slope is the asymptotic slope
      // of the tropical restriction (the cancellation offset is constant)
      if (arc.v < 0) slope[a] = detail_mod::trop_slope(Ci, mid, pdv);
      continue;
    }
    slope[a] = detail_mod::trop_slope(Ci, mid, pdv);
  }

  // 5. fresh punctures per vertex (phantoms absorbed by existing rays)
  std::vector<int> fresh(sigma.verts.size(), 0);
  std::vector<std::vector<LineLabel>> fresh_labels(sigma.verts.size());
  {
    auto has_ray_label = [&](int v, const LineLabel& L) {
      for (const auto& arc : sigma.arcs)
        if ((arc.u == v || arc.v == v) && arc.leaf && *arc.leaf == L) return true;
      return false;
    };
    for (const auto& pc : punctures) {
      if (pc.phantom && has_ray_label(pc.vertex, pc.label)) continue;
      fresh[pc.vertex] += 1;
      fresh_labels[pc.vertex].push_back(pc.label);
    }
  }

  // 6. solve shadowed slopes by balancing
  auto arcs_at = [&](int v) {
    std::vector<std::pair<int, int>> out;
    for (size_t a = 0; a < sigma.arcs.size(); ++a) {
      if (sigma.arcs[a].u == v) out.push_back({(int)a, 1});
      if (sigma.arcs[a].v == v) out.push_back({(int)a, -1});
    }
    return out;
  };
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t v = 0; v < sigma.verts.size(); ++v) {
      auto at = arcs_at((int)v);
      int unknown = -1, cnt = 0;
      Q acc = Q(fresh[v]);
      for (auto [a, sg] : at) {
        if (!slope[a]) {
          unknown = a;
          ++cnt;
        } else {
          acc -= Q(sg * sigma.arcs[a].weight) * *slope[a];
        }
      }
      if (cnt == 1) {
        int sg = sigma.arcs[unknown].u == (int)v ? 1 : -1;
        slope[unknown] = acc / Q(sg * sigma.arcs[unknown].weight);
        progress = true;
      }
    }
  }
  for (size_t a = 0; a < A; ++a)
    if (!slope[a]) {
      std::ostringstream os;
      os << "lift_curve: underdetermined slope on " << sigma.label.str() << " lifting by "
         << pd.labels[i].str() << "; unknown arcs:";
      for (size_t b = 0; b < A; ++b) {
        if (slope[b]) continue;
        os << " [" << rational_str(sigma.verts[sigma.arcs[b].u][0]) << ","
           << rational_str(sigma.verts[sigma.arcs[b].u][1]) << "]";
        if (sigma.arcs[b].v >= 0)
          os << "->[" << rational_str(sigma.verts[sigma.arcs[b].v][0]) << ","
             << rational_str(sigma.verts[sigma.arcs[b].v][1]) << "]";
        else
          os << "ray";
      }
      throw std::logic_error(os.str());
    }

  // 7. values by propagation from a non-shadowed anchor
  std::vector<std::optional<Q>> val(sigma.verts.size());
  {
    int anchor = -1;
    for (size_t a = 0; a < A && anchor < 0; ++a)
      if (!is_vertical(sigma.arcs[a]) && !shadowed[a]) anchor = sigma.arcs[a].u;
    if (anchor < 0) throw std::logic_error("lift_curve: no anchor on " + sigma.label.str());
    val[anchor] = detail_mod::trop_value(Ci, plane_of(sigma.verts[anchor]));
  }
  progress = true;
  while (progress) {
    progress = false;
    for (size_t a = 0; a < A; ++a) {
      const TrackedArc& arc = sigma.arcs[a];
      if (arc.v < 0) continue;
      auto tmax = arc_tmax(arc);
      if (val[arc.u] && !val[arc.v]) {
        val[arc.v] = *val[arc.u] + *slope[a] * *tmax;
        progress = true;
      } else if (val[arc.v] && !val[arc.u]) {
        val[arc.u] = *val[arc.v] - *slope[a] * *tmax;
        progress = true;
      }
    }
  }
  for (size_t v = 0; v < sigma.verts.size(); ++v)
    if (!val[v]) throw std::logic_error("lift_curve: disconnected track " + sigma.label.str());

  // consistency: vertices on non-shadowed horizontal arcs carry the
  // tropical restriction value
  for (size_t a = 0; a < A; ++a) {
    const TrackedArc& arc = sigma.arcs[a];
    if (is_vertical(arc) || shadowed[a]) continue;
    for (int v : {arc.u, arc.v}) {
      if (v < 0) continue;
      if (*val[v] != detail_mod::trop_value(Ci, plane_of(sigma.verts[v])))
        throw std::logic_error("lift_curve: restriction mismatch on " + sigma.label.str());
    }
  }

  // 8. extend the embedding
  for (size_t v = 0; v < sigma.verts.size(); ++v) sigma.verts[v].push_back(*val[v]);
  for (size_t a = 0; a < A; ++a) sigma.arcs[a].dir.push_back(*slope[a]);

  // 9. sprout fresh rays: marked-point rays descend in the new coordinate
  // (and in the cap of an already consumed owner); transverse puncture rays
  // descend in the new coordinate only.
  for (size_t v = 0; v < fresh.size(); ++v) {
    for (const auto& lab : fresh_labels[v]) {
      bool is_marked = lab.kind == LineKind::E && lab.i >= 4;
      TrackedArc ray;
      ray.u = (int)v;
      ray.v = -1;
      ray.dir = QVec(n0 + 1, Q(0));
      ray.dir[n0] = -1;
      ray.leaf = lab;
      ray.column = is_marked ? lab.i - 4 : -1;
      sigma.arcs.push_back(ray);
    }
  }

}

// ---------------------------------------------------------------------------
// the self cap: the level at which the curve's flap meets the surface
//
// Computed after all lifts: the cap at a track vertex is the tropical value
// of f_m lowered by the depth of the vertex below graph level,
//   cap(v) = trop f_m(w) - max_p(trop f_p(w) - tau_p(v)),
// which reproduces junction levels over overlaps and the straight descent
// with partner offsets down the marked-point columns. Transverse puncture
// rays keep a constant cap.

inline void compute_cap(TrackedCurve& sigma, const PlaneData& pd, int m) {
  const PlaneCurve& Cm = pd.curves[m];
  size_t dim = sigma.verts[0].size();
  auto cap_at = [&](const QVec& p) -> Q {
    V2 w = plane_of(p);
    Q depth = 0;
    for (size_t c = 0; c < pd.curves.size(); ++c) {
      if ((int)c == m) continue;
      Q d = detail_mod::trop_value(pd.curves[c], w) - p[2 + c];
      if (d > depth) depth = d;
    }
    return detail_mod::trop_value(Cm, w) - depth;
  };
  // horizontal vertices take the depth formula; vertices down vertical rays
  // are propagated (E_r columns descend, transverse puncture rays are flat)
  std::vector<char> vertical_vertex(sigma.verts.size(), 0);
  for (const auto& arc : sigma.arcs)
    if (is_vertical(arc) && arc.v >= 0) vertical_vertex[arc.v] = 1;
  for (size_t v = 0; v < sigma.verts.size(); ++v)
    if (!vertical_vertex[v]) sigma.verts[v][2 + m] = cap_at(sigma.verts[v]);
  {
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& arc : sigma.arcs) {
        if (!is_vertical(arc) || arc.v < 0 || !vertical_vertex[arc.v]) continue;
        // parent value must be known (horizontal or already propagated)
        Q slope = (arc.column >= 0) ? Q(-1) : Q(0);
        Q t;
        bool set = false;
        for (size_t k = 0; k < sigma.verts[arc.u].size(); ++k)
          if (k != (size_t)(2 + m) && arc.dir[k] != 0) {
            t = (sigma.verts[arc.v][k] - sigma.verts[arc.u][k]) / arc.dir[k];
            set = true;
            break;
          }
        if (!set) continue;
        Q want = sigma.verts[arc.u][2 + m] + slope * t;
        if (sigma.verts[arc.v][2 + m] != want) {
          sigma.verts[arc.v][2 + m] = want;
          progress = true;
        }
      }
    }
  }
  for (auto& arc : sigma.arcs) {
    if (arc.v >= 0) {
      // slope from endpoint values over the arc parameter
      const QVec& b = sigma.verts[arc.u];
      const QVec& f = sigma.verts[arc.v];
      Q t;
      for (size_t k = 0; k < dim; ++k)
        if (k != (size_t)(2 + m) && arc.dir[k] != 0) {
          t = (f[k] - b[k]) / arc.dir[k];
          break;
        }
      arc.dir[2 + m] = (f[2 + m] - b[2 + m]) / t;
    } else if (is_vertical(arc) && arc.column < 0) {
      arc.dir[2 + m] = 0;  // transverse puncture ray: constant cap
    } else {
      // evaluate the cap formula one step out along the ray
      QVec far = sigma.verts[arc.u];
      for (size_t k = 0; k < dim; ++k) far[k] += arc.dir[k];
      far[2 + m] = sigma.verts[arc.u][2 + m];  // placeholder, unused by cap_at
      arc.dir[2 + m] = cap_at(far) - sigma.verts[arc.u][2 + m];
    }
  }
  sigma.self_coord = 2 + m;
}

// ---------------------------------------------------------------------------
// the tracking stage

namespace detail_mod {

inline TrackedCurve init_track(const LineLabel& lab, const PlaneCurve& C) {
  TrackedCurve t;
  t.label = lab;
  for (const auto& p : C.pieces) {
    int u = t.add_vertex(QVec{p.a.x, p.a.y});
    TrackedArc arc;
    arc.u = u;
    arc.weight = p.weight;
    if (p.bounded) {
      arc.v = t.add_vertex(QVec{p.b.x, p.b.y});
      arc.dir = primitive(QVec{p.b.x - p.a.x, p.b.y - p.a.y});
    } else {
      arc.v = -1;
      arc.dir = QVec{p.dir.x, p.dir.y};
      arc.leaf = direction_boundary_label(p.dir);
    }
    t.arcs.push_back(arc);
  }
  return t;
}

}  // namespace detail_mod


// balancing certificate for a track (the cap coordinate is the flap top,
// not part of the cycle, and is excluded)
inline void verify_track_balance(const TrackedCurve& sigma, const std::string& context) {
  size_t dim = sigma.verts[0].size();
  for (size_t v = 0; v < sigma.verts.size(); ++v) {
    QVec sum(dim, Q(0));
    bool any = false;
    for (const auto& arc : sigma.arcs) {
      int sg = (arc.u == (int)v) ? 1 : (arc.v == (int)v ? -1 : 0);
      if (!sg) continue;
      any = true;
      for (size_t k = 0; k < dim && k < arc.dir.size(); ++k)
        sum[k] += Q(sg * arc.weight) * arc.dir[k];
    }
    if (sigma.self_coord >= 0 && (size_t)sigma.self_coord < dim) sum[sigma.self_coord] = 0;
    if (any && !is_zero(sum)) {
      std::ostringstream os;
      os << "track of " << sigma.label.str() << " unbalanced " << context << " at vertex (";
      for (size_t k = 0; k < dim; ++k) os << rational_str(sigma.verts[v][k]) << (k + 1 < dim ? "," : ")");
      os << " defect (";
      for (size_t k = 0; k < dim; ++k) os << rational_str(sum[k]) << (k + 1 < dim ? "," : ")");
      throw std::logic_error(os.str());
    }
  }
}

inline std::vector<TrackedCurve> run_tracking(const PlaneData& pd) {
  size_t k = pd.curves.size();
  std::vector<TrackedCurve> tracks;
  for (size_t j = 0; j < k; ++j)
    tracks.push_back(detail_mod::init_track(pd.labels[j], pd.curves[j]));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i == j) {
        // reserve the slot; the cap pass fills it once every lift is done
        for (auto& v : tracks[j].verts) v.push_back(Q(0));
        for (auto& a : tracks[j].arcs) a.dir.push_back(Q(0));
        tracks[j].self_coord = (int)(2 + i);
        continue;
      }
      lift_curve(tracks, pd, (int)i, (int)j, divisor_points(pd, (int)i, (int)j));
    }
    for (size_t j = 0; j < k; ++j)
      if (j != i) verify_track_balance(tracks[j], "after step " + pd.labels[i].str());
  }
  for (size_t j = 0; j < k; ++j) compute_cap(tracks[j], pd, (int)j);
  return tracks;
}


// ---------------------------------------------------------------------------
// surface assembly
//
// The final surface is a union of convex 2-cells:
//   graph cells   - lifts of the plane arrangement's 2-cells,
//   hanging cells - every final track arc swept in its own flap direction,
//   column cells  - cluster segments over marked points and their wedges,
//   bridge cells  - between consecutive levels stacked over a plane piece.
// The soup is then coarsened to the canonical cell structure.

struct SoupCell {
  std::vector<QVec> verts;
  std::vector<QVec> rays;  // primitive
  long weight = 1;
};

namespace detail_mod {

inline void add_soup(std::vector<SoupCell>& soup, SoupCell c) {
  std::sort(c.verts.begin(), c.verts.end(), lex_less);
  c.verts.erase(std::unique(c.verts.begin(), c.verts.end()), c.verts.end());
  for (auto& r : c.rays) r = primitive(r);
  std::sort(c.rays.begin(), c.rays.end(), lex_less);
  c.rays.erase(std::unique(c.rays.begin(), c.rays.end()), c.rays.end());
  // dimension check: only keep honest 2-cells
  std::vector<QVec> dirs;
  for (size_t i = 1; i < c.verts.size(); ++i) dirs.push_back(c.verts[i] - c.verts[0]);
  for (const auto& r : c.rays) dirs.push_back(r);
  if (rank_of_vectors(dirs) != 2) return;
  for (const auto& d : soup)
    if (d.verts == c.verts && d.rays == c.rays) return;
  soup.push_back(std::move(c));
}

// full coordinate lift of a plane point at graph level
inline QVec graph_lift(const PlaneData& pd, const V2& w) {
  QVec out{w.x, w.y};
  for (const auto& C : pd.curves) out.push_back(C.eval(w));
  return out;
}

inline QVec graph_ray_lift(const PlaneData& pd, const V2& sample, const V2& d) {
  QVec out{d.x, d.y};
  for (const auto& C : pd.curves) out.push_back(trop_slope(C, sample, d));
  return out;
}

}  // namespace detail_mod

// Cluster structure over a marked point. Curves through p_r separate at
// ultrametric depths; each cluster K yields a ray parallel to the common
// descent, dipped by its internal bottleneck in the members' coordinates:
//   slot_c = B_c - min(sep(c,K), s_K) - t.
// The fiber over P_r is tiled by bands between parent and child rays, with
// the singleton "clusters" being the tracked curves' own verticals.

struct ClusterNode {
  std::vector<int> members;  // curve indices; size >= 2 (root = all)
  Q split = 0;               // internal bottleneck s_K
  int parent = -1;           // index into the node list (-1 for root)
};

inline Q pair_separation(const PlaneData& pd, int r, int a, int b) {
  return germ_overlap_depth(pd.curves[a], pd.curves[b], pd.marked[r]);
}

inline std::vector<ClusterNode> cluster_tree(const PlaneData& pd, int r) {
  std::vector<int> through;
  for (size_t c = 0; c < pd.curves.size(); ++c)
    if (pd.through_point((int)c, r)) through.push_back((int)c);
  std::vector<ClusterNode> nodes;
  if (through.size() < 2) return nodes;
  std::function<int(std::vector<int>, int)> rec = [&](std::vector<int> K, int parent) -> int {
    ClusterNode node;
    node.members = K;
    node.parent = parent;
    Q split;
    bool first = true;
    for (size_t x = 0; x < K.size(); ++x)
      for (size_t y = x + 1; y < K.size(); ++y) {
        Q s = pair_separation(pd, r, K[x], K[y]);
        if (first || s < split) {
          split = s;
          first = false;
        }
      }
    node.split = split;
    int my = (int)nodes.size();
    nodes.push_back(node);
    // components under sep > split
    std::vector<int> comp(K.size(), -1);
    int nc = 0;
    for (size_t x = 0; x < K.size(); ++x) {
      if (comp[x] >= 0) continue;
      comp[x] = nc;
      std::vector<size_t> stack{x};
      while (!stack.empty()) {
        size_t u = stack.back();
        stack.pop_back();
        for (size_t y = 0; y < K.size(); ++y)
          if (comp[y] < 0 && pair_separation(pd, r, K[u], K[y]) > split) {
            comp[y] = nc;
            stack.push_back(y);
          }
      }
      ++nc;
    }
    for (int c = 0; c < nc; ++c) {
      std::vector<int> sub;
      for (size_t x = 0; x < K.size(); ++x)
        if (comp[x] == c) sub.push_back(K[x]);
      if (sub.size() >= 2) rec(sub, my);
    }
    return my;
  };
  rec(through, -1);
  return nodes;
}

// top point of a cluster ray
inline QVec cluster_ray_top(const PlaneData& pd, int r, const ClusterNode& node) {
  const V2& P = pd.marked[r];
  QVec out{P.x, P.y};
  for (size_t c = 0; c < pd.curves.size(); ++c) {
    Q base = pd.curves[c].eval(P);
    if (!pd.through_point((int)c, r)) {
      out.push_back(base);
      continue;
    }
    bool member =
        std::find(node.members.begin(), node.members.end(), (int)c) != node.members.end();
    Q dip = member ? node.split : std::min(pair_separation(pd, r, (int)c, node.members[0]),
                                           node.split);
    out.push_back(base - dip);
  }
  return out;
}

inline QVec column_direction(const PlaneData& pd, int r) {
  QVec dir(2 + pd.curves.size(), Q(0));
  for (size_t c = 0; c < pd.curves.size(); ++c)
    if (pd.through_point((int)c, r)) dir[2 + c] = -1;
  return dir;
}

// ---------------------------------------------------------------------------
// assembly

inline std::vector<SoupCell> assemble_surface(const PlaneData& pd,
                                              const std::vector<TrackedCurve>& tracks) {
  size_t k = pd.curves.size();
  size_t dim = 2 + k;
  std::vector<SoupCell> soup;

  // --- plane arrangement from the supporting lines of all tree pieces
  std::vector<std::array<Q, 3>> lines;  // a x + b y = c
  auto add_line = [&](const Q& a, const Q& b, const Q& c) {
    QVec n = primitive(QVec{a, b, c});
    if (sgn(n[0]) < 0 || (n[0] == 0 && sgn(n[1]) < 0))
      n = QVec{-n[0], -n[1], -n[2]};
    std::array<Q, 3> key{n[0], n[1], n[2]};
    for (auto& l : lines)
      if (l == key) return;
    lines.push_back(key);
  };
  for (const auto& C : pd.curves)
    for (const auto& pc : C.pieces) {
      // line through pc.a with direction pc.dir
      Q a = -pc.dir.y, b = pc.dir.x;
      add_line(a, b, a * pc.a.x + b * pc.a.y);
    }
  // seed with two non-parallel lines
  size_t second = 1;
  while (second < lines.size() &&
         lines[0][0] * lines[second][1] - lines[second][0] * lines[0][1] == 0)
    ++second;
  if (second >= lines.size()) throw std::logic_error("assemble_surface: degenerate line set");
  std::vector<Cell2> cells;
  for (int s1 = -1; s1 <= 1; s1 += 2)
    for (int s2 = -1; s2 <= 1; s2 += 2) {
      Cell2 c;
      c.halves.push_back({Q(s1) * lines[0][0], Q(s1) * lines[0][1], Q(s1) * lines[0][2]});
      c.halves.push_back({Q(s2) * lines[second][0], Q(s2) * lines[second][1],
                          Q(s2) * lines[second][2]});
      cells.push_back(c);
    }
  for (size_t l = 0; l < lines.size(); ++l) {
    if (l == 0 || l == second) continue;
    std::vector<Cell2> next;
    for (const auto& cell : cells) {
      auto [hi, lo] = split(cell, lines[l][0], lines[l][1], lines[l][2]);
      for (const auto& piece : {hi, lo})
        if (vrep(piece).dim == 2) next.push_back(piece);
    }
    cells = std::move(next);
  }

  // graph cells
  for (const auto& cell : cells) {
    auto v = vrep(cell);
    if (v.dim != 2) continue;
    SoupCell sc;
    V2 sample{Q(0), Q(0)};
    for (const auto& p : v.verts) sample = sample + p;
    Q inv(1, (long)v.verts.size());
    inv.canonicalize();
    sample = sample.scaled(inv);
    for (const auto& r : v.rays) sample = sample + r;
    for (const auto& p : v.verts) sc.verts.push_back(detail_mod::graph_lift(pd, p));
    for (const auto& r : v.rays) sc.rays.push_back(detail_mod::graph_ray_lift(pd, sample, r));
    detail_mod::add_soup(soup, std::move(sc));
  }

  // hanging cells: every track arc swept in its own flap direction
  for (size_t m = 0; m < tracks.size(); ++m) {
    const TrackedCurve& t = tracks[m];
    for (const auto& arc : t.arcs) {
      SoupCell sc;
      sc.verts.push_back(t.verts[arc.u]);
      if (arc.v >= 0)
        sc.verts.push_back(t.verts[arc.v]);
      else
        sc.rays.push_back(arc.dir);
      QVec down(dim, Q(0));
      down[2 + m] = -1;
      sc.rays.push_back(down);
      sc.weight = arc.weight;
      detail_mod::add_soup(soup, std::move(sc));
    }
  }

  // column cells: bands between parent and child cluster rays, and between
  // the smallest cluster containing a curve and that curve's own vertical
  size_t marked_count = pd.marked.size();
  for (size_t r = 0; r < marked_count; ++r) {
    auto nodes = cluster_tree(pd, (int)r);
    if (nodes.empty()) continue;
    QVec dirv = column_direction(pd, (int)r);
    // root ray top = graph point over P_r with zero dips? the root node has
    // split = the first separation; the true generic ray starts at the graph
    // point, so add a synthetic top for the root band
    QVec graph_top = detail_mod::graph_lift(pd, pd.marked[r]);
    auto band = [&](const QVec& top_a, const QVec& top_b) {
      SoupCell sc;
      sc.verts.push_back(top_a);
      sc.verts.push_back(top_b);
      sc.rays.push_back(dirv);
      detail_mod::add_soup(soup, std::move(sc));
    };
    for (size_t n = 0; n < nodes.size(); ++n) {
      QVec top = cluster_ray_top(pd, (int)r, nodes[n]);
      QVec parent_top = nodes[n].parent < 0 ? graph_top
                                            : cluster_ray_top(pd, (int)r, nodes[nodes[n].parent]);
      band(parent_top, top);
      if (nodes[n].parent < 0 && !(parent_top == top)) {
        // also connect the graph point down: handled by the same band
      }
    }
    // tracks against their smallest containing cluster (or the graph point)
    std::vector<int> through;
    for (size_t c = 0; c < pd.curves.size(); ++c)
      if (pd.through_point((int)c, (int)r)) through.push_back((int)c);
    for (int c : through) {
      // smallest cluster containing c = deepest node with c among members
      int best = -1;
      for (size_t n = 0; n < nodes.size(); ++n) {
        if (std::find(nodes[n].members.begin(), nodes[n].members.end(), c) ==
            nodes[n].members.end())
          continue;
        if (best < 0 || nodes[n].split > nodes[best].split) best = (int)n;
      }
      QVec parent_top = best < 0 ? graph_top : cluster_ray_top(pd, (int)r, nodes[best]);
      // top vertex of the track's vertical
      const TrackedCurve& t = tracks[c];
      for (const auto& arc : t.arcs) {
        if (!is_vertical(arc) || arc.column != (int)r || arc.s_lo != 0) continue;
        band(parent_top, t.verts[arc.u]);
      }
    }
  }

  // stacked bridges over plane pieces (graph level, pair junction lines,
  // track arcs ordered by depth)
  {
    // enumerate plane pieces: for each supporting line, breakpoints at
    // intersections with the other lines
    for (const auto& L : lines) {
      // parametrize the line: base point + direction
      V2 d{L[1], -L[0]};
      V2 base;
      if (L[0] != 0)
        base = V2{L[2] / L[0], Q(0)};
      else
        base = V2{Q(0), L[2] / L[1]};
      std::set<Q> brks;
      for (const auto& M : lines) {
        Q det = L[0] * M[1] - M[0] * L[1];
        if (det == 0) continue;
        V2 p{(L[2] * M[1] - M[2] * L[1]) / det, (L[0] * M[2] - M[0] * L[2]) / det};
        brks.insert(*detail_mod::line_param(base, d, p));
      }
      // also break at parameter points where track depth orders change:
      // collect candidate level functions over the line from all tracks
      struct Level {
        QVec at0, at1;  // coordinates at parameters t0 and t1 (affine)
        Q t0, t1;
        bool has_range;
        Q lo;
        std::optional<Q> hi;
      };
      std::vector<std::pair<std::pair<Q, std::optional<Q>>, std::pair<const TrackedCurve*, const TrackedArc*>>> covers;
      for (const auto& t : tracks)
        for (const auto& arc : t.arcs) {
          if (is_vertical(arc)) continue;
          V2 ab = plane_of(t.verts[arc.u]);
          V2 ad = plane_dir(arc.dir);
          if (cross(ad, d) != 0) continue;           // not parallel
          if (cross(d, ab - base) != 0) continue;    // different line
          Q lo = *detail_mod::line_param(base, d, ab);
          std::optional<Q> hi;
          if (arc.v >= 0) hi = *detail_mod::line_param(base, d, plane_of(t.verts[arc.v]));
          bool forward = dot2(ad, d) > 0;
          if (hi && *hi < lo) std::swap(lo, *hi);
          if (!hi && !forward) {
            // ray toward -infinity in the parameter: encode as (-inf, lo]
            covers.push_back({{lo, std::nullopt}, {&t, &arc}});
            // mark reversed by storing hi < lo sentinel: handled via dir later
            covers.back().first = {lo, std::nullopt};
            // we treat unbounded pieces via breakpoints only between brks
          }
          covers.push_back({{lo, hi}, {&t, &arc}});
          brks.insert(lo);
          if (hi) brks.insert(*hi);
        }
      std::vector<Q> bs(brks.begin(), brks.end());
      if (bs.empty()) continue;
      // pieces between consecutive breakpoints (plus the two unbounded ends)
      auto eval_arc_at = [&](const TrackedCurve& t, const TrackedArc& arc, const Q& tpar) -> QVec {
        V2 ab = plane_of(t.verts[arc.u]);
        Q t_on_arc;
        V2 ad = plane_dir(arc.dir);
        // parameter of "base + tpar*d" along the arc
        V2 w = base + d.scaled(tpar);
        Q s = (ad.x != 0) ? (w.x - ab.x) / ad.x : (w.y - ab.y) / ad.y;
        QVec out = t.verts[arc.u];
        for (size_t kk = 0; kk < out.size(); ++kk) out[kk] = out[kk] + s * arc.dir[kk];
        return out;
      };
      auto covers_point = [&](const std::pair<Q, std::optional<Q>>& range,
                              const TrackedCurve& t, const TrackedArc& arc, const Q& tm) {
        // range in line parameters; for rays figure the actual side
        V2 w = base + d.scaled(tm);
        V2 ab = plane_of(t.verts[arc.u]);
        V2 ad = plane_dir(arc.dir);
        Q s = (ad.x != 0) ? (w.x - ab.x) / ad.x : (w.y - ab.y) / ad.y;
        if (s < 0) return false;
        if (arc.v >= 0) {
          const QVec& bb = t.verts[arc.u];
          const QVec& ff = t.verts[arc.v];
          Q smax;
          for (size_t kk = 0; kk < bb.size(); ++kk)
            if (arc.dir[kk] != 0) {
              smax = (ff[kk] - bb[kk]) / arc.dir[kk];
              break;
            }
          if (s > smax) return false;
        }
        return true;
      };
      auto do_piece = [&](std::optional<Q> plo, std::optional<Q> phi) {
        Q tm;
        if (plo && phi)
          tm = (*plo + *phi) / 2;
        else if (plo)
          tm = *plo + 1;
        else
          tm = *phi - 1;
        struct Lv {
          const TrackedCurve* t;
          const TrackedArc* a;
          Q depth;
        };
        std::vector<Lv> lv;
        V2 wm = base + d.scaled(tm);
        QVec g = detail_mod::graph_lift(pd, wm);
        for (auto& [range, ta] : covers) {
          if (!covers_point(range, *ta.first, *ta.second, tm)) continue;
          QVec pos = eval_arc_at(*ta.first, *ta.second, tm);
          Q depth = 0;
          for (size_t kk = 2; kk < dim; ++kk) depth += g[kk] - pos[kk];
          lv.push_back({ta.first, ta.second, depth});
        }
        if (lv.empty()) return;
        std::sort(lv.begin(), lv.end(), [](const Lv& a, const Lv& b) { return a.depth < b.depth; });
        // stack: graph level, then each strictly deeper level; a bridge cell
        // joins consecutive levels
        struct Side {
          bool bounded;
          Q at;          // endpoint parameter (bounded) or unused
        };
        auto level_pos = [&](const Lv* l, const Q& tp) -> QVec {
          return l ? eval_arc_at(*l->t, *l->a, tp) : detail_mod::graph_lift(pd, base + d.scaled(tp));
        };
        auto level_ray = [&](const Lv* l, const V2& dир) -> QVec {
          if (!l) return detail_mod::graph_ray_lift(pd, wm, dир);
          QVec rr = l->a->dir;
          if (dot2(plane_dir(l->a->dir), dир) < 0)
            for (auto& xx : rr) xx = -xx;
          return rr;
        };
        const Lv* prev = nullptr;
        Q prev_depth = 0;
        for (const auto& l : lv) {
          if (l.depth == prev_depth) {
            prev = &l;
            continue;
          }
          SoupCell sc;
          if (plo) {
            sc.verts.push_back(level_pos(prev, *plo));
            sc.verts.push_back(level_pos(&l, *plo));
          } else {
            sc.rays.push_back(level_ray(prev, V2{-d.x, -d.y}));
            sc.rays.push_back(level_ray(&l, V2{-d.x, -d.y}));
          }
          if (phi) {
            sc.verts.push_back(level_pos(prev, *phi));
            sc.verts.push_back(level_pos(&l, *phi));
          } else {
            sc.rays.push_back(level_ray(prev, d));
            sc.rays.push_back(level_ray(&l, d));
          }
          detail_mod::add_soup(soup, std::move(sc));
          prev = &l;
          prev_depth = l.depth;
        }
      };
      for (size_t bi = 0; bi + 1 < bs.size(); ++bi) do_piece(bs[bi], bs[bi + 1]);
      do_piece(std::nullopt, bs.front());
      do_piece(bs.back(), std::nullopt);
    }
  }
  return soup;
}

// ---------------------------------------------------------------------------
// canonicalization: soup of convex 2-cells -> polyhedral complex
//
// Merges coplanar neighbors without a crease, then rebuilds the 1-skeleton
// as maximal pieces with constant incidence.

namespace detail_mod {

// 2D chart of a cell: orthonormal-free exact coordinates
struct Chart {
  QVec origin;
  QVec b1, b2;  // direction basis
  V2 project(const QVec& p) const {
    // solve p - origin = x b1 + y b2 (least structure: use two independent rows)
    size_t n = origin.size();
    QMat A(n, 2);
    for (size_t i = 0; i < n; ++i) {
      A(i, 0) = b1[i];
      A(i, 1) = b2[i];
    }
    QVec rhs(n);
    for (size_t i = 0; i < n; ++i) rhs[i] = p[i] - origin[i];
    auto sol = solve(A, rhs);
    if (!sol) throw std::logic_error("Chart::project: point off the plane");
    return V2{(*sol)[0], (*sol)[1]};
  }
  V2 project_dir(const QVec& d) const {
    size_t n = origin.size();
    QMat A(n, 2);
    for (size_t i = 0; i < n; ++i) {
      A(i, 0) = b1[i];
      A(i, 1) = b2[i];
    }
    auto sol = solve(A, d);
    if (!sol) throw std::logic_error("Chart::project_dir: direction off the plane");
    return V2{(*sol)[0], (*sol)[1]};
  }
  QVec unproject(const V2& v) const {
    QVec out = origin;
    for (size_t i = 0; i < out.size(); ++i) out[i] += v.x * b1[i] + v.y * b2[i];
    return out;
  }
  QVec unproject_dir(const V2& v) const {
    QVec out(origin.size(), Q(0));
    for (size_t i = 0; i < out.size(); ++i) out[i] = v.x * b1[i] + v.y * b2[i];
    return out;
  }
};

inline Chart cell_chart(const SoupCell& c) {
  Chart ch;
  ch.origin = c.verts[0];
  std::vector<QVec> dirs;
  for (size_t i = 1; i < c.verts.size(); ++i) dirs.push_back(c.verts[i] - c.verts[0]);
  for (const auto& r : c.rays) dirs.push_back(r);
  // pick two independent
  ch.b1 = dirs[0];
  for (size_t i = 1; i < dirs.size(); ++i) {
    if (!in_span({ch.b1}, dirs[i])) {
      ch.b2 = dirs[i];
      return ch;
    }
  }
  throw std::logic_error("cell_chart: cell is not 2-dimensional");
}

// boundary edges of a soup cell as 1-dim faces, in ambient coordinates
struct BoundaryPiece {
  QVec a;                    // base vertex
  std::optional<QVec> b;     // far vertex
  QVec dir;                  // primitive (a->b for bounded)
};

inline std::vector<BoundaryPiece> cell_boundary(const SoupCell& c) {
  Chart ch = cell_chart(c);
  Cell2 poly;
  std::vector<V2> vs;
  for (const auto& p : c.verts) vs.push_back(ch.project(p));
  std::vector<V2> rs;
  for (const auto& r : c.rays) rs.push_back(ch.project_dir(r));
  // H-representation by support tests over generator pairs
  std::vector<Half2> halves;
  auto try_half = [&](const V2& p, const V2& q) {
    if (p == q) return;
    Q ha = q.y - p.y, hb = p.x - q.x;
    Half2 h{ha, hb, ha * p.x + hb * p.y};
    int pos = 0, neg = 0;
    for (const auto& x : vs) {
      int s = sgn(h.eval(x));
      pos += s > 0;
      neg += s < 0;
    }
    for (const auto& r : rs) {
      int s = sgn(h.a * r.x + h.b * r.y);
      pos += s > 0;
      neg += s < 0;
    }
    if (pos && neg) return;
    if (neg) h = Half2{-h.a, -h.b, -h.c};
    for (const auto& g : halves)
      if (g == h) return;
    halves.push_back(h);
  };
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) try_half(vs[i], vs[j]);
  for (size_t i = 0; i < vs.size(); ++i)
    for (const auto& r : rs) try_half(vs[i], vs[i] + r);
  poly.halves = halves;

  std::vector<BoundaryPiece> out;
  for (const auto& h : halves) {
    auto face = face_on(poly, h);
    if (face.dim != 1) continue;
    BoundaryPiece bp;
    bp.a = ch.unproject(face.verts[0]);
    if (face.verts.size() == 2) {
      bp.b = ch.unproject(face.verts[1]);
      bp.dir = primitive(*bp.b - bp.a);
    } else if (face.rays.size() == 1) {
      bp.dir = primitive(ch.unproject_dir(face.rays[0]));
    } else {
      continue;
    }
    out.push_back(bp);
  }
  return out;
}

}  // namespace detail_mod

// canonical line key for grouping collinear boundary pieces
namespace detail_mod {

struct LineKey {
  QVec dir;    // primitive, sign-normalized
  QVec base;   // base point reduced modulo dir
  friend bool operator<(const LineKey& x, const LineKey& y) {
    if (x.dir != y.dir) return lex_less(x.dir, y.dir);
    return lex_less(x.base, y.base);
  }
  friend bool operator==(const LineKey& x, const LineKey& y) {
    return x.dir == y.dir && x.base == y.base;
  }
};

inline LineKey line_key(const QVec& pt, const QVec& dir_in) {
  LineKey k;
  k.dir = primitive(dir_in);
  for (size_t i = 0; i < k.dir.size(); ++i) {
    if (k.dir[i] == 0) continue;
    if (k.dir[i] < 0)
      for (auto& x : k.dir) x = -x;
    break;
  }
  // reduce pt modulo dir: subtract t*dir so that the first coordinate with
  // dir != 0 becomes 0
  Q t;
  for (size_t i = 0; i < k.dir.size(); ++i)
    if (k.dir[i] != 0) {
      t = pt[i] / k.dir[i];
      break;
    }
  k.base = pt;
  for (size_t i = 0; i < k.base.size(); ++i) k.base[i] -= t * k.dir[i];
  return k;
}

}  // namespace detail_mod

// Builds the honest polyhedral complex from the cell soup: 2-cells as given
// (coplanar uncreased neighbors merged first), 1-cells as maximal pieces of
// shared boundary with constant incidence, 0-cells as their endpoints.
inline PolyComplex soup_to_complex(std::vector<SoupCell> soup, bool merge) {
  using detail_mod::BoundaryPiece;
  using detail_mod::LineKey;

  // --- optional merge pass -------------------------------------------------
  if (merge) {
    bool merged = true;
    while (merged) {
      merged = false;
      // collect boundary pieces per cell
      std::vector<std::vector<BoundaryPiece>> bnd(soup.size());
      for (size_t i = 0; i < soup.size(); ++i) bnd[i] = detail_mod::cell_boundary(soup[i]);
      // index pieces by line
      std::map<LineKey, std::vector<std::pair<size_t, size_t>>> byline;
      for (size_t i = 0; i < soup.size(); ++i)
        for (size_t e = 0; e < bnd[i].size(); ++e)
          byline[detail_mod::line_key(bnd[i][e].a, bnd[i][e].dir)].push_back({i, e});
      // for each line: find pairs of cells sharing overlapping pieces with no
      // third cell on the shared interior; merge coplanar equal-weight pairs
      for (auto& [key, items] : byline) {
        if (merged) break;
        // parametrize pieces along the line
        auto param = [&](const QVec& p) -> Q {
          for (size_t i = 0; i < key.dir.size(); ++i)
            if (key.dir[i] != 0) return Q((p[i] - key.base[i]) / key.dir[i]);
          throw std::logic_error("soup_to_complex: zero line direction");
        };
        for (size_t x = 0; x < items.size() && !merged; ++x)
          for (size_t y = x + 1; y < items.size() && !merged; ++y) {
            auto [ci, ei] = items[x];
            auto [cj, ej] = items[y];
            if (ci == cj) continue;
            if (soup[ci].weight != soup[cj].weight) continue;
            const BoundaryPiece& A = bnd[ci][ei];
            const BoundaryPiece& B = bnd[cj][ej];
            // intervals along the line, with optional infinite ends
            auto interval = [&](const BoundaryPiece& P)
                -> std::pair<std::optional<Q>, std::optional<Q>> {
              Q lo = param(P.a);
              if (P.b) {
                Q hi = param(*P.b);
                if (hi < lo) std::swap(lo, hi);
                return {lo, hi};
              }
              Q dp = dot(P.dir, key.dir);
              if (dp > 0) return {lo, std::nullopt};
              return {std::nullopt, lo};
            };
            auto ia = interval(A), ib = interval(B);
            std::optional<Q> lo, hi;
            if (ia.first && ib.first)
              lo = std::max(*ia.first, *ib.first);
            else if (ia.first)
              lo = ia.first;
            else
              lo = ib.first;
            if (ia.second && ib.second)
              hi = std::min(*ia.second, *ib.second);
            else if (ia.second)
              hi = ia.second;
            else
              hi = ib.second;
            bool overlap = (!lo || !hi) ? true : (*lo < *hi);
            if (!overlap) continue;
            // sample point in the shared relative interior
            Q mid;
            if (lo && hi)
              mid = (*lo + *hi) / 2;
            else if (lo)
              mid = *lo + 1;
            else if (hi)
              mid = *hi - 1;
            else
              mid = 0;
            QVec sample = key.base;
            for (size_t kk = 0; kk < sample.size(); ++kk) sample[kk] += mid * key.dir[kk];
            int count = 0;
            for (const auto& [ck, ek] : items) {
              const BoundaryPiece& P = bnd[ck][ek];
              auto ip = interval(P);
              Q sp = param(sample);
              bool inside = (!ip.first || sp >= *ip.first) && (!ip.second || sp <= *ip.second);
              if (inside) ++count;
            }

            if (count != 2) continue;
            // coplanar?
            std::vector<QVec> dirs;
            const SoupCell& CA = soup[ci];
            const SoupCell& CB = soup[cj];
            for (size_t t2 = 1; t2 < CA.verts.size(); ++t2) dirs.push_back(CA.verts[t2] - CA.verts[0]);
            for (const auto& r : CA.rays) dirs.push_back(r);
            size_t base_rank = rank_of_vectors(dirs);
            if (base_rank != 2) continue;
            std::vector<QVec> dirs2 = dirs;
            for (size_t t2 = 0; t2 < CB.verts.size(); ++t2) dirs2.push_back(CB.verts[t2] - CA.verts[0]);
            for (const auto& r : CB.rays) dirs2.push_back(r);
            if (rank_of_vectors(dirs2) != 2) continue;
            // crease? the union must be flat: since coplanar it is. merge and
            // verify convex union by area additivity in the chart
            SoupCell uni;
            uni.weight = CA.weight;
            for (const auto& v : CA.verts) uni.verts.push_back(v);
            for (const auto& v : CB.verts) uni.verts.push_back(v);
            for (const auto& r : CA.rays) uni.rays.push_back(r);
            for (const auto& r : CB.rays) uni.rays.push_back(r);
            // reduce to extreme points in the chart
            detail_mod::Chart ch = detail_mod::cell_chart(uni);
            std::vector<V2> pts;
            for (const auto& v : uni.verts) pts.push_back(ch.project(v));
            auto hull = convex_hull(pts);
            auto area2 = [&](const std::vector<V2>& poly) -> Q {
              Q a2 = 0;
              for (size_t t2 = 0; t2 < poly.size(); ++t2)
                a2 += cross(poly[t2], poly[(t2 + 1) % poly.size()]);
              return Q(abs(a2));
            };
            // bounded case only for the area certificate; unbounded unions
            // are accepted when every generator stays extreme-compatible
            bool ok = true;
            if (uni.rays.empty() && CA.rays.empty() && CB.rays.empty()) {
              std::vector<V2> pa, pb;
              for (const auto& v : CA.verts) pa.push_back(ch.project(v));
              for (const auto& v : CB.verts) pb.push_back(ch.project(v));
              ok = area2(hull) == area2(convex_hull(pa)) + area2(convex_hull(pb));
            }
            if (!ok) continue;
            SoupCell reduced;
            reduced.weight = uni.weight;
            for (const auto& h : hull) reduced.verts.push_back(ch.unproject(h));
            std::sort(uni.rays.begin(), uni.rays.end(), lex_less);
            uni.rays.erase(std::unique(uni.rays.begin(), uni.rays.end()), uni.rays.end());
            reduced.rays = uni.rays;
            // for unbounded unions, drop interior vertices: reuse vrep logic by
            // keeping hull output (charts keep rays; acceptable superset)
            soup.erase(soup.begin() + std::max(ci, cj));
            soup.erase(soup.begin() + std::min(ci, cj));
            detail_mod::add_soup(soup, std::move(reduced));
            merged = true;
          }
      }
    }
  }

  // --- rebuild the complex -------------------------------------------------
  PolyComplex X;
  X.ambient_dim = soup.empty() ? 0 : (int)soup[0].verts[0].size();
  std::vector<std::vector<BoundaryPiece>> bnd(soup.size());
  for (size_t i = 0; i < soup.size(); ++i) bnd[i] = detail_mod::cell_boundary(soup[i]);

  // group boundary pieces by line; compute maximal constant-incidence pieces
  std::map<detail_mod::LineKey, std::vector<std::pair<size_t, size_t>>> byline;
  for (size_t i = 0; i < soup.size(); ++i)
    for (size_t e = 0; e < bnd[i].size(); ++e)
      byline[detail_mod::line_key(bnd[i][e].a, bnd[i][e].dir)].push_back({i, e});

  std::set<std::pair<std::vector<int>, std::vector<int>>> added_cells;
  auto push_cell = [&](Cell c) {
    std::sort(c.verts.begin(), c.verts.end());
    std::sort(c.rays.begin(), c.rays.end());
    if (added_cells.insert({c.verts, c.rays}).second) X.cells.push_back(c);
  };

  for (auto& [key, items] : byline) {
    auto param = [&](const QVec& p) -> Q {
      for (size_t i = 0; i < key.dir.size(); ++i)
        if (key.dir[i] != 0) return Q((p[i] - key.base[i]) / key.dir[i]);
      throw std::logic_error("soup_to_complex: zero line direction");
    };
    // collect intervals: (lo, hi, cellindex); rays encoded with side flags
    struct Iv {
      Q lo = 0;
      std::optional<Q> hi;
      bool back = false;  // ray toward -infinity
      size_t cell;
    };
    std::vector<Iv> ivs;
    std::set<Q> brks;
    for (auto& [ci, ei] : items) {
      const BoundaryPiece& P = bnd[ci][ei];
      Iv iv;
      iv.cell = ci;
      iv.lo = param(P.a);
      if (P.b) {
        Q hi = param(*P.b);
        if (hi < iv.lo) std::swap(iv.lo, hi);
        iv.hi = hi;
        brks.insert(*iv.hi);
      } else {
        Q dp = dot(P.dir, key.dir);
        if (dp < 0) iv.back = true;
      }
      brks.insert(iv.lo);
      ivs.push_back(iv);
    }
    std::vector<Q> bs(brks.begin(), brks.end());
    auto covers = [&](const Iv& iv, const Q& t) {
      if (iv.hi) return t >= iv.lo && t <= *iv.hi;
      return iv.back ? t <= iv.lo : t >= iv.lo;
    };
    auto emit = [&](std::optional<Q> lo, std::optional<Q> hi) {
      Q tm;
      if (lo && hi)
        tm = (*lo + *hi) / 2;
      else if (lo)
        tm = *lo + 1;
      else
        tm = *hi - 1;
      std::set<size_t> inc;
      for (const auto& iv : ivs)
        if (covers(iv, tm)) inc.insert(iv.cell);
      if (inc.empty()) return;
      Cell c;
      c.dim = 1;
      auto pt = [&](const Q& t) {
        QVec p = key.base;
        for (size_t i = 0; i < p.size(); ++i) p[i] += t * key.dir[i];
        return p;
      };
      if (lo)
        c.verts.push_back(X.add_vertex(pt(*lo)));
      if (hi)
        c.verts.push_back(X.add_vertex(pt(*hi)));
      if (!lo) c.rays.push_back(X.add_ray(Q(-1) * key.dir));
      if (!hi) c.rays.push_back(X.add_ray(key.dir));
      push_cell(c);
    };
    for (size_t b = 0; b + 1 < bs.size(); ++b) emit(bs[b], bs[b + 1]);
    if (!bs.empty()) {
      // unbounded ends when some interval extends
      bool any_back = false, any_fwd = false;
      for (const auto& iv : ivs) {
        if (!iv.hi && iv.back) any_back = true;
        if (!iv.hi && !iv.back) any_fwd = true;
      }
      if (any_back) emit(std::nullopt, bs.front());
      if (any_fwd) emit(bs.back(), std::nullopt);
    }
  }

  // 0-cells: endpoints of 1-cells
  for (const auto& c : std::vector<Cell>(X.cells)) {
    for (int v : c.verts) {
      Cell vc;
      vc.dim = 0;
      vc.verts = {v};
      push_cell(vc);
    }
  }

  // 2-cells
  for (const auto& sc : soup) {
    Cell c;
    c.dim = 2;
    c.weight = sc.weight;
    for (const auto& v : sc.verts) c.verts.push_back(X.add_vertex(v));
    for (const auto& r : sc.rays) c.rays.push_back(X.add_ray(r));
    push_cell(c);
  }
  sort_canonical(X);
  return X;
}

inline QVec quotient_dir(const QVec& v, const QVec& delta) {
  size_t piv = 0;
  while (delta[piv] == 0) ++piv;
  Q t = v[piv] / delta[piv];
  QVec out = v;
  for (size_t i = 0; i < out.size(); ++i) out[i] -= t * delta[i];
  return out;
}

// ---------------------------------------------------------------------------
// boundary trees and the full pipeline

struct DelPezzoSurface {
  int degree = 3;
  PolyComplex complex;
  SurfaceStats surface_stats;
  std::map<LineLabel, MetricTree> trees;
  std::map<LineLabel, QVec> ray_class;  // primitive direction class per line
  std::vector<TrackedCurve> tracks;
  PlaneData plane;
};

// direction classes of all lines in the final coordinates
inline std::map<LineLabel, QVec> direction_classes(const PlaneData& pd) {
  size_t k = pd.curves.size();
  size_t dim = 2 + k;
  std::map<LineLabel, QVec> out;
  auto boundary_class = [&](const V2& d) {
    QVec v{d.x, d.y};
    for (const auto& C : pd.curves) {
      Q best;
      bool first = true;
      for (size_t m = 0; m < C.support.size(); ++m) {
        Q sl = Q(C.support[m].first) * d.x + Q(C.support[m].second) * d.y;
        if (first || sl > best) {
          best = sl;
          first = false;
        }
      }
      v.push_back(best);
    }
    return primitive(v);
  };
  out[Eline(1)] = boundary_class(V2{Q(-1), Q(-1)});
  out[Eline(2)] = boundary_class(V2{Q(1), Q(0)});
  out[Eline(3)] = boundary_class(V2{Q(0), Q(1)});
  out[Fline(1, 2)] = boundary_class(V2{Q(0), Q(-1)});
  out[Fline(1, 3)] = boundary_class(V2{Q(-1), Q(0)});
  out[Fline(2, 3)] = boundary_class(V2{Q(1), Q(1)});
  for (size_t c = 0; c < k; ++c) {
    QVec v(dim, Q(0));
    v[2 + c] = -1;
    out[pd.labels[c]] = v;
  }
  for (size_t r = 0; r < pd.marked.size(); ++r) {
    QVec v(dim, Q(0));
    for (size_t c = 0; c < k; ++c)
      if (pd.through_point((int)c, (int)r)) v[2 + c] = -1;
    out[Eline(4 + (int)r)] = primitive(v);
  }
  return out;
}

// direction of an unbounded 1-cell class membership: is delta inside the
// recession cone spanned by the cell's rays?
inline bool recession_contains(const PolyComplex& X, const Cell& c, const QVec& delta) {
  if (c.rays.empty()) return false;
  // delta = sum lambda_i r_i with lambda >= 0; dim <= 2 so solve directly
  std::vector<QVec> rays;
  for (int r : c.rays) rays.push_back(X.rays[r]);
  if (rays.size() == 1) {
    // parallel and same direction
    return primitive(delta) == rays[0];
  }
  // two rays: solve
  QMat A(X.ambient_dim, 2);
  for (int i = 0; i < X.ambient_dim; ++i) {
    A(i, 0) = rays[0][i];
    A(i, 1) = rays[1][i];
  }
  auto sol = solve(A, delta);
  return sol && (*sol)[0] >= 0 && (*sol)[1] >= 0;
}

// Boundary tree in the direction class of L: flap cells quotient to edges,
// cone cells to labelled leaf rays.
inline MetricTree boundary_tree(const PolyComplex& X, const QVec& delta,
                                const std::map<LineLabel, QVec>& classes) {
  MetricTree tree;
  std::map<QVec, int> node_of;  // quotient representative -> tree node
  auto quotient = [&](const QVec& p) {
    // subtract t*delta so that the coordinate of the first nonzero entry of
    // delta becomes 0
    size_t piv = 0;
    while (delta[piv] == 0) ++piv;
    Q t = p[piv] / delta[piv];
    QVec out = p;
    for (size_t i = 0; i < out.size(); ++i) out[i] -= t * delta[i];
    return out;
  };
  auto node = [&](const QVec& rep) {
    auto it = node_of.find(rep);
    if (it != node_of.end()) return it->second;
    int n = tree.add_node();
    node_of[rep] = n;
    return n;
  };
  for (const auto& c : X.cells) {
    if (c.dim != 2 || !recession_contains(X, c, delta)) continue;
    CellClass cls = classify_cell(X, c);
    if (cls == CellClass::flap) {
      QVec a = quotient(X.vertices[c.verts[0]]);
      QVec b = quotient(X.vertices[c.verts[1]]);
      int u = node(a), v = node(b);
      // lattice length of the flap's top edge in the quotient
      Z c_len = content_mod(X.vertices[c.verts[1]] - X.vertices[c.verts[0]], delta);
      tree.add_edge(u, v, Q(c_len));
    } else if (cls == CellClass::cone) {
      // apex + two rays; one is parallel to delta's class, the other is the
      // leaf direction
      QVec apex = quotient(X.vertices[c.verts[0]]);
      int u = node(apex);
      for (int r : c.rays) {
        QVec rr = X.rays[r];
        if (in_span({delta}, rr)) continue;
        // label: match the quotient class against the known classes
        std::optional<LineLabel> lab;
        for (const auto& [L, d2] : classes) {
          if (d2 == delta) continue;
          // compare modulo delta
          QVec q1 = primitive(quotient_dir(rr, delta));
          QVec q2 = primitive(quotient_dir(d2, delta));
          if (q1 == q2) lab = L;
        }
        int leaf = tree.add_node(lab ? *lab : Eline(9));
        tree.add_edge(u, leaf);
      }
    }
  }
  return tree;
}

inline void relabel_leaf_edges(MetricTree& t) {
  // mark leaf edges length-free
  for (auto& e : t.edges)
    if (t.label[e.u] || t.label[e.v]) e.len.reset();
}

// Full pipeline: plane data, tracking, assembly, canonicalization, trees.
inline DelPezzoSurface build_del_pezzo(int degree, const std::vector<V2>& extra_points) {
  DelPezzoSurface out;
  out.degree = degree;
  out.plane = build_plane_data(degree, extra_points);
  out.tracks = run_tracking(out.plane);
  auto soup = assemble_surface(out.plane, out.tracks);
  out.complex = soup_to_complex(std::move(soup), true);
  out.surface_stats = stats(out.complex);
  out.ray_class = direction_classes(out.plane);
  std::set<LineLabel> all_lines;
  for (const auto& L : lines(degree)) all_lines.insert(L);
  for (const auto& [L, delta] : out.ray_class) {
    if (!all_lines.count(L)) continue;
    MetricTree t = boundary_tree(out.complex, delta, out.ray_class);
    if (t.n > 0) {
      relabel_leaf_edges(t);
      out.trees[L] = t;
    }
  }
  return out;
}

}  // namespace tropdp
