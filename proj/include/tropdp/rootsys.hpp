#pragma once

// Root systems E6 and E7 in the d-coordinates, the root <-> line dictionary
// for the 27 lines on a cubic surface, Weyl reflections and orbit machinery,
// and the Schlafli / Clebsch / Petersen intersection graphs.
//
// Roots are integer vectors in coordinates d_1..d_m with the W-invariant
// form B(u,v) = u.v - (sum u)(sum v)/9; every listed root has B(r,r) = 2.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "smallgraph.hpp"

namespace tropdp {

using RootVector = std::vector<int>;  // length m = 6 or 7

inline Q root_inner(const RootVector& u, const RootVector& v) {
  long d = 0, su = 0, sv = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    d += long(u[i]) * v[i];
    su += u[i];
    sv += v[i];
  }
  Q q(9 * d - su * sv, 9);
  q.canonicalize();
  return q;
}

inline RootVector root_neg(const RootVector& r) {
  RootVector s(r.size());
  for (size_t i = 0; i < r.size(); ++i) s[i] = -r[i];
  return s;
}

// Positive roots of E_m per the three shapes d_i-d_j, d_i+d_j+d_k and the
// six-term sums, in that order, each family ordered lexicographically by
// index tuple. This order is the canonical ground-set order everywhere.
inline std::vector<RootVector> roots(int m) {
  if (m != 6 && m != 7) throw std::invalid_argument("roots: m must be 6 or 7");
  std::vector<RootVector> out;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      RootVector r(m, 0);
      r[i] = 1;
      r[j] = -1;
      out.push_back(r);
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        RootVector r(m, 0);
        r[i] = r[j] = r[k] = 1;
        out.push_back(r);
      }
  // six-element sums
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  if (m == 6) {
    out.push_back(RootVector(6, 1));
  } else {
    for (int skip = m - 1; skip >= 0; --skip) {
      RootVector r(m, 1);
      r[skip] = 0;
      // lexicographic by index set: {1..6} < {1..5,7} < ... corresponds to
      // skipping 7 first; generate in increasing lex of the chosen 6-set.
      out.push_back(r);
    }
    // fix ordering: chosen sets ascending lex = skip descending, handled above
  }
  return out;
}

inline bool is_root(const RootVector& v, const std::vector<RootVector>& pos) {
  for (const auto& r : pos)
    if (r == v || root_neg(r) == v) return true;
  return false;
}

// Reflection s_r(v) = v - 2 B(v,r)/B(r,r) r, exact; throws on non-integral
// output (inputs outside the root lattice).
inline RootVector reflect(const RootVector& r, const RootVector& v) {
  Q c = root_inner(v, r);  // B(r,r) = 2, so the coefficient is just B(v,r)
  if (c.get_den() != 1) throw std::domain_error("reflect: vector outside the root lattice");
  long ci = c.get_num().get_si();
  RootVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] - int(ci) * r[i];
  return out;
}

// Simple system: d_i - d_{i+1} for i = 1..m-1, plus d_1+d_2+d_3.
inline std::vector<RootVector> simple_roots(int m) {
  std::vector<RootVector> s;
  for (int i = 0; i + 1 < m; ++i) {
    RootVector r(m, 0);
    r[i] = 1;
    r[i + 1] = -1;
    s.push_back(r);
  }
  RootVector t(m, 0);
  t[0] = t[1] = t[2] = 1;
  s.push_back(t);
  return s;
}

// ---------------------------------------------------------------------------
// signed permutations: how a Weyl element acts on the list of positive roots

struct SignedPerm {
  std::vector<int> image;  // image[i] = index of |w(r_i)| in the positive list
  std::vector<int> sign;   // +1 / -1

  std::vector<int> perm() const { return image; }
};

inline SignedPerm root_action(const RootVector& reflecting_root,
                              const std::vector<RootVector>& pos) {
  SignedPerm p;
  p.image.resize(pos.size());
  p.sign.resize(pos.size());
  std::map<RootVector, int> index;
  for (size_t i = 0; i < pos.size(); ++i) index[pos[i]] = (int)i;
  for (size_t i = 0; i < pos.size(); ++i) {
    RootVector im = reflect(reflecting_root, pos[i]);
    auto it = index.find(im);
    if (it != index.end()) {
      p.image[i] = it->second;
      p.sign[i] = 1;
    } else {
      it = index.find(root_neg(im));
      if (it == index.end()) throw std::logic_error("reflection does not preserve the root set");
      p.image[i] = it->second;
      p.sign[i] = -1;
    }
  }
  return p;
}

// Generators of W(E_m) as signed permutations of the positive roots.
inline std::vector<SignedPerm> weyl_generators(int m) {
  auto pos = roots(m);
  std::vector<SignedPerm> gens;
  for (const auto& s : simple_roots(m)) gens.push_back(root_action(s, pos));
  return gens;
}

// Orbit closure of a seed under a group action, deduplicated by canonical
// form; returns the orbit sorted. Throws if the orbit exceeds cap.
template <typename T, typename Act>
std::vector<T> weyl_orbit(const std::vector<Act>& gens, const T& seed,
                          const std::function<T(const Act&, const T&)>& apply,
                          size_t cap = 50'000'000) {
  std::set<T> seen;
  std::vector<T> frontier{seed};
  seen.insert(seed);
  while (!frontier.empty()) {
    std::vector<T> next;
    for (const T& x : frontier)
      for (const Act& g : gens) {
        T y = apply(g, x);
        if (seen.insert(y).second) {
          if (seen.size() > cap) throw std::length_error("weyl_orbit: orbit exceeds cap");
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return std::vector<T>(seen.begin(), seen.end());
}

// ---------------------------------------------------------------------------
// lines on del Pezzo surfaces

enum class LineKind { E, F, G };

struct LineLabel {
  LineKind kind;
  int i = 0, j = 0;  // E_i: (i,0); F_ij: i<j; G_j: (j,0); degree-4 G: (0,0)

  friend bool operator==(const LineLabel&, const LineLabel&) = default;
  friend auto operator<=>(const LineLabel&, const LineLabel&) = default;

  std::string str() const {
    std::ostringstream os;
    switch (kind) {
      case LineKind::E: os << "E" << i; break;
      case LineKind::F: os << "F" << i << j; break;
      case LineKind::G:
        os << "G";
        if (i > 0) os << i;
        break;
    }
    return os.str();
  }
};

inline LineLabel Eline(int i) { return {LineKind::E, i, 0}; }
inline LineLabel Fline(int i, int j) {
  if (i > j) std::swap(i, j);
  return {LineKind::F, i, j};
}
inline LineLabel Gline(int j = 0) { return {LineKind::G, j, 0}; }

inline std::optional<LineLabel> parse_line(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s[0] == 'E' && s.size() == 2 && isdigit(s[1])) return Eline(s[1] - '0');
  if (s[0] == 'F' && s.size() == 3 && isdigit(s[1]) && isdigit(s[2]))
    return Fline(s[1] - '0', s[2] - '0');
  if (s[0] == 'G' && s.size() == 1) return Gline();
  if (s[0] == 'G' && s.size() == 2 && isdigit(s[1])) return Gline(s[1] - '0');
  return std::nullopt;
}

// All lines for a given degree, canonically ordered (E's, F's, G's).
inline std::vector<LineLabel> lines(int degree) {
  int npts = 9 - degree;  // 4, 5 or 6 blown-up points
  if (degree < 3 || degree > 5) throw std::invalid_argument("lines: degree must be 3, 4 or 5");
  std::vector<LineLabel> out;
  for (int i = 1; i <= npts; ++i) out.push_back(Eline(i));
  for (int i = 1; i <= npts; ++i)
    for (int j = i + 1; j <= npts; ++j) out.push_back(Fline(i, j));
  if (degree == 4) out.push_back(Gline());
  if (degree == 3)
    for (int j = 1; j <= 6; ++j) out.push_back(Gline(j));
  return out;
}

// E_i <-> d_i - d_7, F_ij <-> d_i + d_j + d_7, G_j <-> (sum d_i) - d_j.
inline RootVector root_of_line(const LineLabel& L) {
  RootVector r(7, 0);
  switch (L.kind) {
    case LineKind::E:
      r[L.i - 1] = 1;
      r[6] = -1;
      break;
    case LineKind::F:
      r[L.i - 1] = 1;
      r[L.j - 1] = 1;
      r[6] = 1;
      break;
    case LineKind::G:
      for (int k = 0; k < 7; ++k) r[k] = 1;
      if (L.i < 1 || L.i > 6) throw std::domain_error("root_of_line: G needs an index in degree 3");
      r[L.i - 1] -= 1;
      break;
  }
  return r;
}

inline LineLabel line_of_root(const RootVector& r_in) {
  if (r_in.size() != 7) throw std::domain_error("line_of_root: expected an E7 vector");
  RootVector r = r_in;
  if (r[6] == 0) throw std::domain_error("line_of_root: root does not involve d7");
  // normalize sign so that the shape matches one of the printed forms
  auto try_match = [](const RootVector& v) -> std::optional<LineLabel> {
    int npos = 0, nneg = 0, sum = 0;
    for (int x : v) {
      if (x > 0) ++npos;
      if (x < 0) ++nneg;
      sum += x;
    }
    if (npos == 1 && nneg == 1 && v[6] == -1) {
      for (int i = 0; i < 6; ++i)
        if (v[i] == 1) return Eline(i + 1);
    }
    if (npos == 3 && nneg == 0 && v[6] == 1) {
      std::vector<int> idx;
      for (int i = 0; i < 6; ++i)
        if (v[i] == 1) idx.push_back(i + 1);
      if (idx.size() == 2) return Fline(idx[0], idx[1]);
    }
    if (npos == 6 && nneg == 0 && v[6] == 1) {
      for (int i = 0; i < 6; ++i)
        if (v[i] == 0) return Gline(i + 1);
    }
    return std::nullopt;
  };
  if (auto L = try_match(r)) return *L;
  if (auto L = try_match(root_neg(r))) return *L;
  throw std::domain_error("line_of_root: not a line root");
}

// Two distinct (-1)-curves meet iff their roots pair to 0 under B.
inline bool lines_meet_d3(const LineLabel& a, const LineLabel& b) {
  if (a == b) return false;
  return root_inner(root_of_line(a), root_of_line(b)) == 0;
}

// Intersection graph of the lines for degree 3, 4 or 5 (Schlafli / Clebsch /
// Petersen). Combinatorial rules, independent of the root realization;
// agreement with the root pairing is a test.
inline SmallGraph intersection_graph(int degree, std::vector<LineLabel>* labels_out = nullptr) {
  auto ls = lines(degree);
  if (labels_out) *labels_out = ls;
  auto meets = [&](const LineLabel& a, const LineLabel& b) -> bool {
    if (a.kind == LineKind::E && b.kind == LineKind::F) return a.i == b.i || a.i == b.j;
    if (a.kind == LineKind::E && b.kind == LineKind::G)
      return degree == 4 ? true : a.i != b.i;
    if (a.kind == LineKind::F && b.kind == LineKind::F)
      return a.i != b.i && a.i != b.j && a.j != b.i && a.j != b.j;
    if (a.kind == LineKind::F && b.kind == LineKind::G)
      return degree == 4 ? false : (b.i == a.i || b.i == a.j);
    if (a.kind == LineKind::G && b.kind == LineKind::G) return false;
    if (a.kind == LineKind::E && b.kind == LineKind::E) return false;
    return false;
  };
  SmallGraph g((int)ls.size());
  for (size_t x = 0; x < ls.size(); ++x)
    for (size_t y = x + 1; y < ls.size(); ++y) {
      const LineLabel *a = &ls[x], *b = &ls[y];
      if (int(a->kind) > int(b->kind)) std::swap(a, b);
      if (meets(*a, *b)) g.add_edge((int)x, (int)y);
    }
  return g;
}

inline std::vector<LineLabel> line_neighbors(int degree, const LineLabel& L) {
  std::vector<LineLabel> ls;
  SmallGraph g = intersection_graph(degree, &ls);
  size_t idx = std::find(ls.begin(), ls.end(), L) - ls.begin();
  if (idx == ls.size()) throw std::domain_error("line_neighbors: unknown line " + L.str());
  std::vector<LineLabel> out;
  for (size_t y = 0; y < ls.size(); ++y)
    if (g.has_edge((int)idx, (int)y)) out.push_back(ls[y]);
  return out;
}

// ---------------------------------------------------------------------------
// double sixes and A2 x A2 x A2 subsystems (degree 3)

// For a positive root r of E6 (given as a 7-vector with d7-entry 0, or a
// 6-vector), the 12 lines not orthogonal to r, paired into the six A2-pairs.
inline std::vector<std::pair<LineLabel, LineLabel>> double_six(const RootVector& r6) {
  RootVector r(7, 0);
  if (r6.size() == 6)
    for (int i = 0; i < 6; ++i) r[i] = r6[i];
  else
    r = r6;
  if (r[6] != 0 || !is_root(r, roots(7))) throw std::domain_error("double_six: not an E6 root");

  std::vector<std::pair<LineLabel, LineLabel>> pairs;
  std::set<LineLabel> used;
  for (const LineLabel& L : lines(3)) {
    if (used.count(L)) continue;
    RootVector a = root_of_line(L);
    Q c = root_inner(r, a);
    if (c == 0) continue;
    // partner root: r - a when B(r,a) = 1, r + a when B(r,a) = -1
    RootVector b(7);
    for (int k = 0; k < 7; ++k) b[k] = (c == 1) ? r[k] - a[k] : r[k] + a[k];
    LineLabel M = line_of_root(b);
    used.insert(L);
    used.insert(M);
    pairs.emplace_back(L, M);
  }
  if (pairs.size() != 6) throw std::logic_error("double_six: expected 6 pairs");
  return pairs;
}

// Positive-root triples {x, y, x+y} spanning A2 subsystems of E6.
inline std::vector<std::array<RootVector, 3>> a2_triples_e6() {
  auto pos = roots(6);
  std::set<RootVector> posset(pos.begin(), pos.end());
  std::vector<std::array<RootVector, 3>> out;
  for (size_t i = 0; i < pos.size(); ++i)
    for (size_t j = i + 1; j < pos.size(); ++j) {
      RootVector s(6);
      for (int k = 0; k < 6; ++k) s[k] = pos[i][k] + pos[j][k];
      if (posset.count(s)) {
        std::array<RootVector, 3> t{pos[i], pos[j], s};
        std::sort(t.begin(), t.end());
        out.push_back(t);
      }
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The 40 triples of pairwise orthogonal A2 subsystems.
inline std::vector<std::array<std::array<RootVector, 3>, 3>> a2_cubed_systems() {
  auto triples = a2_triples_e6();
  auto orth = [&](const std::array<RootVector, 3>& a, const std::array<RootVector, 3>& b) {
    for (const auto& x : a)
      for (const auto& y : b)
        if (root_inner(x, y) != 0) return false;
    return true;
  };
  std::vector<std::array<std::array<RootVector, 3>, 3>> out;
  for (size_t i = 0; i < triples.size(); ++i)
    for (size_t j = i + 1; j < triples.size(); ++j) {
      if (!orth(triples[i], triples[j])) continue;
      for (size_t k = j + 1; k < triples.size(); ++k) {
        if (orth(triples[i], triples[k]) && orth(triples[j], triples[k]))
          out.push_back({triples[i], triples[j], triples[k]});
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// string forms ("d1-d3", "d1+d3+d5", "d1+d2+d3+d4+d5+d6")

inline std::string root_str(const RootVector& r) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    if (r[i] > 0 && !first) os << "+";
    if (r[i] < 0) os << "-";
    os << "d" << (i + 1);
    first = false;
  }
  return first ? "0" : os.str();
}

inline RootVector parse_root(const std::string& s, int m) {
  RootVector r(m, 0);
  int sign = 1;
  size_t p = 0;
  while (p < s.size()) {
    char c = s[p];
    if (c == '+') {
      sign = 1;
      ++p;
    } else if (c == '-') {
      sign = -1;
      ++p;
    } else if (c == 'd') {
      ++p;
      if (p >= s.size() || !isdigit(s[p])) throw std::invalid_argument("bad root: " + s);
      int idx = s[p] - '0';
      if (idx < 1 || idx > m) throw std::invalid_argument("root index out of range: " + s);
      r[idx - 1] += sign;
      sign = 1;
      ++p;
    } else if (isspace(c)) {
      ++p;
    } else {
      throw std::invalid_argument("bad root: " + s);
    }
  }
  return r;
}

}  // namespace tropdp
