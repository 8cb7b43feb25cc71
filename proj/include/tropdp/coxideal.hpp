#pragma once

// Universal Cox ideals of del Pezzo surfaces of degree 5, 4, 3 as explicit
// trinomial systems: the Plucker relations, the 45 degree-4 generators, and
// the 270 degree-3 generators (a seed group of 10 expanded by W(E6)).
// Coefficients stay formal products of signed roots; nothing is expanded.

#include <algorithm>
#include <array>
#include <cassert>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "rootsys.hpp"

namespace tropdp {

// A variable of a Cox ring: a Plucker coordinate p_ij or a line variable.
struct CoxVar {
  bool is_plucker = false;
  int pi = 0, pj = 0;  // Plucker indices (1-based, i<j)
  LineLabel line{LineKind::E, 0, 0};

  friend bool operator==(const CoxVar&, const CoxVar&) = default;
  friend auto operator<=>(const CoxVar&, const CoxVar&) = default;

  std::string str() const {
    if (is_plucker) return "p" + std::to_string(pi) + std::to_string(pj);
    return line.str();
  }
};

inline CoxVar pvar(int i, int j) {
  if (i > j) std::swap(i, j);
  CoxVar v;
  v.is_plucker = true;
  v.pi = i;
  v.pj = j;
  return v;
}
inline CoxVar lvar(const LineLabel& L) {
  CoxVar v;
  v.line = L;
  return v;
}

using Monomial = std::map<CoxVar, int>;

struct CoxTerm {
  int sign = 1;
  std::vector<RootVector> coeff;  // product of root linear forms (6-vectors)
  Monomial mono;

  friend bool operator==(const CoxTerm&, const CoxTerm&) = default;
};

struct Trinomial {
  std::array<CoxTerm, 3> terms;

  friend bool operator==(const Trinomial&, const Trinomial&) = default;

  std::string str() const {
    std::ostringstream os;
    for (size_t t = 0; t < 3; ++t) {
      const CoxTerm& T = terms[t];
      if (t == 0)
        os << (T.sign < 0 ? "-" : "");
      else
        os << (T.sign < 0 ? " - " : " + ");
      for (const auto& r : T.coeff) os << "(" << root_str(r) << ")";
      bool first = true;
      for (const auto& [v, e] : T.mono) {
        if (!first) os << "*";
        os << v.str();
        if (e > 1) os << "^" << e;
        first = false;
      }
      if (T.mono.empty() && T.coeff.empty()) os << "1";
    }
    return os.str();
  }
};

// canonical ordering key for dedup / printing
inline bool term_less(const CoxTerm& a, const CoxTerm& b) {
  if (a.mono != b.mono) return a.mono < b.mono;
  return a.coeff < b.coeff;
}

// Sorts terms and flips the overall sign so the lexicographically smallest
// monomial carries +; coefficient roots are sorted too.
inline Trinomial canonicalize(Trinomial t) {
  for (auto& T : t.terms) std::sort(T.coeff.begin(), T.coeff.end());
  std::sort(t.terms.begin(), t.terms.end(), term_less);
  if (t.terms[0].sign < 0)
    for (auto& T : t.terms) T.sign = -T.sign;
  return t;
}

inline bool operator<(const Trinomial& a, const Trinomial& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.terms[i].mono != b.terms[i].mono) return a.terms[i].mono < b.terms[i].mono;
    if (a.terms[i].coeff != b.terms[i].coeff) return a.terms[i].coeff < b.terms[i].coeff;
    if (a.terms[i].sign != b.terms[i].sign) return a.terms[i].sign < b.terms[i].sign;
  }
  return false;
}

// ---------------------------------------------------------------------------
// parsing of printed trinomials ("(d3-d4)(d1+d3+d4)E2F12 - ... + ...")

inline Trinomial parse_trinomial(const std::string& s) {
  std::vector<CoxTerm> terms;
  CoxTerm cur;
  int pending_sign = 1;
  size_t p = 0;
  auto flush = [&]() {
    if (!cur.coeff.empty() || !cur.mono.empty()) {
      terms.push_back(cur);
      cur = CoxTerm{};
    }
  };
  while (p < s.size()) {
    char c = s[p];
    if (isspace(c) || c == '*') {
      ++p;
    } else if (c == '+' || c == '-') {
      flush();
      pending_sign = (c == '-') ? -1 : 1;
      ++p;
    } else if (c == '(') {
      size_t q = s.find(')', p);
      if (q == std::string::npos) throw std::invalid_argument("unbalanced parenthesis: " + s);
      cur.sign = pending_sign;
      cur.coeff.push_back(parse_root(s.substr(p + 1, q - p - 1), 6));
      p = q + 1;
    } else if (c == 'p') {
      if (p + 2 >= s.size() || !isdigit(s[p + 1]) || !isdigit(s[p + 2]))
        throw std::invalid_argument("bad plucker variable: " + s);
      cur.sign = pending_sign;
      cur.mono[pvar(s[p + 1] - '0', s[p + 2] - '0')] += 1;
      p += 3;
    } else if (c == 'E' || c == 'F' || c == 'G') {
      size_t len = 1;
      while (p + len < s.size() && isdigit(s[p + len])) ++len;
      auto L = parse_line(s.substr(p, len));
      if (!L) throw std::invalid_argument("bad line variable: " + s);
      cur.sign = pending_sign;
      cur.mono[lvar(*L)] += 1;
      p += len;
    } else {
      throw std::invalid_argument("unexpected character in trinomial: " + s);
    }
  }
  flush();
  if (terms.size() != 3) throw std::invalid_argument("not a trinomial: " + s);
  return Trinomial{{terms[0], terms[1], terms[2]}};
}

// ---------------------------------------------------------------------------
// the printed generator systems

// The five Plucker relations of M_{0,5}.
inline std::vector<Trinomial> plucker_d5() {
  static const char* rel[] = {
      "p12p34 - p13p24 + p14p23", "p12p35 - p13p25 + p15p23",
      "p12p45 - p14p25 + p15p24", "p13p45 - p14p35 + p15p34",
      "p23p45 - p24p35 + p25p34"};
  std::vector<Trinomial> out;
  for (const char* r : rel) out.push_back(parse_trinomial(r));
  return out;
}

// The 45 trinomials of the universal degree-4 Cox ideal, grouped
// Base, 1..5, 1'..5' exactly as printed.
inline std::vector<std::pair<std::string, std::vector<Trinomial>>> universal_cox_d4() {
  std::vector<std::pair<std::string, std::vector<Trinomial>>> groups;
  groups.push_back({"Base", plucker_d5()});

  auto grp = [&](const std::string& name, std::initializer_list<const char*> rels) {
    std::vector<Trinomial> v;
    for (const char* r : rels) v.push_back(parse_trinomial(r));
    groups.push_back({name, v});
  };

  grp("1", {"F23F45 - F24F35 + F25F34",
            "p23p45F24F35 - p24p35F23F45 - GE1",
            "p23p45F25F34 - p25p34F23F45 - GE1",
            "p24p35F25F34 - p25p34F24F35 - GE1"});
  grp("2", {"F13F45 - F14F35 + F15F34",
            "p13p45F14F35 - p14p35F13F45 - GE2",
            "p13p45F15F34 - p15p34F13F45 - GE2",
            "p14p35F15F34 - p15p34F14F35 - GE2"});
  grp("3", {"F12F45 - F14F25 + F15F24",
            "p12p45F14F25 - p14p25F12F45 - GE3",
            "p12p45F15F24 - p15p24F12F45 - GE3",
            "p14p25F15F24 - p15p24F14F25 - GE3"});
  grp("4", {"F12F35 - F13F25 + F15F23",
            "p12p35F13F25 - p13p25F12F35 - GE4",
            "p12p35F15F23 - p15p23F12F35 - GE4",
            "p13p25F15F23 - p15p23F13F25 - GE4"});
  grp("5", {"F12F34 - F13F24 + F14F23",
            "p12p34F13F24 - p13p24F12F34 - GE5",
            "p12p34F14F23 - p14p23F12F34 - GE5",
            "p13p24F14F23 - p14p23F13F24 - GE5"});
  grp("1'", {"p25F12E2 - p35F13E3 + p45F14E4",
             "p24F12E2 - p34F13E3 + p45F15E5",
             "p23F12E2 - p34F14E4 + p35F15E5",
             "p23F13E3 - p24F14E4 + p25F15E5"});
  grp("2'", {"p15F12E1 - p35F23E3 + p45F24E4",
             "p14F12E1 - p34F23E3 + p45F25E5",
             "p13F12E1 - p34F24E4 + p35F25E5",
             "p13F23E3 - p14F24E4 + p15F25E5"});
  grp("3'", {"p15F13E1 - p25F23E2 + p45F34E4",
             "p14F13E1 - p24F23E2 + p45F35E5",
             "p12F13E1 - p24F34E4 + p25F35E5",
             "p12F23E2 - p14F34E4 + p15F35E5"});
  grp("4'", {"p15F14E1 - p25F24E2 + p35F34E3",
             "p13F14E1 - p23F24E2 + p35F45E5",
             "p12F14E1 - p23F34E3 + p25F45E5",
             "p12F24E2 - p13F34E3 + p15F45E5"});
  grp("5'", {"p14F15E1 - p24F25E2 + p34F35E3",
             "p13F15E1 - p23F25E2 + p34F45E4",
             "p12F15E1 - p23F35E3 + p24F45E4",
             "p12F25E2 - p13F35E3 + p14F45E4"});
  return groups;
}

// The ten printed generators attached to the line G1.
inline std::vector<Trinomial> cox_d3_seed() {
  static const char* rel[] = {
      "(d3-d4)(d1+d3+d4)E2F12 - (d2-d4)(d1+d2+d4)E3F13 + (d2-d3)(d1+d2+d3)E4F14",
      "(d3-d5)(d1+d3+d5)E2F12 - (d2-d5)(d1+d2+d5)E3F13 + (d2-d3)(d1+d2+d3)E5F15",
      "(d3-d6)(d1+d3+d6)E2F12 - (d2-d6)(d1+d2+d6)E3F13 + (d2-d3)(d1+d2+d3)E6F16",
      "(d4-d5)(d1+d4+d5)E2F12 - (d2-d5)(d1+d2+d5)E4F14 + (d2-d4)(d1+d2+d4)E5F15",
      "(d4-d6)(d1+d4+d6)E2F12 - (d2-d6)(d1+d2+d6)E4F14 + (d2-d4)(d1+d2+d4)E6F16",
      "(d5-d6)(d1+d5+d6)E2F12 - (d2-d6)(d1+d2+d6)E5F15 + (d2-d5)(d1+d2+d5)E6F16",
      "(d4-d5)(d1+d4+d5)E3F13 - (d3-d5)(d1+d3+d5)E4F14 + (d3-d4)(d1+d3+d4)E5F15",
      "(d4-d6)(d1+d4+d6)E3F13 - (d3-d6)(d1+d3+d6)E4F14 + (d3-d4)(d1+d3+d4)E6F16",
      "(d5-d6)(d1+d5+d6)E3F13 - (d3-d6)(d1+d3+d6)E5F15 + (d3-d5)(d1+d3+d5)E6F16",
      "(d5-d6)(d1+d5+d6)E4F14 - (d4-d6)(d1+d4+d6)E5F15 + (d4-d5)(d1+d4+d5)E6F16"};
  std::vector<Trinomial> out;
  for (const char* r : rel) out.push_back(parse_trinomial(r));
  return out;
}

// ---------------------------------------------------------------------------
// gradings

// Z^5 for d=5 (deg p_ij = e_i + e_j), the demicube Z^6 for d=4, and the
// Picard Z^7 basis (l, e_1..e_6) for d=3; coefficients have degree 0.
inline std::vector<int> grade(const CoxVar& v, int degree) {
  if (degree == 5) {
    if (!v.is_plucker) throw std::domain_error("grade: degree-5 context has only p variables");
    std::vector<int> g(5, 0);
    g[v.pi - 1] = 1;
    g[v.pj - 1] = 1;
    return g;
  }
  if (degree == 4) {
    if (v.is_plucker) return std::vector<int>(6, 0);
    std::vector<int> g(6, 0);
    g[0] = 1;
    switch (v.line.kind) {
      case LineKind::E:
        g[v.line.i] = 1;
        break;
      case LineKind::F:
        for (int k = 1; k <= 5; ++k)
          if (k != v.line.i && k != v.line.j) g[k] = 1;
        break;
      case LineKind::G:
        for (int k = 1; k <= 5; ++k) g[k] = 1;
        break;
    }
    return g;
  }
  if (degree == 3) {
    if (v.is_plucker) throw std::domain_error("grade: degree-3 context has no p variables");
    std::vector<int> g(7, 0);
    switch (v.line.kind) {
      case LineKind::E:
        g[v.line.i] = 1;
        break;
      case LineKind::F:
        g[0] = 1;
        g[v.line.i] = -1;
        g[v.line.j] = -1;
        break;
      case LineKind::G:
        g[0] = 2;
        for (int k = 1; k <= 6; ++k)
          if (k != v.line.i) g[k] = -1;
        break;
    }
    return g;
  }
  throw std::invalid_argument("grade: degree must be 3, 4 or 5");
}

inline std::vector<int> term_degree(const CoxTerm& t, int degree) {
  std::vector<int> g(degree == 5 ? 5 : (degree == 4 ? 6 : 7), 0);
  for (const auto& [v, e] : t.mono) {
    auto gv = grade(v, degree);
    for (size_t k = 0; k < g.size(); ++k) g[k] += e * gv[k];
  }
  return g;
}

inline bool homogeneous(const Trinomial& t, int degree) {
  auto g0 = term_degree(t.terms[0], degree);
  return term_degree(t.terms[1], degree) == g0 && term_degree(t.terms[2], degree) == g0;
}

// ---------------------------------------------------------------------------
// W(E6) action and the 270 generators

// One Weyl generator acting on a trinomial: reflect coefficient roots
// (renormalizing to positive roots, with the sign going into the term) and
// transport line variables through the E7 reflection.
inline Trinomial apply_weyl(const RootVector& simple6, const Trinomial& t) {
  static const auto pos6 = [] {
    auto v = roots(6);
    std::sort(v.begin(), v.end());
    return v;
  }();
  RootVector s7(7, 0);
  for (int i = 0; i < 6; ++i) s7[i] = simple6[i];

  Trinomial out = t;
  for (auto& T : out.terms) {
    for (auto& r : T.coeff) {
      RootVector im = reflect(simple6, r);
      if (!std::binary_search(pos6.begin(), pos6.end(), im)) {
        // store the positive form; the linear form changed sign
        bool neg = false;
        for (const auto& p : pos6)
          if (root_neg(im) == p) neg = true;
        if (!neg) throw std::logic_error("apply_weyl: image is not a signed root");
        im = root_neg(im);
        T.sign = -T.sign;
      }
      r = im;
    }
    Monomial m2;
    for (const auto& [v, e] : T.mono) {
      if (v.is_plucker) throw std::domain_error("apply_weyl: degree-3 context expected");
      LineLabel L2 = line_of_root(reflect(s7, root_of_line(v.line)));
      m2[lvar(L2)] += e;
    }
    T.mono = std::move(m2);
  }
  return canonicalize(out);
}

// Full degree-3 system: the W(E6) orbit of the seed group, as 27 groups of
// 10 keyed by the line whose Z^7 degree matches the group degree.
struct CoxSystemD3 {
  std::vector<Trinomial> all;                       // 270, canonically sorted
  std::map<LineLabel, std::vector<Trinomial>> groups;  // 27 x 10
};

inline LineLabel group_line_of_degree(const std::vector<int>& deg) {
  // group degree = -K - deg(L) with -K = (3, -1, ..., -1) in basis (l, e_i);
  // recover deg(L) and match it against the 27 lines
  std::vector<int> want(7);
  want[0] = 3 - deg[0];
  for (int k = 1; k <= 6; ++k) want[k] = -1 - deg[k];
  for (const auto& L : lines(3))
    if (grade(lvar(L), 3) == want) return L;
  throw std::logic_error("group_line_of_degree: degree does not match any line");
}

inline CoxSystemD3 universal_cox_d3() {
  auto seed = cox_d3_seed();
  std::set<Trinomial> all;
  std::vector<Trinomial> frontier;
  for (auto& t : seed) {
    auto c = canonicalize(t);
    if (all.insert(c).second) frontier.push_back(c);
  }
  auto simples = simple_roots(6);
  while (!frontier.empty()) {
    std::vector<Trinomial> next;
    for (const auto& t : frontier)
      for (const auto& s : simples) {
        Trinomial im = apply_weyl(s, t);
        if (all.insert(im).second) next.push_back(im);
      }
    frontier = std::move(next);
  }
  CoxSystemD3 sys;
  sys.all.assign(all.begin(), all.end());
  if (sys.all.size() != 270)
    throw std::logic_error("universal_cox_d3: orbit size " + std::to_string(sys.all.size()) +
                           " instead of 270");
  for (const auto& t : sys.all) {
    if (!homogeneous(t, 3)) throw std::logic_error("universal_cox_d3: inhomogeneous generator");
    sys.groups[group_line_of_degree(term_degree(t.terms[0], 3))].push_back(t);
  }
  if (sys.groups.size() != 27) throw std::logic_error("universal_cox_d3: expected 27 groups");
  for (auto& [L, g] : sys.groups)
    if (g.size() != 10) throw std::logic_error("universal_cox_d3: group of " + L.str() +
                                               " has size " + std::to_string(g.size()));
  return sys;
}

// ---------------------------------------------------------------------------
// tritangent involution

// The 45 tritangent triples: {E_i, G_j, F_ij} for i != j and
// {F_ij, F_kl, F_mn} for perfect matchings of {1..6}.
inline std::vector<std::array<LineLabel, 3>> tritangents() {
  std::vector<std::array<LineLabel, 3>> out;
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) {
      out.push_back({Eline(i), Gline(j), Fline(i, j)});
      out.push_back({Eline(j), Gline(i), Fline(i, j)});
    }
  // perfect matchings of {1..6}: 15 of them
  for (int a = 2; a <= 6; ++a) {
    std::vector<int> others;
    for (int x = 2; x <= 6; ++x)
      if (x != a) others.push_back(x);
    // pair {1,a}; match the remaining four in 3 ways
    static const int pairing[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (auto& pr : pairing)
      out.push_back({Fline(1, a), Fline(others[pr[0]], others[pr[1]]),
                     Fline(others[pr[2]], others[pr[3]])});
  }
  return out;
}

// Pairing of the ten neighbors of L given by the tritangent planes through L.
inline std::vector<std::pair<LineLabel, LineLabel>> line_involution(const LineLabel& L) {
  std::vector<std::pair<LineLabel, LineLabel>> pairs;
  for (const auto& t : tritangents()) {
    for (int k = 0; k < 3; ++k)
      if (t[k] == L) pairs.push_back({t[(k + 1) % 3], t[(k + 2) % 3]});
  }
  if (pairs.size() != 5) throw std::logic_error("line_involution: expected 5 tritangents through " + L.str());
  for (auto& [a, b] : pairs)
    if (b < a) std::swap(a, b);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

// ---------------------------------------------------------------------------
// tropical evaluation

// min over the three term valuations attained at least twice; the valuation
// of a term is sum of coefficient-root valuations plus <exponents, w>.
inline bool trop_eval(const Trinomial& t,
                      const std::function<Q(const CoxVar&)>& w,
                      const std::function<Q(const RootVector&)>& dval) {
  std::array<Q, 3> val;
  for (int k = 0; k < 3; ++k) {
    Q s = 0;
    for (const auto& r : t.terms[k].coeff) s += dval(r);
    for (const auto& [v, e] : t.terms[k].mono) s += e * w(v);
    val[k] = s;
  }
  Q mn = std::min({val[0], val[1], val[2]});
  int hits = 0;
  for (const auto& v : val)
    if (v == mn) ++hits;
  return hits >= 2;
}

inline Q trivial_dval(const RootVector&) { return Q(0); }

}  // namespace tropdp
