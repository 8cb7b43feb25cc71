#pragma once

// Vector matroids: circuits, Bergman-fan membership, flats, and the
// incremental orbit enumeration of Bergman cones (rays are indicator
// vectors of connected proper flats; cones are detected by testing whether
// the sum of their ray vectors satisfies the circuit condition).
//
// Ground sets here have at most 63 elements, so subsets are uint64_t masks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "rootsys.hpp"

namespace tropdp {

using Mask = uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }

inline std::vector<int> mask_elems(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(__builtin_ctzll(m));
    m &= m - 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// exact rank of integer vector families (fraction-free elimination)

struct IntRanker {
  std::vector<std::vector<long>> vecs;
  size_t dim;

  explicit IntRanker(const std::vector<std::vector<long>>& v)
      : vecs(v), dim(v.empty() ? 0 : v[0].size()) {}

  int rank_of(Mask subset) const {
    // Fraction-free elimination over long; entries here are root coordinates
    // (|x| <= 1) or similar, so intermediate minors stay far below overflow.
    std::vector<std::vector<long>> rows;
    for (int e : mask_elems(subset)) rows.push_back(vecs[e]);
    return eliminate(rows);
  }

  // true iff v lies in the span of the subset
  bool in_span_of(Mask subset, int v) const {
    int r = rank_of(subset);
    return rank_of(subset | (Mask(1) << v)) == r;
  }

  Mask closure(Mask subset) const {
    Mask out = subset;
    int r = rank_of(subset);
    for (size_t v = 0; v < vecs.size(); ++v) {
      Mask bit = Mask(1) << v;
      if (out & bit) continue;
      if (rank_of(subset | bit) == r) out |= bit;
    }
    return out;
  }

 private:
  static int eliminate(std::vector<std::vector<long>>& rows) {
    if (rows.empty()) return 0;
    size_t cols = rows[0].size();
    int rank = 0;
    long prev = 1;  // Bareiss: exact division keeps entries at minor size
    for (size_t c = 0; c < cols && (size_t)rank < rows.size(); ++c) {
      size_t piv = rank;
      while (piv < rows.size() && rows[piv][c] == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[rank], rows[piv]);
      for (size_t i = rank + 1; i < rows.size(); ++i) {
        for (size_t k = c + 1; k < cols; ++k)
          rows[i][k] = (rows[i][k] * rows[rank][c] - rows[rank][k] * rows[i][c]) / prev;
        rows[i][c] = 0;
      }
      prev = rows[rank][c];
      ++rank;
    }
    return rank;
  }
};

// ---------------------------------------------------------------------------
// matroid on exact rational vectors

struct VectorMatroid {
  std::vector<std::string> labels;
  std::vector<std::vector<long>> vectors;  // integer vectors (clear denominators upstream)
  IntRanker ranker;

  VectorMatroid(std::vector<std::string> lab, std::vector<std::vector<long>> vec)
      : labels(std::move(lab)), vectors(std::move(vec)), ranker(vectors) {
    if (labels.size() != vectors.size())
      throw std::invalid_argument("VectorMatroid: label/vector count mismatch");
    if (vectors.size() > 63) throw std::invalid_argument("VectorMatroid: ground set too large");
  }

  size_t size() const { return vectors.size(); }
  Mask full_mask() const { return (size() == 64) ? ~Mask(0) : ((Mask(1) << size()) - 1); }
  int rank() const { return ranker.rank_of(full_mask()); }
};

// Graphic matroid of K4 on edge vectors e_i - e_j, edges in lexicographic
// order 12, 13, 14, 23, 24, 34.
inline VectorMatroid k4_matroid() {
  std::vector<std::string> lab;
  std::vector<std::vector<long>> vec;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      lab.push_back(std::to_string(i + 1) + std::to_string(j + 1));
      std::vector<long> v(4, 0);
      v[i] = 1;
      v[j] = -1;
      vec.push_back(v);
    }
  return VectorMatroid(std::move(lab), std::move(vec));
}

inline VectorMatroid root_matroid(int m) {
  auto pos = roots(m);
  std::vector<std::string> lab;
  std::vector<std::vector<long>> vec;
  for (const auto& r : pos) {
    lab.push_back(root_str(r));
    vec.push_back(std::vector<long>(r.begin(), r.end()));
  }
  return VectorMatroid(std::move(lab), std::move(vec));
}

// ---------------------------------------------------------------------------
// circuits

// All circuits (minimal dependent subsets) by DFS over independent sets.
// Exhaustive; intended for ground sets of modest size (K4, uniform matroids,
// unit tests). Root matroids at E7 scale go through the sampling helpers.
inline std::vector<std::vector<int>> circuits(const VectorMatroid& m) {
  std::vector<std::vector<int>> out;
  if (m.rank() == 0) return out;  // rank-0 input: no circuits among non-loop handling
  std::set<Mask> seen;

  std::function<void(Mask, int, int)> dfs = [&](Mask indep, int rank_indep, int start) {
    for (int e = start; e < (int)m.size(); ++e) {
      Mask cand = indep | (Mask(1) << e);
      int r = m.ranker.rank_of(cand);
      if (r == popcount(cand)) {
        dfs(cand, r, e + 1);
      } else {
        // unique circuit inside indep + e
        Mask circ = 0;
        for (int x : mask_elems(cand)) {
          Mask del = cand & ~(Mask(1) << x);
          if (m.ranker.rank_of(del) == r) circ |= (Mask(1) << x);
        }
        if (seen.insert(circ).second) out.push_back(mask_elems(circ));
      }
    }
  };
  dfs(0, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// Bergman membership: on every circuit the minimum of w is attained at
// least twice (min convention, as in the moduli-fan computations).
inline bool in_bergman(const QVec& w, const std::vector<std::vector<int>>& circuits_list) {
  for (const auto& c : circuits_list) {
    if ((size_t)*std::max_element(c.begin(), c.end()) >= w.size())
      throw std::invalid_argument("in_bergman: circuit index outside ground set");
    const Q* best = &w[c[0]];
    int hits = 1;
    for (size_t k = 1; k < c.size(); ++k) {
      const Q& x = w[c[k]];
      if (x < *best) {
        best = &x;
        hits = 1;
      } else if (x == *best) {
        ++hits;
      }
    }
    if (hits < 2) return false;
  }
  return true;
}

// Equivalent membership through the flat characterization: every strict
// upper level set {i : w_i > t} is a flat. Much faster than scanning
// circuit lists for root matroids; equivalence is covered by tests.
inline bool in_bergman_flats(const VectorMatroid& m, const QVec& w) {
  std::vector<std::pair<Q, int>> vals;
  for (size_t i = 0; i < w.size(); ++i) vals.push_back({w[i], (int)i});
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  Mask upper = 0;
  for (size_t i = 0; i < vals.size();) {
    size_t j = i;
    while (j < vals.size() && vals[j].first == vals[i].first) {
      upper |= Mask(1) << vals[j].second;
      ++j;
    }
    if (j == vals.size()) break;  // full set, always a flat
    if (m.ranker.closure(upper) != upper) return false;
    i = j;
  }
  return true;
}

// ---------------------------------------------------------------------------
// flats

// All flats, as masks grouped by rank (0 .. rank(M)).
inline std::vector<std::vector<Mask>> all_flats(const VectorMatroid& m) {
  int rk = m.rank();
  std::vector<std::vector<Mask>> by_rank(rk + 1);
  std::set<Mask> seen;
  Mask bottom = m.ranker.closure(0);
  by_rank[0].push_back(bottom);
  seen.insert(bottom);
  std::vector<Mask> frontier{bottom};
  for (int r = 0; r < rk; ++r) {
    std::vector<Mask> next;
    for (Mask f : frontier)
      for (size_t e = 0; e < m.size(); ++e) {
        if (f & (Mask(1) << e)) continue;
        Mask g = m.ranker.closure(f | (Mask(1) << e));
        if (seen.insert(g).second) {
          by_rank[r + 1].push_back(g);
          next.push_back(g);
        }
      }
    frontier = std::move(next);
  }
  for (auto& v : by_rank) std::sort(v.begin(), v.end());
  return by_rank;
}

// Connectivity of the restriction M|F. Components are generated by the
// fundamental circuits of any fixed basis of F: elements sharing such a
// circuit are glued, basis elements in no fundamental circuit are coloops.
inline bool flat_connected(const VectorMatroid& m, Mask f) {
  auto elems = mask_elems(f);
  if (elems.size() <= 1) return true;
  // greedy basis
  Mask basis = 0;
  int rk = 0;
  for (int e : elems) {
    Mask cand = basis | (Mask(1) << e);
    if (m.ranker.rank_of(cand) > rk) {
      basis = cand;
      ++rk;
    }
  }
  std::vector<int> parent(elems.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  std::map<int, int> pos;
  for (size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = (int)i;

  auto basis_elems = mask_elems(basis);
  for (int e : elems) {
    if (basis & (Mask(1) << e)) continue;
    // fundamental circuit of e: e together with the basis elements whose
    // removal still lets the rest span e
    int prev = -1;
    for (int b : basis_elems) {
      Mask del = (basis & ~(Mask(1) << b)) | (Mask(1) << e);
      if (m.ranker.rank_of(del) == rk) {
        if (prev >= 0) unite(pos[b], prev);
        prev = pos[b];
      }
    }
    if (prev >= 0) unite(pos[e], prev);
  }
  int root = find(0);
  for (size_t i = 1; i < elems.size(); ++i)
    if (find((int)i) != root) return false;
  return true;
}

// Precomputed flat data for fast repeated membership tests.
struct FlatTable {
  const VectorMatroid& m;
  std::set<Mask> flat_set;
  std::vector<Mask> rays;  // connected proper flats (positive rank), sorted

  explicit FlatTable(const VectorMatroid& mat) : m(mat) {
    auto by_rank = all_flats(m);
    for (auto& level : by_rank)
      for (Mask f : level) flat_set.insert(f);
    for (int r = 1; r < (int)by_rank.size() - 1; ++r)
      for (Mask f : by_rank[r])
        if (flat_connected(m, f)) rays.push_back(f);
    std::sort(rays.begin(), rays.end());
  }

  bool is_flat(Mask f) const { return flat_set.count(f) != 0; }

  // membership of a nonnegative integer combination of indicator vectors,
  // given as per-element multiplicities
  bool member(const std::vector<int>& w) const {
    int top = *std::max_element(w.begin(), w.end());
    Mask upper = 0;
    for (int level = top; level > 0; --level) {
      for (size_t e = 0; e < w.size(); ++e)
        if (w[e] == level) upper |= Mask(1) << e;
      if (!is_flat(upper)) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Bergman fan enumeration

struct FanRecord {
  std::vector<std::vector<long>> rays;          // primitive integer vectors
  std::vector<std::vector<std::vector<int>>> cones_by_dim;  // [d] = list of ray index sets, d >= 2
  std::vector<long> f_vector;                   // (1, #rays, #2-cones, ...)
  std::vector<long> orbit_counts;               // same shape, orbits under the symmetry group
  bool complete = true;
};

namespace detail {

// Action of a ground-set permutation on a flat mask.
inline Mask apply_perm_mask(const std::vector<int>& perm, Mask f) {
  Mask out = 0;
  for (int e : mask_elems(f)) out |= Mask(1) << perm[e];
  return out;
}

// Orbit of a sorted ray-index set under permutations of rays.
inline void set_orbit(const std::vector<std::vector<int>>& ray_perms,
                      const std::vector<int>& seed,
                      std::vector<std::vector<int>>& out) {
  std::set<std::vector<int>> seen{seed};
  std::vector<std::vector<int>> frontier{seed};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& s : frontier)
      for (const auto& p : ray_perms) {
        std::vector<int> im;
        im.reserve(s.size());
        for (int i : s) im.push_back(p[i]);
        std::sort(im.begin(), im.end());
        if (seen.insert(im).second) next.push_back(im);
      }
    frontier = std::move(next);
  }
  out.assign(seen.begin(), seen.end());
}

}  // namespace detail

// The incremental orbit procedure: rays are the indicator vectors of the
// connected proper flats; representatives of (d-1)-cones are extended by one
// ray, the sum of ray vectors is tested for membership, and orbits are
// expanded, keeping lexicographically smallest representatives.
//
// symmetry: ground set permutations preserving the matroid (may be empty,
// in which case every cone is its own orbit).
inline FanRecord enumerate_bergman(const VectorMatroid& m,
                                   const std::vector<std::vector<int>>& symmetry,
                                   int max_dim,
                                   size_t cone_cap = 200'000'000) {
  FanRecord fan;

  // rays: connected proper flats of positive rank
  FlatTable table(m);
  const std::vector<Mask>& rays = table.rays;
  std::map<Mask, int> ray_index;
  for (size_t i = 0; i < rays.size(); ++i) ray_index[rays[i]] = (int)i;
  for (Mask f : rays) {
    std::vector<long> v(m.size(), 0);
    for (int e : mask_elems(f)) v[e] = 1;
    fan.rays.push_back(std::move(v));
  }

  // symmetry action on rays
  std::vector<std::vector<int>> ray_perms;
  for (const auto& p : symmetry) {
    std::vector<int> rp(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) {
      auto it = ray_index.find(detail::apply_perm_mask(p, rays[i]));
      if (it == ray_index.end())
        throw std::invalid_argument("enumerate_bergman: symmetry does not preserve the matroid");
      rp[i] = it->second;
    }
    ray_perms.push_back(std::move(rp));
  }

  auto member = [&](const std::vector<int>& cone) {
    std::vector<int> w(m.size(), 0);
    for (int i : cone)
      for (int e : mask_elems(rays[i])) w[e] += 1;
    return table.member(w);
  };

  fan.f_vector = {1, (long)rays.size()};
  fan.orbit_counts = {1, 0};

  // orbits of single rays
  std::vector<std::vector<int>> reps;
  {
    std::set<std::vector<int>> seen;
    for (size_t i = 0; i < rays.size(); ++i) {
      std::vector<int> c{(int)i};
      if (seen.count(c)) continue;
      std::vector<std::vector<int>> orb;
      detail::set_orbit(ray_perms, c, orb);
      for (auto& o : orb) seen.insert(o);
      reps.push_back(orb.front());  // lexicographically smallest
      fan.orbit_counts[1]++;
    }
  }

  for (int d = 2; d <= max_dim; ++d) {
    std::set<std::vector<int>> canon_reps;
    for (const auto& rep : reps) {
      for (int r = 0; r < (int)rays.size(); ++r) {
        if (std::binary_search(rep.begin(), rep.end(), r)) continue;
        std::vector<int> cand = rep;
        cand.insert(std::lower_bound(cand.begin(), cand.end(), r), r);
        if (!member(cand)) continue;
        std::vector<std::vector<int>> orb;
        detail::set_orbit(ray_perms, cand, orb);
        canon_reps.insert(orb.front());
      }
    }
    // expand all orbits for the total count and the cone list
    std::vector<std::vector<int>> all;
    for (const auto& rep : canon_reps) {
      std::vector<std::vector<int>> orb;
      detail::set_orbit(ray_perms, rep, orb);
      for (auto& o : orb) {
        all.push_back(std::move(o));
        if (all.size() > cone_cap) {
          fan.complete = false;
          break;
        }
      }
    }
    std::sort(all.begin(), all.end());
    fan.f_vector.push_back((long)all.size());
    fan.orbit_counts.push_back((long)canon_reps.size());
    fan.cones_by_dim.push_back(all);
    reps.assign(canon_reps.begin(), canon_reps.end());
    if (reps.empty()) break;
  }
  return fan;
}

// Independent oracle for the same fan: nested sets of the building set of
// connected proper flats (antichains must have disconnected joins), counted
// by DFS. Returns the f-vector (1, rays, 2-cones, ...).
inline std::vector<long> bergman_f_vector_nested(const VectorMatroid& m, int max_dim) {
  FlatTable table(m);
  const std::vector<Mask>& rays = table.rays;
  size_t n = rays.size();

  // memoized "closure of the union is connected" test
  std::map<Mask, bool> join_connected;
  auto bad_join = [&](Mask uni) {
    auto it = join_connected.find(uni);
    if (it == join_connected.end())
      it = join_connected.emplace(uni, flat_connected(m, m.ranker.closure(uni))).first;
    return it->second;
  };

  // pairwise nested test
  std::vector<std::vector<uint8_t>> pair_ok(n, std::vector<uint8_t>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      Mask F = rays[i], G = rays[j];
      bool comparable = ((F & G) == F) || ((F & G) == G);
      bool ok = comparable || !bad_join(F | G);
      pair_ok[i][j] = pair_ok[j][i] = ok;
    }

  auto nested_extension_ok = [&](const std::vector<int>& set, int r) {
    for (int s : set)
      if (!pair_ok[s][r]) return false;
    // antichain subsets involving r
    std::vector<int> incomp;
    for (int s : set) {
      Mask F = rays[s], G = rays[r];
      if ((F & G) != F && (F & G) != G) incomp.push_back(s);
    }
    for (Mask sub = 1; sub < (Mask(1) << incomp.size()); ++sub) {
      auto elems = mask_elems(sub);
      bool antichain = true;
      for (size_t a = 0; a < elems.size() && antichain; ++a)
        for (size_t b = a + 1; b < elems.size() && antichain; ++b) {
          Mask F = rays[incomp[elems[a]]], G = rays[incomp[elems[b]]];
          if ((F & G) == F || (F & G) == G) antichain = false;
        }
      if (!antichain) continue;
      Mask uni = rays[r];
      for (int e : elems) uni |= rays[incomp[e]];
      if (bad_join(uni)) return false;
    }
    return true;
  };

  std::vector<long> f{1, (long)n};
  std::vector<std::vector<int>> layer;
  for (size_t i = 0; i < n; ++i) layer.push_back({(int)i});
  for (int d = 2; d <= max_dim; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& s : layer)
      for (int r = s.back() + 1; r < (int)n; ++r) {
        std::vector<int> cand = s;
        if (nested_extension_ok(s, r)) {
          cand.push_back(r);
          next.push_back(cand);
        }
      }
    f.push_back((long)next.size());
    layer = std::move(next);
    if (layer.empty()) break;
  }
  return f;
}

// Chain-of-flats (fine structure) f-vector: rays are all proper flats of
// positive rank, d-cones are chains of d of them.
inline std::vector<long> bergman_f_vector_fine(const VectorMatroid& m, int max_dim) {
  auto flats = all_flats(m);
  std::vector<Mask> rays;
  for (int r = 1; r < (int)flats.size() - 1; ++r)
    for (Mask f : flats[r]) rays.push_back(f);
  std::sort(rays.begin(), rays.end());
  std::vector<long> f{1, (long)rays.size()};
  // count chains by DP on the containment order
  std::vector<std::vector<int>> above(rays.size());
  for (size_t i = 0; i < rays.size(); ++i)
    for (size_t j = 0; j < rays.size(); ++j)
      if (i != j && (rays[i] & rays[j]) == rays[i]) above[i].push_back((int)j);
  std::vector<long> cur(rays.size(), 1);  // chains of length 1 ending at i
  for (int d = 2; d <= max_dim; ++d) {
    std::vector<long> nxt(rays.size(), 0);
    long total = 0;
    for (size_t i = 0; i < rays.size(); ++i)
      for (int j : above[i]) nxt[j] += cur[i];
    for (long x : nxt) total += x;
    if (total == 0) break;
    f.push_back(total);
    cur = std::move(nxt);
  }
  return f;
}

// ---------------------------------------------------------------------------
// E7-scale circuit sampling (full enumeration is far beyond desk scale)

// Finds one circuit inside a dependent subset, as label indices.
inline std::vector<int> circuit_within(const VectorMatroid& m, Mask dep) {
  int r = m.ranker.rank_of(dep);
  if (r == popcount(dep)) throw std::domain_error("circuit_within: independent input");
  Mask cur = dep;
  // shrink greedily while keeping dependence
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (int x : mask_elems(cur)) {
      Mask del = cur & ~(Mask(1) << x);
      if (m.ranker.rank_of(del) < popcount(del)) {
        cur = del;
        shrunk = true;
        break;
      }
    }
  }
  return mask_elems(cur);
}

}  // namespace tropdp
