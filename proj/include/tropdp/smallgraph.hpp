#pragma once

// Simple undirected graphs on <= ~30 nodes with exact canonical labeling.
// Canonical form: iterated degree refinement, then backtracking over the
// orbits of the coarsest stable coloring, taking the lexicographically
// smallest adjacency bitstring. All target graphs here (Petersen, K33,
// Clebsch, Schlafli) are tiny, so exhaustive refinement is cheap.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tropdp {

struct SmallGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // adjacency matrix (0/1)

  explicit SmallGraph(int n_ = 0) : n(n_), adj(n_, std::vector<int>(n_, 0)) {}

  void add_edge(int u, int v) {
    adj[u][v] = adj[v][u] = 1;
  }
  bool has_edge(int u, int v) const { return adj[u][v] != 0; }

  int degree(int v) const {
    return std::accumulate(adj[v].begin(), adj[v].end(), 0);
  }
  int edge_count() const {
    int e = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e += adj[i][j];
    return e;
  }
  bool regular(int k) const {
    for (int v = 0; v < n; ++v)
      if (degree(v) != k) return false;
    return true;
  }
};

namespace detail {

// Adjacency bitstring of g relabeled by perm (perm[i] = original vertex in slot i).
inline std::vector<uint64_t> relabel_bits(const SmallGraph& g, const std::vector<int>& perm) {
  std::vector<uint64_t> bits((size_t(g.n) * g.n + 63) / 64, 0);
  size_t k = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j, ++k)
      if (g.adj[perm[i]][perm[j]]) bits[k / 64] |= (uint64_t(1) << (k % 64));
  return bits;
}

inline std::vector<int> stable_coloring(const SmallGraph& g, std::vector<int> color) {
  int classes = -1;
  while (true) {
    std::vector<std::vector<int>> sig(g.n);
    for (int v = 0; v < g.n; ++v) {
      std::vector<int> s;
      for (int u = 0; u < g.n; ++u)
        if (g.adj[v][u]) s.push_back(color[u]);
      std::sort(s.begin(), s.end());
      s.push_back(color[v]);
      sig[v] = std::move(s);
    }
    // rank signatures in sorted order so the numbering is label-independent
    std::map<std::vector<int>, int> ids;
    for (int v = 0; v < g.n; ++v) ids.emplace(sig[v], 0);
    int k = 0;
    for (auto& [s, id] : ids) id = k++;
    std::vector<int> next(g.n);
    for (int v = 0; v < g.n; ++v) next[v] = ids[sig[v]];
    bool done = ((int)ids.size() == classes) || next == color;
    classes = (int)ids.size();
    color = std::move(next);
    if (done) return color;
  }
}

inline void canon_search(const SmallGraph& g, std::vector<int> color,
                         std::vector<int>& perm, std::vector<uint64_t>& best,
                         bool& have_best) {
  color = stable_coloring(g, color);
  // pick smallest non-singleton color class
  int target = -1, bestsz = g.n + 1;
  std::vector<int> counts(g.n + 1, 0);
  for (int v = 0; v < g.n; ++v) counts[color[v]]++;
  for (int c = 0; c <= g.n; ++c)
    if (counts[c] > 1 && counts[c] < bestsz) {
      bestsz = counts[c];
      target = c;
    }
  if (target < 0) {
    // discrete: read off permutation sorted by color
    std::vector<int> p(g.n);
    std::iota(p.begin(), p.end(), 0);
    std::sort(p.begin(), p.end(), [&](int a, int b) { return color[a] < color[b]; });
    auto bits = relabel_bits(g, p);
    if (!have_best || bits < best) {
      best = bits;
      perm = p;
      have_best = true;
    }
    return;
  }
  for (int v = 0; v < g.n; ++v) {
    if (color[v] != target) continue;
    std::vector<int> c2(g.n);
    for (int u = 0; u < g.n; ++u) c2[u] = color[u] * 2 + (u == v ? 1 : 0);
    canon_search(g, c2, perm, best, have_best);
  }
}

}  // namespace detail

// Canonical form usable as an isomorphism invariant-and-certificate.
inline std::vector<uint64_t> canonical_form(const SmallGraph& g) {
  std::vector<int> perm;
  std::vector<uint64_t> best;
  bool have = false;
  detail::canon_search(g, std::vector<int>(g.n, 0), perm, best, have);
  return best;
}

inline bool isomorphic(const SmallGraph& a, const SmallGraph& b) {
  if (a.n != b.n || a.edge_count() != b.edge_count()) return false;
  return canonical_form(a) == canonical_form(b);
}

// ---------------------------------------------------------------------------
// reference graphs

inline SmallGraph petersen_graph() {
  // Kneser graph K(5,2): vertices = 2-subsets of {0..4}, edges = disjointness.
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) v.push_back({i, j});
  SmallGraph g(10);
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b) {
      auto [i, j] = v[a];
      auto [k, l] = v[b];
      if (i != k && i != l && j != k && j != l) g.add_edge(a, b);
    }
  return g;
}

inline SmallGraph k33_graph() {
  SmallGraph g(6);
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) g.add_edge(i, j);
  return g;
}

inline SmallGraph clebsch_graph() {
  // Vertices = F_2^4, edges between vectors differing by a weight-1 or
  // weight-4 vector (the 5-regular "folded 5-cube" presentation).
  SmallGraph g(16);
  for (int a = 0; a < 16; ++a)
    for (int b = a + 1; b < 16; ++b) {
      int d = a ^ b, w = __builtin_popcount(d);
      if (w == 1 || w == 4) g.add_edge(a, b);
    }
  return g;
}

inline std::string graph_dot(const SmallGraph& g, const std::vector<std::string>& labels = {}) {
  std::ostringstream os;
  os << "graph G {\n";
  for (int v = 0; v < g.n; ++v) {
    os << "  n" << v;
    if ((size_t)v < labels.size()) os << " [label=\"" << labels[v] << "\"]";
    os << ";\n";
  }
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.adj[i][j]) os << "  n" << i << " -- n" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace tropdp
