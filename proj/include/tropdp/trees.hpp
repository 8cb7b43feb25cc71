#pragma once

// Leaf-labeled metric trees: the boundary objects of tropical del Pezzo
// surfaces. Internal edges carry positive rational lengths; leaf edges are
// length-free (the trees live at infinity). Operations: restriction,
// involutions and quotients, the degree-4 relabeling rules, arrangement
// classification, and distance-matrix reconstruction.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxideal.hpp"
#include "rational.hpp"
#include "rootsys.hpp"

namespace tropdp {

struct MetricTree {
  struct Edge {
    int u, v;
    std::optional<Q> len;  // absent for leaf edges
  };
  int n = 0;
  std::vector<std::optional<LineLabel>> label;  // leaf labels
  std::vector<Edge> edges;

  int add_node(std::optional<LineLabel> lab = std::nullopt) {
    label.push_back(lab);
    return n++;
  }
  void add_edge(int u, int v, std::optional<Q> len = std::nullopt) { edges.push_back({u, v, len}); }

  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (size_t e = 0; e < edges.size(); ++e) {
      adj[edges[e].u].push_back({edges[e].v, (int)e});
      adj[edges[e].v].push_back({edges[e].u, (int)e});
    }
    return adj;
  }
  int degree(int v) const {
    int d = 0;
    for (const auto& e : edges) d += (e.u == v) + (e.v == v);
    return d;
  }
  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
      if (label[v]) out.push_back(v);
    return out;
  }
  std::set<LineLabel> leaf_set() const {
    std::set<LineLabel> out;
    for (int v = 0; v < n; ++v)
      if (label[v]) out.insert(*label[v]);
    return out;
  }
  int leaf_node(const LineLabel& L) const {
    for (int v = 0; v < n; ++v)
      if (label[v] && *label[v] == L) return v;
    throw std::domain_error("leaf_node: no leaf labeled " + L.str());
  }
};

inline void validate_tree(const MetricTree& t) {
  if (t.n == 0) throw std::domain_error("validate_tree: empty tree");
  if (t.edges.size() != (size_t)t.n - 1) throw std::domain_error("validate_tree: not a tree");
  // connectivity
  auto adj = t.adjacency();
  std::vector<char> seen(t.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [w, e] : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  for (int v = 0; v < t.n; ++v)
    if (!seen[v]) throw std::domain_error("validate_tree: disconnected");
  std::set<LineLabel> labs;
  for (int v = 0; v < t.n; ++v) {
    int d = t.degree(v);
    if (t.label[v]) {
      if (d != 1) throw std::domain_error("validate_tree: labeled node is not a leaf");
      if (!labs.insert(*t.label[v]).second)
        throw std::domain_error("validate_tree: duplicate leaf label");
    } else if (d < 3 && t.n > 2) {
      throw std::domain_error("validate_tree: internal node of degree < 3");
    }
  }
  for (const auto& e : t.edges) {
    bool leaf_edge = t.label[e.u].has_value() || t.label[e.v].has_value();
    if (leaf_edge && e.len) throw std::domain_error("validate_tree: leaf edge carries a length");
    if (!leaf_edge && (!e.len || *e.len <= 0))
      throw std::domain_error("validate_tree: internal edge without positive length");
  }
}

// ---------------------------------------------------------------------------
// splits: the canonical labeled-metric invariant

// For each internal edge, the side of the leaf partition not containing the
// smallest label, together with the length.
inline std::vector<std::pair<std::vector<LineLabel>, Q>> labeled_splits(const MetricTree& t) {
  auto adj = t.adjacency();
  std::vector<std::pair<std::vector<LineLabel>, Q>> out;
  LineLabel min_lab = *t.label[t.leaves().front()];
  for (int v : t.leaves())
    min_lab = std::min(min_lab, *t.label[v]);
  for (size_t e = 0; e < t.edges.size(); ++e) {
    if (!t.edges[e].len) continue;
    // leaves on the v-side of edge e
    std::vector<LineLabel> side;
    std::vector<char> seen(t.n, 0);
    std::vector<int> stack{t.edges[e].v};
    seen[t.edges[e].v] = 1;
    seen[t.edges[e].u] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (t.label[x]) side.push_back(*t.label[x]);
      for (auto [w, f] : adj[x])
        if (!seen[w] && f != (int)e) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(side.begin(), side.end());
    if (std::binary_search(side.begin(), side.end(), min_lab)) {
      // take the complement
      std::vector<LineLabel> comp;
      for (int x : t.leaves())
        if (!std::binary_search(side.begin(), side.end(), *t.label[x])) comp.push_back(*t.label[x]);
      std::sort(comp.begin(), comp.end());
      side = std::move(comp);
    }
    out.push_back({side, *t.edges[e].len});
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool trees_equal_metric(const MetricTree& a, const MetricTree& b) {
  return a.leaf_set() == b.leaf_set() && labeled_splits(a) == labeled_splits(b);
}

inline bool trees_equal_topology(const MetricTree& a, const MetricTree& b) {
  if (a.leaf_set() != b.leaf_set()) return false;
  auto sa = labeled_splits(a), sb = labeled_splits(b);
  auto strip = [](std::vector<std::pair<std::vector<LineLabel>, Q>> s) {
    std::vector<std::vector<LineLabel>> out;
    for (auto& [side, len] : s) out.push_back(side);
    std::sort(out.begin(), out.end());
    return out;
  };
  return strip(sa) == strip(sb);
}

// Unlabeled combinatorial canonical form (lengths ignored): minimum over all
// roots of the recursive multiset encoding.
inline std::string unlabeled_canonical(const MetricTree& t) {
  auto adj = t.adjacency();
  std::function<std::string(int, int)> enc = [&](int v, int parent) -> std::string {
    std::vector<std::string> kids;
    for (auto [w, e] : adj[v])
      if (w != parent) kids.push_back(enc(w, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    s += ")";
    return s;
  };
  std::string best;
  for (int v = 0; v < t.n; ++v) {
    if (t.label[v]) continue;  // root at internal nodes (or all if tiny)
    std::string s = enc(v, -1);
    if (best.empty() || s < best) best = s;
  }
  if (best.empty()) best = enc(0, -1);
  return best;
}

// ---------------------------------------------------------------------------
// restriction

// Subtree spanned by the leaves in E, with degree-2 vertices suppressed and
// their internal lengths added.
inline MetricTree restrict_tree(const MetricTree& t, const std::set<LineLabel>& E) {
  if (E.size() < 2) throw std::domain_error("restrict_tree: need at least two leaves");
  auto adj = t.adjacency();
  // mark nodes on paths between kept leaves: prune leaves not in E repeatedly
  std::vector<char> alive(t.n, 1);
  std::vector<int> deg(t.n, 0);
  for (const auto& e : t.edges) {
    deg[e.u]++;
    deg[e.v]++;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < t.n; ++v) {
      if (!alive[v] || deg[v] != 1) continue;
      if (t.label[v] && E.count(*t.label[v])) continue;
      alive[v] = 0;
      changed = true;
      for (auto [w, e] : adj[v])
        if (alive[w]) deg[w]--;
      deg[v] = 0;
    }
  }
  // build the pruned tree, suppressing degree-2 internal nodes
  MetricTree out;
  std::map<int, int> id;
  for (int v = 0; v < t.n; ++v) {
    if (!alive[v]) continue;
    if (deg[v] == 2 && !t.label[v]) continue;  // suppressed
    id[v] = out.add_node(t.label[v]);
  }
  std::set<std::pair<int, int>> done;
  for (auto& [v, nid] : id) {
    // walk from v along each direction to the next kept node
    for (auto [w0, e0] : adj[v]) {
      if (!alive[w0]) continue;
      int prev = v, cur = w0;
      bool has_len = t.edges[e0].len.has_value();
      Q len = t.edges[e0].len.value_or(Q(0));
      while (!id.count(cur)) {
        // degree-2 suppressed node: continue
        for (auto [w, e] : adj[cur]) {
          if (w == prev || !alive[w]) continue;
          prev = cur;
          cur = w;
          if (t.edges[e].len)
            len += *t.edges[e].len;
          else
            has_len = false;
          break;
        }
      }
      int a = nid, b = id[cur];
      if (a > b) std::swap(a, b);
      if (a == b || !done.insert({a, b}).second) continue;
      bool leaf_edge = out.label[a].has_value() || out.label[b].has_value();
      if (leaf_edge)
        out.add_edge(a, b);
      else
        out.add_edge(a, b, has_len ? std::optional<Q>(len) : std::nullopt);
    }
  }
  validate_tree(out);
  return out;
}

// ---------------------------------------------------------------------------
// involution and quotient

// Relabel the leaves by a label map; lengths untouched.
inline MetricTree relabel(const MetricTree& t, const std::map<LineLabel, LineLabel>& m) {
  MetricTree out = t;
  for (int v = 0; v < out.n; ++v)
    if (out.label[v]) {
      auto it = m.find(*out.label[v]);
      if (it != m.end()) out.label[v] = it->second;
    }
  return out;
}

// Does the tritangent pairing of L extend to a metric automorphism of T?
inline bool involution_check(const MetricTree& t, const LineLabel& L) {
  auto pairs = line_involution(L);
  std::set<LineLabel> expected;
  for (const auto& nb : line_neighbors(3, L)) expected.insert(nb);
  if (t.leaf_set() != expected)
    throw std::domain_error("involution_check: leaf set is not the neighborhood of " + L.str());
  std::map<LineLabel, LineLabel> swap;
  for (auto& [a, b] : pairs) {
    swap[a] = b;
    swap[b] = a;
  }
  return trees_equal_metric(t, relabel(t, swap));
}

// Explicit node-level automorphism realizing a leaf permutation, found by
// propagating splits; trees here are small.
inline std::optional<std::vector<int>> tree_automorphism(const MetricTree& t,
                                                         const std::map<LineLabel, LineLabel>& m) {
  auto adj = t.adjacency();
  // signature of a node: sorted distances-with-multiset structure; do a
  // simple backtracking search instead (n <= ~25)
  std::vector<int> img(t.n, -1);
  std::vector<int> used(t.n, 0);
  // leaves are forced
  for (int v = 0; v < t.n; ++v)
    if (t.label[v]) {
      LineLabel target = m.count(*t.label[v]) ? m.at(*t.label[v]) : *t.label[v];
      int w = t.leaf_node(target);
      img[v] = w;
      used[w] = 1;
    }
  // order internal nodes by BFS from a leaf
  std::vector<int> order;
  {
    std::vector<char> seen(t.n, 0);
    std::vector<int> stack{t.leaves().front()};
    seen[stack[0]] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (!t.label[v]) order.push_back(v);
      for (auto [w, e] : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  auto edge_len = [&](int u, int v) -> std::optional<Q> {
    for (const auto& e : t.edges)
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return e.len ? e.len : std::optional<Q>(Q(0));
    return std::nullopt;
  };
  std::function<bool(size_t)> go = [&](size_t k) -> bool {
    if (k == order.size()) {
      // verify all edges map to edges with equal lengths
      for (const auto& e : t.edges) {
        auto l2 = edge_len(img[e.u], img[e.v]);
        if (!l2) return false;
        Q l1 = e.len ? *e.len : Q(0);
        if (*l2 != l1) return false;
      }
      return true;
    }
    int v = order[k];
    for (int w = 0; w < t.n; ++w) {
      if (used[w] || t.label[w]) continue;
      if (t.degree(w) != t.degree(v)) continue;
      img[v] = w;
      used[w] = 1;
      // partial consistency: mapped neighbors must stay adjacent with equal length
      bool ok = true;
      for (auto [x, e] : adj[v]) {
        if (img[x] < 0) continue;
        auto l2 = edge_len(w, img[x]);
        Q l1 = t.edges[e].len ? *t.edges[e].len : Q(0);
        if (!l2 || *l2 != l1) ok = false;
      }
      if (ok && go(k + 1)) return true;
      img[v] = -1;
      used[w] = 0;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return img;
}

// Quotient of T by the metric involution induced by the tritangent pairing
// of L; leaves of the quotient are labeled by the smaller label of each
// pair. Checks the local Riemann-Hurwitz inequality along the way.
inline MetricTree quotient_5leaf(const MetricTree& t_in, const LineLabel& L) {
  if (!involution_check(t_in, L)) throw std::domain_error("quotient_5leaf: involution fails");
  auto pairs = line_involution(L);
  std::map<LineLabel, LineLabel> swap;
  for (auto& [a, b] : pairs) {
    swap[a] = b;
    swap[b] = a;
  }
  MetricTree t = t_in;
  auto phi_opt = tree_automorphism(t, swap);
  if (!phi_opt) throw std::domain_error("quotient_5leaf: no automorphism realizes the pairing");
  std::vector<int> phi = *phi_opt;
  // subdivide inverted edges at their midpoints
  bool again = true;
  while (again) {
    again = false;
    for (size_t e = 0; e < t.edges.size() && !again; ++e) {
      int u = t.edges[e].u, v = t.edges[e].v;
      if (phi[u] == v && phi[v] == u) {
        Q half = t.edges[e].len ? *t.edges[e].len / 2 : Q(0);
        int mid = t.add_node();
        phi.push_back(mid);
        std::optional<Q> l = t.edges[e].len ? std::optional<Q>(half) : std::nullopt;
        t.edges[e] = {u, mid, l};
        t.add_edge(mid, v, l);
        again = true;
      }
    }
  }
  // Riemann-Hurwitz at every vertex: deg(v) - d(deg(h(v)) - 2) - 2 >= 0
  // where d = 2 at fixed vertices and 1 elsewhere, and deg(h(v)) counts the
  // quotient star (orbits of edges at v when fixed).
  for (int v = 0; v < t.n; ++v) {
    int d = (phi[v] == v) ? 2 : 1;
    int deg_v = t.degree(v);
    int deg_h;
    if (phi[v] == v) {
      // edges at v are paired by phi; fixed edges stay
      auto adj = t.adjacency();
      std::set<std::set<int>> orbits;
      for (auto [w, e] : adj[v]) orbits.insert(std::set<int>{w, phi[w]});
      deg_h = (int)orbits.size();
    } else {
      deg_h = deg_v;
    }
    if (deg_v - d * (deg_h - 2) - 2 < 0)
      throw std::domain_error("quotient_5leaf: Riemann-Hurwitz violated");
  }
  // quotient graph
  MetricTree out;
  std::map<int, int> rep;
  for (int v = 0; v < t.n; ++v) {
    int r = std::min(v, phi[v]);
    if (rep.count(r)) continue;
    std::optional<LineLabel> lab;
    if (t.label[r]) lab = std::min(*t.label[r], swap.count(*t.label[r]) ? swap.at(*t.label[r]) : *t.label[r]);
    rep[r] = out.add_node(lab);
  }
  auto node_of = [&](int v) { return rep.at(std::min(v, phi[v])); };
  std::set<std::pair<int, int>> done;
  for (const auto& e : t.edges) {
    int a = node_of(e.u), b = node_of(e.v);
    if (a > b) std::swap(a, b);
    if (a == b || !done.insert({a, b}).second) continue;
    bool leaf_edge = out.label[a].has_value() || out.label[b].has_value();
    if (leaf_edge)
      out.add_edge(a, b);
    else
      out.add_edge(a, b, e.len);
  }
  // suppress any degree-2 node created by folding
  std::set<LineLabel> all;
  for (int v = 0; v < out.n; ++v)
    if (out.label[v]) all.insert(*out.label[v]);
  return restrict_tree(out, all);
}

// ---------------------------------------------------------------------------
// degree-4 relabeling rules

// The tree of F_ij from the tree of G: E_i <-> E_j and E_k -> F_lm for
// {k,l,m} the complement; the tree of E_i: E_i -> G and E_j -> F_ij.
inline MetricTree relabel_d4(const MetricTree& treeG, const LineLabel& target) {
  std::set<LineLabel> expect;
  for (int i = 1; i <= 5; ++i) expect.insert(Eline(i));
  if (treeG.leaf_set() != expect)
    throw std::domain_error("relabel_d4: expected leaves E1..E5");
  std::map<LineLabel, LineLabel> m;
  if (target.kind == LineKind::F) {
    int i = target.i, j = target.j;
    std::vector<int> rest;
    for (int k = 1; k <= 5; ++k)
      if (k != i && k != j) rest.push_back(k);
    m[Eline(i)] = Eline(j);
    m[Eline(j)] = Eline(i);
    m[Eline(rest[0])] = Fline(rest[1], rest[2]);
    m[Eline(rest[1])] = Fline(rest[0], rest[2]);
    m[Eline(rest[2])] = Fline(rest[0], rest[1]);
  } else if (target.kind == LineKind::E) {
    int i = target.i;
    m[Eline(i)] = Gline();
    for (int j = 1; j <= 5; ++j)
      if (j != i) m[Eline(j)] = Fline(i, j);
  } else {
    return treeG;  // the G tree itself
  }
  return relabel(treeG, m);
}

// ---------------------------------------------------------------------------
// arrangement classification

enum class ArrangementType { all_trivalent, three_fourvalent, degenerate };

inline ArrangementType classify_arrangement(const std::vector<MetricTree>& trees) {
  if (trees.size() != 27)
    throw std::domain_error("classify_arrangement: expected 27 trees");
  int four = 0, higher = 0;
  for (const auto& t : trees) {
    int worst = 0;
    for (int v = 0; v < t.n; ++v)
      if (!t.label[v]) worst = std::max(worst, t.degree(v));
    if (worst >= 5) ++higher;
    if (worst == 4) ++four;
  }
  if (higher == 0 && four == 0) return ArrangementType::all_trivalent;
  if (higher == 0 && four == 3) return ArrangementType::three_fourvalent;
  return ArrangementType::degenerate;
}

// ---------------------------------------------------------------------------
// completion of a partial tree through the involution

// Inserts the missing leaves of a partial tree at the mirror positions
// forced by the involution pairing of L (proof of the modification theorem:
// each missing leaf is paired with a known one).
inline MetricTree complete_line_tree(const MetricTree& partial, const LineLabel& L) {
  auto pairs = line_involution(L);
  std::map<LineLabel, LineLabel> swap;
  for (auto& [a, b] : pairs) {
    swap[a] = b;
    swap[b] = a;
  }
  auto known = partial.leaf_set();
  std::vector<LineLabel> missing;
  for (const auto& nb : line_neighbors(3, L))
    if (!known.count(nb)) missing.push_back(nb);
  if (missing.empty()) return partial;
  for (const auto& mlab : missing)
    if (!known.count(swap.at(mlab)))
      throw std::domain_error("complete_line_tree: missing leaf " + mlab.str() +
                              " has no known partner");
  // the involution restricted to known-known pairs must determine a metric
  // automorphism of the Steiner span of those leaves; mirror positions are
  // found through distance equations against the known-known pairs.
  std::vector<std::pair<LineLabel, LineLabel>> anchors;
  for (auto& [a, b] : pairs)
    if (known.count(a) && known.count(b) && a != b) anchors.push_back({a, b});
  if (anchors.empty())
    throw std::domain_error("complete_line_tree: no fixed known pair to anchor the mirror");

  // distances between leaf-attachment nodes
  MetricTree t = partial;
  auto adj = t.adjacency();
  auto dists_from = [&](int src) {
    std::vector<std::optional<Q>> d(t.n);
    d[src] = Q(0);
    std::vector<int> stack{src};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[v]) {
        if (d[w]) continue;
        d[w] = *d[v] + (t.edges[e].len ? *t.edges[e].len : Q(0));
        stack.push_back(w);
      }
    }
    return d;
  };
  for (const auto& mlab : missing) {
    adj = t.adjacency();
    LineLabel k = swap.at(mlab);
    // target distances: dist(m, x) = dist(k, sigma(x)) for anchor leaves x
    // find the point (edge, offset) matching them; mirror of the attachment
    int kn = t.leaf_node(k);
    int ka = adj[kn][0].first;  // attachment node of k
    std::vector<std::pair<int, Q>> targets;  // (anchor leaf node, required distance)
    auto dk = dists_from(ka);
    for (auto& [a, b] : anchors) {
      targets.push_back({t.leaf_node(a), *dk[adj[t.leaf_node(b)][0].first]});
      targets.push_back({t.leaf_node(b), *dk[adj[t.leaf_node(a)][0].first]});
    }
    // search tree points: nodes first, then edge interiors
    int found_node = -1;
    for (int v = 0; v < t.n && found_node < 0; ++v) {
      if (t.label[v]) continue;
      auto dv = dists_from(v);
      bool ok = true;
      for (auto& [leaf, need] : targets) {
        int attach = adj[leaf][0].first;
        if (*dv[attach] != need) ok = false;
      }
      if (ok) found_node = v;
    }
    if (found_node >= 0) {
      int leaf = t.add_node(mlab);
      t.add_edge(found_node, leaf);
      continue;
    }
    // interior of an internal edge: solve for the offset
    bool placed = false;
    for (size_t e = 0; e < t.edges.size() && !placed; ++e) {
      if (!t.edges[e].len) continue;
      int u = t.edges[e].u, v = t.edges[e].v;
      Q len = *t.edges[e].len;
      auto du = dists_from(u);
      // point at distance x from u along (u,v): dist to node w is
      // min(du[w] + x, dv[w] + len - x) but on a tree, through u or through v
      auto dv = dists_from(v);
      // consistent x from the first target; verify on the rest
      auto& [leaf0, need0] = targets[0];
      int at0 = adj[leaf0][0].first;
      for (int branch = 0; branch < 2; ++branch) {
        Q x = branch == 0 ? Q(need0 - *du[at0]) : Q(len - (need0 - *dv[at0]));
        if (x <= 0 || x >= len) continue;
        bool ok = true;
        for (auto& [leaf, need] : targets) {
          int at = adj[leaf][0].first;
          Q through_u = *du[at] + x, through_v = *dv[at] + (len - x);
          if (std::min(through_u, through_v) != need) ok = false;
        }
        if (!ok) continue;
        int mid = t.add_node();
        int leafn = t.add_node(mlab);
        std::optional<Q> rest = len - x;
        t.edges[e] = {u, mid, x};
        t.add_edge(mid, v, rest);
        t.add_edge(mid, leafn);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw std::domain_error("complete_line_tree: involution inconsistent with the partial metric");
  }
  validate_tree(t);
  return t;
}

// ---------------------------------------------------------------------------
// distances and reconstruction

// Distance matrix between leaf attachment nodes (leaf edges are length-free).
inline std::map<std::pair<LineLabel, LineLabel>, Q> leaf_distances(const MetricTree& t) {
  auto adj = t.adjacency();
  std::map<std::pair<LineLabel, LineLabel>, Q> out;
  auto leaves = t.leaves();
  for (int src : leaves) {
    std::vector<std::optional<Q>> d(t.n);
    int sa = adj[src][0].first;
    d[sa] = Q(0);
    std::vector<int> stack{sa};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[v]) {
        if (d[w] || t.label[w]) continue;
        d[w] = *d[v] + (t.edges[e].len ? *t.edges[e].len : Q(0));
        stack.push_back(w);
      }
    }
    for (int dst : leaves) {
      if (dst == src) continue;
      int da = adj[dst][0].first;
      out[{*t.label[src], *t.label[dst]}] = *d[da];
    }
  }
  return out;
}

inline bool four_point_condition(const std::map<std::pair<LineLabel, LineLabel>, Q>& d,
                                 const std::vector<LineLabel>& leaves) {
  for (size_t i = 0; i < leaves.size(); ++i)
    for (size_t j = i + 1; j < leaves.size(); ++j)
      for (size_t k = j + 1; k < leaves.size(); ++k)
        for (size_t l = k + 1; l < leaves.size(); ++l) {
          Q s1 = d.at({leaves[i], leaves[j]}) + d.at({leaves[k], leaves[l]});
          Q s2 = d.at({leaves[i], leaves[k]}) + d.at({leaves[j], leaves[l]});
          Q s3 = d.at({leaves[i], leaves[l]}) + d.at({leaves[j], leaves[k]});
          Q mx = std::max(std::max(s1, s2), s3);
          int hits = (s1 == mx) + (s2 == mx) + (s3 == mx);
          if (hits < 2) return false;
        }
  return true;
}

// Exact reconstruction from the attachment-node distance matrix by cherry
// merging. Zero distances glue leaves to a common node.
inline MetricTree tree_from_distances(std::map<std::pair<LineLabel, LineLabel>, Q> d,
                                      std::vector<LineLabel> leaves) {
  struct Item {
    LineLabel rep;                 // representative label
    std::vector<LineLabel> leaves; // labels attached at this point
  };
  MetricTree t;
  if (leaves.size() < 2) throw std::domain_error("tree_from_distances: too few leaves");
  // iteratively merge: find pair (i,j) such that d(i,k)-d(j,k) is constant
  // over all other k, replace by a merged pseudo-leaf at the median point
  struct P {
    LineLabel lab;
    int node;  // node in t (attachment point)
  };
  std::vector<P> active;
  for (auto& L : leaves) {
    int leaf = t.add_node(L);
    int at = t.add_node();
    t.add_edge(at, leaf);
    active.push_back({L, at});
  }
  auto D = [&](const LineLabel& a, const LineLabel& b) -> Q { return a == b ? Q(0) : d.at({a, b}); };
  while (active.size() > 2) {
    // find a cherry
    int bi = -1, bj = -1;
    for (size_t i = 0; i < active.size() && bi < 0; ++i)
      for (size_t j = i + 1; j < active.size() && bi < 0; ++j) {
        bool cherry = true;
        std::optional<Q> delta;
        for (size_t k = 0; k < active.size(); ++k) {
          if (k == i || k == j) continue;
          Q dd = D(active[i].lab, active[k].lab) - D(active[j].lab, active[k].lab);
          if (!delta)
            delta = dd;
          else if (*delta != dd)
            cherry = false;
        }
        // require the meet point inside: dist from i to meet >= 0
        if (cherry) {
          size_t k0 = 0;
          while (k0 == i || k0 == j) ++k0;
          Q di = (D(active[i].lab, active[j].lab) + D(active[i].lab, active[k0].lab) -
                  D(active[j].lab, active[k0].lab)) /
                 2;
          Q dj = D(active[i].lab, active[j].lab) - di;
          if (di >= 0 && dj >= 0) {
            bi = (int)i;
            bj = (int)j;
          }
        }
      }
    if (bi < 0) throw std::domain_error("tree_from_distances: not a tree metric");
    // meet point distances
    size_t k0 = 0;
    while ((int)k0 == bi || (int)k0 == bj) ++k0;
    Q di = (D(active[bi].lab, active[bj].lab) + D(active[bi].lab, active[k0].lab) -
            D(active[bj].lab, active[k0].lab)) /
           2;
    Q dj = D(active[bi].lab, active[bj].lab) - di;
    int meet;
    if (di == 0)
      meet = active[bi].node;
    else if (dj == 0)
      meet = active[bj].node;
    else {
      meet = t.add_node();
      t.add_edge(active[bi].node, meet, di);
      t.add_edge(active[bj].node, meet, dj);
    }
    if (di == 0 && dj > 0) t.add_edge(active[bj].node, meet, dj);
    if (dj == 0 && di > 0) t.add_edge(active[bi].node, meet, di);
    if (di == 0 && dj == 0 && active[bi].node != active[bj].node) {
      // coincident attachment points: rewire the second node onto the first
      for (auto& e : t.edges) {
        if (e.u == active[bj].node) e.u = meet;
        if (e.v == active[bj].node) e.v = meet;
      }
    }
    // distances from the merged point
    LineLabel repi = active[bi].lab, repj = active[bj].lab;
    for (size_t k = 0; k < active.size(); ++k) {
      if ((int)k == bi || (int)k == bj) continue;
      Q dm = (D(repi, active[k].lab) + D(repj, active[k].lab) - D(repi, repj)) / 2;
      d[{repi, active[k].lab}] = dm;
      d[{active[k].lab, repi}] = dm;
    }
    active[bi].node = meet;
    active.erase(active.begin() + bj);
  }
  // connect the last two
  Q rest = D(active[0].lab, active[1].lab);
  if (rest > 0)
    t.add_edge(active[0].node, active[1].node, rest);
  else if (active[0].node != active[1].node) {
    // merge coincident points: rewire edges of node 1 onto node 0
    for (auto& e : t.edges) {
      if (e.u == active[1].node) e.u = active[0].node;
      if (e.v == active[1].node) e.v = active[0].node;
    }
  }
  // drop isolated helper nodes and renumber
  MetricTree out;
  std::map<int, int> id;
  for (int v = 0; v < t.n; ++v)
    if (t.degree(v) > 0) id[v] = out.add_node(t.label[v]);
  for (auto& e : t.edges) out.add_edge(id.at(e.u), id.at(e.v), e.len);
  std::set<LineLabel> all(leaves.begin(), leaves.end());
  return restrict_tree(out, all);
}

// ---------------------------------------------------------------------------
// output formats

inline std::string tree_newick(const MetricTree& t) {
  auto adj = t.adjacency();
  int root = 0;
  for (int v = 0; v < t.n; ++v)
    if (!t.label[v]) root = v;
  std::function<std::string(int, int)> enc = [&](int v, int parent) -> std::string {
    std::vector<std::string> parts;
    for (auto [w, e] : adj[v]) {
      if (w == parent) continue;
      std::string s = enc(w, v);
      if (t.edges[e].len) s += ":" + rational_str(*t.edges[e].len);
      parts.push_back(s);
    }
    if (parts.empty()) return t.label[v] ? t.label[v]->str() : "x";
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    s += ")";
    return s;
  };
  return enc(root, -1) + ";";
}

inline std::string tree_dot(const MetricTree& t) {
  std::ostringstream os;
  os << "graph T {\n";
  for (int v = 0; v < t.n; ++v) {
    os << "  n" << v;
    if (t.label[v]) os << " [label=\"" << t.label[v]->str() << "\"]";
    else os << " [shape=point]";
    os << ";\n";
  }
  for (const auto& e : t.edges) {
    os << "  n" << e.u << " -- n" << e.v;
    if (e.len) os << " [label=\"" << rational_str(*e.len) << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tropdp
