#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tropdp/trees.hpp>

using namespace tropdp;

namespace {

// caterpillar ({A,B}, C, {D,E}) with internal lengths l1, l2:
// two internal nodes x (A,B,C-ish)... build explicitly
MetricTree caterpillar5(const LineLabel& A, const LineLabel& B, const LineLabel& C,
                        const LineLabel& D, const LineLabel& E, Q l1, Q l2) {
  MetricTree t;
  int a = t.add_node(A), b = t.add_node(B), c = t.add_node(C), d = t.add_node(D),
      e = t.add_node(E);
  int x = t.add_node(), y = t.add_node(), z = t.add_node();
  t.add_edge(a, x);
  t.add_edge(b, x);
  t.add_edge(c, y);
  t.add_edge(d, z);
  t.add_edge(e, z);
  t.add_edge(x, y, l1);
  t.add_edge(y, z, l2);
  validate_tree(t);
  return t;
}

}  // namespace

TEST_CASE("restriction basics") {
  auto t = caterpillar5(Eline(1), Eline(4), Eline(3), Eline(2), Eline(5), Q(2), Q(3));
  // restrict to all leaves is the identity
  CHECK(trees_equal_metric(restrict_tree(t, t.leaf_set()), t));
  // any 3 leaves of a tree form a star
  auto r = restrict_tree(t, {Eline(1), Eline(4), Eline(3)});
  int internal = 0;
  for (int v = 0; v < r.n; ++v)
    if (!r.label[v]) ++internal;
  CHECK(internal == 1);
  // functoriality
  auto r2 = restrict_tree(restrict_tree(t, {Eline(1), Eline(3), Eline(2), Eline(5)}),
                          {Eline(1), Eline(3), Eline(2)});
  auto r3 = restrict_tree(t, {Eline(1), Eline(3), Eline(2)});
  CHECK(trees_equal_metric(r2, r3));
  // dropping E5 turns the E2-side internal edge into part of the leaf ray,
  // so only the first internal edge keeps metric content
  auto r4 = restrict_tree(t, {Eline(1), Eline(2), Eline(3), Eline(4)});
  auto d = leaf_distances(r4);
  CHECK(d.at({Eline(1), Eline(2)}) == Q(2));
}

TEST_CASE("four-point condition and reconstruction round trip") {
  auto t = caterpillar5(Eline(1), Eline(4), Eline(3), Eline(2), Eline(5), qof(3, 2), Q(4));
  auto d = leaf_distances(t);
  auto lset = t.leaf_set();
  std::vector<LineLabel> ls(lset.begin(), lset.end());
  CHECK(four_point_condition(d, ls));
  auto back = tree_from_distances(d, ls);
  CHECK(trees_equal_metric(back, t));
}

TEST_CASE("degree-4 relabeling rules") {
  auto g = caterpillar5(Eline(1), Eline(4), Eline(3), Eline(2), Eline(5), Q(1), Q(2));
  // target F_12: E1<->E2, E3 -> F45, E4 -> F35, E5 -> F34
  auto f12 = relabel_d4(g, Fline(1, 2));
  CHECK(f12.leaf_set() ==
        std::set<LineLabel>{Eline(2), Fline(3, 5), Fline(4, 5), Eline(1), Fline(3, 4)});
  // shape preserved
  CHECK(unlabeled_canonical(f12) == unlabeled_canonical(g));
  // target E_1: leaves {G, F12..F15}
  auto e1 = relabel_d4(g, Eline(1));
  CHECK(e1.leaf_set() ==
        std::set<LineLabel>{Gline(), Fline(1, 2), Fline(1, 3), Fline(1, 4), Fline(1, 5)});
}

TEST_CASE("involution check on ten-leaf trees") {
  // build the G1 tree as a symmetric caterpillar: pairs (E_i, F_1i) mirrored
  // spine: E2,E3 cherry-side ... use a star first: star has the involution
  MetricTree star;
  int c = star.add_node();
  for (int i = 2; i <= 6; ++i) {
    int a = star.add_node(Eline(i));
    int b = star.add_node(Fline(1, i));
    star.add_edge(c, a);
    star.add_edge(c, b);
  }
  validate_tree(star);
  CHECK(involution_check(star, Gline(1)));

  // mirror-symmetric caterpillar with the pairs at opposite ends:
  // {E2,E3} - {E4,E5} - {E6,F16} - {F14,F15} - {F12,F13}
  MetricTree t;
  std::vector<int> spine;
  for (int k = 0; k < 5; ++k) spine.push_back(t.add_node());
  t.add_edge(spine[0], t.add_node(Eline(2)));
  t.add_edge(spine[0], t.add_node(Eline(3)));
  t.add_edge(spine[1], t.add_node(Eline(4)));
  t.add_edge(spine[1], t.add_node(Eline(5)));
  t.add_edge(spine[2], t.add_node(Eline(6)));
  t.add_edge(spine[2], t.add_node(Fline(1, 6)));
  t.add_edge(spine[3], t.add_node(Fline(1, 4)));
  t.add_edge(spine[3], t.add_node(Fline(1, 5)));
  t.add_edge(spine[4], t.add_node(Fline(1, 2)));
  t.add_edge(spine[4], t.add_node(Fline(1, 3)));
  t.add_edge(spine[0], spine[1], Q(1));
  t.add_edge(spine[1], spine[2], Q(2));
  t.add_edge(spine[2], spine[3], Q(2));
  t.add_edge(spine[3], spine[4], Q(1));
  validate_tree(t);
  CHECK(involution_check(t, Gline(1)));

  // asymmetric spine lengths destroy the mirror
  MetricTree bad = t;
  for (auto& e : bad.edges)
    if (e.len && *e.len == Q(1)) {
      e.len = Q(7);
      break;
    }
  CHECK_FALSE(involution_check(bad, Gline(1)));
}

TEST_CASE("quotient by the involution halves the tree") {
  // free involution on the symmetric caterpillar: quotient is a 5-leaf tree
  MetricTree t;
  std::vector<int> spine;
  for (int k = 0; k < 5; ++k) spine.push_back(t.add_node());
  int pairs_idx[5][2] = {{2, 0}, {3, 1}, {6, 2}, {4, 3}, {5, 4}};
  for (auto& [i, s] : pairs_idx) {
    int a = t.add_node(Eline(i));
    int b = t.add_node(Fline(1, i));
    t.add_edge(spine[s], a);
    t.add_edge(spine[s], b);
  }
  t.add_edge(spine[0], spine[1], Q(1));
  t.add_edge(spine[1], spine[2], Q(2));
  t.add_edge(spine[2], spine[3], Q(2));
  t.add_edge(spine[3], spine[4], Q(1));
  auto q = quotient_5leaf(t, Gline(1));
  CHECK(q.leaf_set().size() == 5);
  // end cherries collapse into leaf rays, so the quotient caterpillar keeps
  // the two middle spine lengths
  auto d = leaf_distances(q);
  CHECK(d.at({std::min(Eline(2), Fline(1, 2)), std::min(Eline(5), Fline(1, 5))}) == Q(4));
  // doubling back: a trivalent 10-leaf tree with free involution gives a
  // trivalent 5-leaf quotient
  for (int v = 0; v < q.n; ++v)
    if (!q.label[v]) CHECK(q.degree(v) == 3);
}

TEST_CASE("classify_arrangement counts four-valent trees") {
  std::vector<MetricTree> trees;
  std::vector<LineLabel> ls = lines(3);
  for (const auto& L : ls) {
    auto nb = line_neighbors(3, L);
    MetricTree t;
    // trivalent caterpillar on 10 leaves
    std::vector<int> spine;
    for (int k = 0; k < 8; ++k) spine.push_back(t.add_node());
    for (int k = 0; k + 1 < 8; ++k) t.add_edge(spine[k], spine[k + 1], Q(1));
    t.add_edge(spine[0], t.add_node(nb[0]));
    t.add_edge(spine[0], t.add_node(nb[1]));
    t.add_edge(spine[7], t.add_node(nb[8]));
    t.add_edge(spine[7], t.add_node(nb[9]));
    for (int k = 1; k < 7; ++k) t.add_edge(spine[k], t.add_node(nb[1 + k]));
    validate_tree(t);
    trees.push_back(t);
  }
  CHECK(classify_arrangement(trees) == ArrangementType::all_trivalent);

  // make exactly three of them 4-valent by contracting one internal edge
  auto contract_one = [](MetricTree t) {
    // merge spine[0] and spine[1]
    MetricTree out;
    std::map<int, int> id;
    for (int v = 1; v < t.n; ++v) id[v] = out.add_node(t.label[v]);
    id[0] = id[1];
    for (auto& e : t.edges) {
      if ((e.u == 0 && e.v == 1) || (e.u == 1 && e.v == 0)) continue;
      out.add_edge(id[e.u], id[e.v], e.len);
    }
    validate_tree(out);
    return out;
  };
  auto trees2 = trees;
  for (int k = 0; k < 3; ++k) trees2[k] = contract_one(trees2[k]);
  CHECK(classify_arrangement(trees2) == ArrangementType::three_fourvalent);

  auto trees3 = trees;
  trees3[0] = contract_one(trees3[0]);
  CHECK(classify_arrangement(trees3) == ArrangementType::degenerate);
}

TEST_CASE("complete_line_tree inserts mirrored leaves") {
  // the F_14 seven-leaf caterpillar from the construction: markings
  // E1, F23 at the ends; E4, F25, F26, F35, F36 along the line.
  // involution pairs: E1<->G4, E4<->G1, F23<->F56, F25<->F36, F26<->F35.
  MetricTree t;
  std::vector<int> spine;
  for (int k = 0; k < 5; ++k) spine.push_back(t.add_node());
  t.add_edge(spine[0], t.add_node(Fline(2, 5)));
  t.add_edge(spine[0], t.add_node(Eline(1)));
  t.add_edge(spine[1], t.add_node(Fline(2, 6)));
  t.add_edge(spine[2], t.add_node(Eline(4)));
  t.add_edge(spine[3], t.add_node(Fline(3, 5)));
  t.add_edge(spine[4], t.add_node(Fline(3, 6)));
  t.add_edge(spine[4], t.add_node(Fline(2, 3)));
  t.add_edge(spine[0], spine[1], Q(1));
  t.add_edge(spine[1], spine[2], Q(2));
  t.add_edge(spine[2], spine[3], Q(2));
  t.add_edge(spine[3], spine[4], Q(1));
  validate_tree(t);

  auto full = complete_line_tree(t, Fline(1, 4));
  CHECK(full.leaf_set().size() == 10);
  CHECK(involution_check(full, Fline(1, 4)));

  // an already complete tree comes back unchanged
  auto again = complete_line_tree(full, Fline(1, 4));
  CHECK(trees_equal_metric(again, full));
}

TEST_CASE("newick and dot emit something sensible") {
  auto t = caterpillar5(Eline(1), Eline(4), Eline(3), Eline(2), Eline(5), Q(1), Q(2));
  auto nwk = tree_newick(t);
  CHECK(nwk.find("E1") != std::string::npos);
  CHECK(nwk.back() == ';');
  CHECK(tree_dot(t).find("graph T") == 0);
}
