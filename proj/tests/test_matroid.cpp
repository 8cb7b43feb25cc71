#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tropdp/matroid.hpp>
#include <tropdp/smallgraph.hpp>

#include <random>

using namespace tropdp;

// Oracle: minimal dependent subsets by scanning all 2^n subsets.
static std::vector<std::vector<int>> brute_circuits(const VectorMatroid& m) {
  std::vector<Mask> dep;
  for (Mask s = 1; s < (Mask(1) << m.size()); ++s)
    if (m.ranker.rank_of(s) < popcount(s)) dep.push_back(s);
  std::vector<std::vector<int>> out;
  for (Mask s : dep) {
    bool minimal = true;
    for (int x : mask_elems(s))
      if (m.ranker.rank_of(s & ~(Mask(1) << x)) < popcount(s) - 1) minimal = false;
    if (minimal) out.push_back(mask_elems(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST_CASE("K4 circuits: 7 of them, matching brute force") {
  auto m = k4_matroid();
  auto cs = circuits(m);
  CHECK(cs.size() == 7);
  CHECK(cs == brute_circuits(m));
  int triangles = 0, quads = 0;
  for (auto& c : cs) {
    if (c.size() == 3) ++triangles;
    if (c.size() == 4) ++quads;
  }
  CHECK(triangles == 4);
  CHECK(quads == 3);
}

TEST_CASE("U_{2,3} has a single circuit of size 3") {
  VectorMatroid m({"a", "b", "c"}, {{1, 0}, {0, 1}, {1, 1}});
  auto cs = circuits(m);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].size() == 3);
}

TEST_CASE("rank-0 input yields no circuits") {
  VectorMatroid m({"z"}, {{0, 0}});
  CHECK(circuits(m).empty());
}

TEST_CASE("in_bergman basics on K4") {
  auto m = k4_matroid();
  auto cs = circuits(m);
  CHECK(in_bergman(QVec(6, Q(0)), cs));
  // indicator of the triangle {12,13,23} (indices 0,1,3 in lex edge order)
  QVec w(6, Q(0));
  w[0] = w[1] = w[3] = 1;
  CHECK(in_bergman(w, cs));
  // e_{12} - e_{13}: circuit {12,13,23} attains its min only at 13
  QVec v(6, Q(0));
  v[0] = 1;
  v[1] = -1;
  CHECK_FALSE(in_bergman(v, cs));
}

TEST_CASE("in_bergman is invariant under the lineality direction and symmetry") {
  auto m = k4_matroid();
  auto cs = circuits(m);
  // symmetry of K4: permuting vertices 1<->2 permutes edges (12)(13 23)(14 24)(34)
  std::vector<int> p{0, 3, 4, 1, 2, 5};
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    QVec w(6);
    for (auto& x : w) x = qof(int(rng() % 11) - 5, 1 + rng() % 3);
    bool b = in_bergman(w, cs);
    QVec shifted = w;
    for (auto& x : shifted) x += qof(3, 2);
    CHECK(in_bergman(shifted, cs) == b);
    QVec perm(6);
    for (int i = 0; i < 6; ++i) perm[p[i]] = w[i];
    CHECK(in_bergman(perm, cs) == b);
    CHECK(in_bergman_flats(m, w) == b);
  }
}

TEST_CASE("flat-based membership equals circuit membership on a bigger example") {
  // U_{2,4} plus a parallel pair: exercises loops of the level-set logic
  VectorMatroid m({"a", "b", "c", "d", "e"}, {{1, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 0}});
  auto cs = circuits(m);
  std::mt19937 rng(11);
  for (int t = 0; t < 300; ++t) {
    QVec w(5);
    for (auto& x : w) x = qof(int(rng() % 9) - 4, 1 + rng() % 2);
    CHECK(in_bergman(w, cs) == in_bergman_flats(m, w));
  }
}

TEST_CASE("K4 flats and connected flats") {
  auto m = k4_matroid();
  auto flats = all_flats(m);
  REQUIRE(flats.size() == 4);  // ranks 0..3
  CHECK(flats[0].size() == 1);
  CHECK(flats[1].size() == 6);
  CHECK(flats[2].size() == 7);  // 4 triangles + 3 matchings
  CHECK(flats[3].size() == 1);
  int connected2 = 0;
  for (Mask f : flats[2])
    if (flat_connected(m, f)) ++connected2;
  CHECK(connected2 == 4);
}

TEST_CASE("coarse Bergman fan of K4 is the cone over the Petersen graph") {
  auto m = k4_matroid();
  auto fan = enumerate_bergman(m, {}, 2);
  REQUIRE(fan.f_vector.size() == 3);
  CHECK(fan.f_vector[1] == 10);
  CHECK(fan.f_vector[2] == 15);
  // link graph: rays as nodes, 2-cones as edges
  SmallGraph g(10);
  for (auto& c : fan.cones_by_dim[0]) g.add_edge(c[0], c[1]);
  CHECK(isomorphic(g, petersen_graph()));
  // by construction every maximal cone's barycenter is a member
  auto cs = circuits(m);
  for (auto& c : fan.cones_by_dim[0]) {
    QVec w(m.size(), Q(0));
    for (int i : c)
      for (size_t e = 0; e < m.size(); ++e) w[e] += fan.rays[i][e];
    CHECK(in_bergman(w, cs));
  }
}

TEST_CASE("enumeration agrees with the nested-set oracle and uses symmetry correctly") {
  auto m = k4_matroid();
  auto oracle = bergman_f_vector_nested(m, 2);
  REQUIRE(oracle.size() == 3);
  CHECK(oracle[1] == 10);
  CHECK(oracle[2] == 15);

  // symmetry: vertex swap 1<->2 of K4 as an edge permutation
  std::vector<std::vector<int>> sym{{0, 3, 4, 1, 2, 5}};
  auto fan_sym = enumerate_bergman(m, sym, 2);
  auto fan_plain = enumerate_bergman(m, {}, 2);
  CHECK(fan_sym.f_vector == fan_plain.f_vector);
  CHECK(fan_sym.cones_by_dim == fan_plain.cones_by_dim);
  CHECK(fan_sym.orbit_counts[2] <= fan_plain.orbit_counts[2]);
}

TEST_CASE("fine structure of K4 subdivides three Petersen edges") {
  auto f = bergman_f_vector_fine(k4_matroid(), 2);
  REQUIRE(f.size() == 3);
  CHECK(f[1] == 13);
  CHECK(f[2] == 18);
}

TEST_CASE("E7 circuit sampling: sizes range over 3..8") {
  auto m = root_matroid(7);
  CHECK(m.rank() == 7);
  // no parallel pairs: every 2-subset independent, so circuits have size >= 3;
  // circuits have size <= rank+1 = 8 always
  auto pos = roots(7);
  for (size_t i = 0; i < pos.size(); ++i)
    for (size_t j = i + 1; j < pos.size(); ++j)
      CHECK(m.ranker.rank_of((Mask(1) << i) | (Mask(1) << j)) == 2);

  // find circuits of each cardinality 3..8 by seeded random dependent sets
  std::set<size_t> sizes_found;
  std::mt19937 rng(2026);
  for (int t = 0; t < 4000 && sizes_found.size() < 6; ++t) {
    Mask s = 0;
    int want = 3 + int(rng() % 6);
    while (popcount(s) < want + 2) s |= Mask(1) << (rng() % 63);
    if (m.ranker.rank_of(s) == popcount(s)) continue;
    auto c = circuit_within(m, s);
    CHECK(c.size() >= 3);
    CHECK(c.size() <= 8);
    sizes_found.insert(c.size());
  }
  CHECK(sizes_found == std::set<size_t>{3, 4, 5, 6, 7, 8});
}

TEST_CASE("E6 root matroid has 750 connected proper flats (the Bergman rays)") {
  auto m = root_matroid(6);
  auto flats = all_flats(m);
  long connected = 0;
  std::vector<long> per_rank;
  for (int r = 1; r < (int)flats.size() - 1; ++r) {
    long c = 0;
    for (Mask f : flats[r])
      if (flat_connected(m, f)) ++c;
    per_rank.push_back(c);
    connected += c;
  }
  CHECK(per_rank == std::vector<long>{36, 120, 270, 261, 63});
  CHECK(connected == 750);
}
