#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tropdp/polyhedra.hpp>

using namespace tropdp;

static PolyComplex tropical_line_r2() {
  // standard max-plus tropical line: vertex 0, rays (-1,0), (0,-1), (1,1)
  PolyComplex X;
  X.ambient_dim = 2;
  int v = X.add_vertex(qvec({0, 0}));
  int r1 = X.add_ray(qvec({-1, 0}));
  int r2 = X.add_ray(qvec({0, -1}));
  int r3 = X.add_ray(qvec({1, 1}));
  X.add_cell({0, {v}, {}, 1});
  X.add_cell({1, {v}, {r1}, 1});
  X.add_cell({1, {v}, {r2}, 1});
  X.add_cell({1, {v}, {r3}, 1});
  return X;
}

TEST_CASE("classification of basic cells") {
  PolyComplex X;
  X.ambient_dim = 2;
  int o = X.add_vertex(qvec({0, 0}));
  int e1 = X.add_vertex(qvec({1, 0}));
  int e2 = X.add_vertex(qvec({0, 1}));
  int rx = X.add_ray(qvec({1, 0}));
  int ry = X.add_ray(qvec({0, 1}));

  Cell cone{2, {o}, {rx, ry}, 1};
  CHECK(classify_cell(X, cone) == CellClass::cone);

  Cell flap{2, {o, e1}, {ry}, 1};
  CHECK(classify_cell(X, flap) == CellClass::flap);

  Cell tri{2, {o, e1, e2}, {}, 1};
  CHECK(classify_cell(X, tri) == CellClass::triangle);

  int e3 = X.add_vertex(qvec({1, 1}));
  Cell sq{2, {o, e1, e2, e3}, {}, 1};
  CHECK(classify_cell(X, sq) == CellClass::square);

  Cell mismatch{2, {o, e1}, {}, 1};
  CHECK_THROWS(classify_cell(X, mismatch));
}

TEST_CASE("stats counts cell classes") {
  PolyComplex X;
  X.ambient_dim = 2;
  int o = X.add_vertex(qvec({0, 0}));
  int rx = X.add_ray(qvec({1, 0}));
  int ry = X.add_ray(qvec({0, 1}));
  X.add_cell({0, {o}, {}, 1});
  X.add_cell({1, {o}, {rx}, 1});
  X.add_cell({1, {o}, {ry}, 1});
  X.add_cell({2, {o}, {rx, ry}, 1});
  auto s = stats(X);
  CHECK(s.vertices == 1);
  CHECK(s.rays == 2);
  CHECK(s.cones == 1);
  CHECK(s.bounded_edges == 0);
}

TEST_CASE("balancing of the standard tropical line") {
  auto X = tropical_line_r2();
  CHECK(check_balanced(X));

  // delete one ray: unbalanced with one violation
  PolyComplex Y = X;
  Y.cells.pop_back();
  std::vector<BalanceViolation> viol;
  CHECK_FALSE(check_balanced(Y, &viol));
  CHECK(viol.size() == 1);
}

TEST_CASE("balancing with weights and lattice normalization") {
  // rays (1,0),(0,1),(-1,-1) all weight 1: balanced
  PolyComplex X;
  X.ambient_dim = 2;
  int v = X.add_vertex(qvec({0, 0}));
  X.add_cell({0, {v}, {}, 1});
  X.add_cell({1, {v}, {X.add_ray(qvec({1, 0}))}, 1});
  X.add_cell({1, {v}, {X.add_ray(qvec({0, 1}))}, 1});
  X.add_cell({1, {v}, {X.add_ray(qvec({-1, -1}))}, 1});
  CHECK(check_balanced(X));

  // weight-2 ray against (−1,−2),(−1,0) mix: (2,0)+( -1,-2)+(-1,2)... use
  // rays (1,0) weight 2, (-1,2) and (-1,-2) weight 1: sum = 0
  PolyComplex Y;
  Y.ambient_dim = 2;
  int w = Y.add_vertex(qvec({0, 0}));
  Y.add_cell({0, {w}, {}, 1});
  Y.add_cell({1, {w}, {Y.add_ray(qvec({1, 0}))}, 2});
  Y.add_cell({1, {w}, {Y.add_ray(qvec({-1, 2}))}, 1});
  Y.add_cell({1, {w}, {Y.add_ray(qvec({-1, -2}))}, 1});
  CHECK(check_balanced(Y));
}

TEST_CASE("link at the apex of a cone complex") {
  // fan over a 4-cycle: rays r0..r3, cones between consecutive
  PolyComplex X;
  X.ambient_dim = 3;
  int o = X.add_vertex(qvec({0, 0, 0}));
  std::vector<int> rs;
  rs.push_back(X.add_ray(qvec({1, 0, 0})));
  rs.push_back(X.add_ray(qvec({0, 1, 0})));
  rs.push_back(X.add_ray(qvec({-1, 0, 1})));
  rs.push_back(X.add_ray(qvec({0, -1, 1})));
  X.add_cell({0, {o}, {}, 1});
  for (int i = 0; i < 4; ++i) X.add_cell({1, {o}, {rs[i]}, 1});
  for (int i = 0; i < 4; ++i) X.add_cell({2, {o}, {rs[i], rs[(i + 1) % 4]}, 1});
  auto g = link_at_vertex(X, o);
  CHECK(g.n == 4);
  CHECK(g.edge_count() == 4);
  SmallGraph c4(4);
  c4.add_edge(0, 1);
  c4.add_edge(1, 2);
  c4.add_edge(2, 3);
  c4.add_edge(3, 0);
  CHECK(isomorphic(g, c4));
}

TEST_CASE("JSON round trip preserves the complex") {
  auto X = tropical_line_r2();
  sort_canonical(X);
  auto j = complex_to_json(X);
  auto Y = complex_from_json(nlohmann::json::parse(j.dump()));
  sort_canonical(Y);
  CHECK(X.vertices == Y.vertices);
  CHECK(X.rays == Y.rays);
  CHECK(X.cells.size() == Y.cells.size());
  for (size_t i = 0; i < X.cells.size(); ++i) CHECK(X.cells[i] == Y.cells[i]);
}

TEST_CASE("classification is stable under a unimodular change of coordinates") {
  auto X = tropical_line_r2();
  // apply [[1,1],[0,1]] to everything
  PolyComplex Y = X;
  for (auto& v : Y.vertices) v = QVec{v[0] + v[1], v[1]};
  for (auto& r : Y.rays) r = primitive(QVec{r[0] + r[1], r[1]});
  for (size_t i = 0; i < X.cells.size(); ++i)
    CHECK(classify_cell(X, X.cells[i]) == classify_cell(Y, Y.cells[i]));
  CHECK(check_balanced(Y));
}
