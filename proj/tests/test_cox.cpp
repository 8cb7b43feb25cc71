#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tropdp/coxideal.hpp>

using namespace tropdp;

TEST_CASE("the five Plucker relations") {
  auto rel = plucker_d5();
  REQUIRE(rel.size() == 5);
  CHECK(rel[0] == parse_trinomial("p12p34 - p13p24 + p14p23"));
  for (const auto& t : rel) CHECK(homogeneous(t, 5));
  // deg(p_ij) = e_i + e_j
  auto g = grade(pvar(1, 2), 5);
  CHECK(g == std::vector<int>{1, 1, 0, 0, 0});
}

TEST_CASE("the 45 degree-4 generators, grouped and graded") {
  auto groups = universal_cox_d4();
  size_t total = 0;
  for (auto& [name, g] : groups) total += g.size();
  CHECK(total == 45);
  REQUIRE(groups.size() == 11);

  // spot checks against the printed lists
  CHECK(groups[1].first == "1");
  CHECK(groups[1].second[0] == parse_trinomial("F23F45 - F24F35 + F25F34"));
  CHECK(groups[6].first == "1'");
  CHECK(groups[6].second[0] == parse_trinomial("p25F12E2 - p35F13E3 + p45F14E4"));

  // all members of one group share the same Z^6 degree; every generator is
  // homogeneous
  for (auto& [name, g] : groups) {
    auto d0 = term_degree(g[0].terms[0], 4);
    for (auto& t : g) {
      CHECK(homogeneous(t, 4));
      CHECK(term_degree(t.terms[0], 4) == d0);
    }
  }
}

TEST_CASE("demicube grading values") {
  CHECK(grade(lvar(Eline(1)), 4) == std::vector<int>{1, 1, 0, 0, 0, 0});
  CHECK(grade(lvar(Gline()), 4) == std::vector<int>{1, 1, 1, 1, 1, 1});
  CHECK(grade(lvar(Fline(1, 2)), 4) == std::vector<int>{1, 0, 0, 1, 1, 1});
}

TEST_CASE("demicube vertices form one W(D5) orbit of size 16") {
  // generators: transpositions of the five a-coordinates and double flips
  using V = std::vector<int>;
  std::vector<std::function<V(const V&)>> gens;
  for (int i = 1; i < 5; ++i)
    gens.push_back([i](const V& v) {
      V w = v;
      std::swap(w[i], w[i + 1]);
      return w;
    });
  gens.push_back([](const V& v) {
    V w = v;
    w[1] = 1 - w[1];
    w[2] = 1 - w[2];
    return w;
  });
  std::function<V(const std::function<V(const V&)>&, const V&)> act =
      [](const std::function<V(const V&)>& g, const V& v) { return g(v); };
  auto orbit = weyl_orbit<V, std::function<V(const V&)>>(gens, V{1, 1, 0, 0, 0, 0}, act);
  CHECK(orbit.size() == 16);
  for (auto& v : orbit) {
    int s = v[1] + v[2] + v[3] + v[4] + v[5];
    CHECK(s % 2 == 1);
  }
}

TEST_CASE("the 270 degree-3 generators") {
  auto seed = cox_d3_seed();
  REQUIRE(seed.size() == 10);
  CHECK(seed[0] ==
        parse_trinomial("(d3-d4)(d1+d3+d4)E2F12 - (d2-d4)(d1+d2+d4)E3F13 + "
                        "(d2-d3)(d1+d2+d3)E4F14"));

  auto sys = universal_cox_d3();
  CHECK(sys.all.size() == 270);
  CHECK(sys.groups.size() == 27);
  for (auto& [L, g] : sys.groups) CHECK(g.size() == 10);

  // the G1 group is exactly the canonicalized seed
  std::set<Trinomial> seedset;
  for (auto& t : seed) seedset.insert(canonicalize(t));
  std::set<Trinomial> g1set(sys.groups[Gline(1)].begin(), sys.groups[Gline(1)].end());
  CHECK(seedset == g1set);

  // support of the group of L is contained in the neighbors of L
  for (auto& [L, g] : sys.groups) {
    auto nb = line_neighbors(3, L);
    std::set<LineLabel> nbset(nb.begin(), nb.end());
    for (auto& t : g)
      for (auto& T : t.terms)
        for (auto& [v, e] : T.mono) CHECK(nbset.count(v.line) == 1);
  }

  // W(E6)-invariance as a set (canonical forms)
  std::set<Trinomial> allset(sys.all.begin(), sys.all.end());
  for (const auto& s : simple_roots(6))
    for (const auto& t : sys.all) CHECK(allset.count(apply_weyl(s, t)) == 1);
}

TEST_CASE("tritangents and the line involution") {
  CHECK(tritangents().size() == 45);
  auto inv = line_involution(Gline(1));
  REQUIRE(inv.size() == 5);
  for (int i = 2; i <= 6; ++i) {
    bool found = false;
    for (auto& [a, b] : inv)
      if ((a == Eline(i) && b == Fline(1, i)) || (a == Fline(1, i) && b == Eline(i))) found = true;
    CHECK(found);
  }
  // for every L, the pairing is a perfect matching on neighbors(L)
  for (const auto& L : lines(3)) {
    auto pairs = line_involution(L);
    auto nb = line_neighbors(3, L);
    std::set<LineLabel> nbset(nb.begin(), nb.end());
    std::set<LineLabel> covered;
    for (auto& [a, b] : pairs) {
      CHECK(nbset.count(a) == 1);
      CHECK(nbset.count(b) == 1);
      covered.insert(a);
      covered.insert(b);
    }
    CHECK(covered.size() == 10);
  }
}

TEST_CASE("the G1 involution fixes the G1 group as a set") {
  auto sys = universal_cox_d3();
  auto inv = line_involution(Gline(1));
  std::map<LineLabel, LineLabel> swap;
  for (auto& [a, b] : inv) {
    swap[a] = b;
    swap[b] = a;
  }
  std::set<Trinomial> g1(sys.groups[Gline(1)].begin(), sys.groups[Gline(1)].end());
  for (const auto& t : g1) {
    Trinomial im = t;
    for (auto& T : im.terms) {
      Monomial m2;
      for (auto& [v, e] : T.mono) m2[lvar(swap.at(v.line))] += e;
      T.mono = std::move(m2);
    }
    CHECK(g1.count(canonicalize(im)) == 1);
  }
}

TEST_CASE("tropical evaluation of the 270 generators") {
  auto sys = universal_cox_d3();
  auto zero_w = [](const CoxVar&) { return Q(0); };
  for (const auto& t : sys.all) CHECK(trop_eval(t, zero_w, trivial_dval));

  // each trinomial uses any one variable in at most one term (oracle by scan),
  // hence w = e_{E2} keeps the minimum attained twice
  for (const auto& t : sys.all)
    for (const auto& [v, e] : t.terms[0].mono) {
      CHECK(t.terms[1].mono.count(v) == 0);
      CHECK(t.terms[2].mono.count(v) == 0);
    }
  auto w_e2 = [](const CoxVar& v) { return v.line == Eline(2) ? Q(1) : Q(0); };
  for (const auto& t : sys.all) CHECK(trop_eval(t, w_e2, trivial_dval));

  // w = e_{E2} - e_{E3} on the first G1 trinomial: valuations (1,-1,0)
  auto w_23 = [](const CoxVar& v) {
    if (v.line == Eline(2)) return Q(1);
    if (v.line == Eline(3)) return Q(-1);
    return Q(0);
  };
  CHECK_FALSE(trop_eval(canonicalize(cox_d3_seed()[0]), w_23, trivial_dval));

  // all 27 Schlafli-cone rays e_L pass on all 270 generators
  for (const auto& L : lines(3)) {
    auto w = [&L](const CoxVar& v) { return v.line == L ? Q(1) : Q(0); };
    for (const auto& t : sys.all) CHECK(trop_eval(t, w, trivial_dval));
  }
}
