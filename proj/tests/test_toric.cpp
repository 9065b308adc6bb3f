#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poslab/toric.hpp"

#include <fstream>
#include <random>

using namespace poslab;

TEST_CASE("P2: both cones are the ray of H, vol(H)=1") {
  auto x = ToricVariety::named("P2");
  CHECK(x.rank() == 1);
  CHECK(same_rays(x.nef_cone().generators, {qvec({1})}));
  CHECK(same_rays(x.psef_cone().generators, {qvec({1})}));
  CHECK(x.volume(qvec({1})) == Rational(1));
  CHECK(polytope_volume(x.section_polytope(qvec({1}))) == Rational(1, 2));
  CHECK(x.intersection_number({qvec({1}), qvec({1})}) == Rational(1));
}

TEST_CASE("P1xP1: volumes and intersection numbers of (a,b) classes") {
  auto x = ToricVariety::named("P1xP1");
  CHECK(x.volume(qvec({2, 2})) == Rational(8));
  CHECK(x.volume(qvec({3, 3})) == Rational(18));
  CHECK(x.volume(qvec({-1, 0})) == Rational(0));  // not effective
  CHECK(x.intersection_number({qvec({3, 3}), qvec({1, 1})}) == Rational(6));
  CHECK(x.intersection_number({qvec({1, 2}), qvec({2, 1})}) == Rational(5));
  CHECK(same_rays(x.nef_cone().generators, {qvec({1, 0}), qvec({0, 1})}));
  CHECK(same_rays(x.psef_cone().generators, {qvec({1, 0}), qvec({0, 1})}));
}

TEST_CASE("F1 cones and numbers in the (H, E) basis") {
  auto x = ToricVariety::named("F1");
  CHECK(same_rays(x.psef_cone().generators, {qvec({0, 1}), qvec({1, -1})}));  // E, H-E
  CHECK(same_rays(x.nef_cone().generators, {qvec({1, 0}), qvec({1, -1})}));   // H, H-E

  CHECK(x.volume(qvec({2, -1})) == Rational(3));  // 2H-E
  CHECK(polytope_volume(x.section_polytope(qvec({2, -1}))) == Rational(3, 2));
  CHECK(x.intersection_number({qvec({2, -1}), qvec({1, -1})}) == Rational(1));
  CHECK(x.intersection_number({qvec({1, 0}), qvec({1, 0})}) == Rational(1));

  // intersection form oracle: (aH+bE).(cH+dE) = ac - bd for nef inputs
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> c(0, 6);
  for (int it = 0; it < 200; ++it) {
    // nef = s(H) + t(H-E)
    long s1 = c(rng), t1 = c(rng), s2 = c(rng), t2 = c(rng);
    QVec a = qvec({s1 + t1, -t1}), b = qvec({s2 + t2, -t2});
    Rational oracle = a(0) * b(0) - a(1) * b(1);
    CHECK(x.intersection_number({a, b}) == oracle);
  }
}

TEST_CASE("F1: H+E is big but not nef, and pairs to zero with E") {
  auto x = ToricVariety::named("F1");
  QVec he = qvec({1, 1});
  CHECK(x.is_big(he));
  CHECK(!x.is_nef(he));
  CHECK(x.is_psef(he));
  CHECK(x.positive_product_pairing(he, qvec({0, 1})) == Rational(0));  // gamma = E
  CHECK(x.positive_product_pairing(he, qvec({1, 0})) == Rational(1));  // gamma = H
  CHECK(x.volume(he) == Rational(1));                                  // P = H
}

TEST_CASE("volume homogeneity vol(t a) = t^n vol(a)") {
  auto x = ToricVariety::named("F1");
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> c(0, 5);
  std::uniform_int_distribution<int> num(1, 7), den(1, 7);
  for (int it = 0; it < 100; ++it) {
    QVec a = qvec({c(rng) + c(rng), -c(rng)});
    Rational t = Rational(num(rng)) / den(rng);
    CHECK(x.volume(QVec(t * a)) == t * t * x.volume(a));
  }
}

TEST_CASE("toric orthogonality: alpha . <alpha^{n-1}> = vol(alpha) for big classes") {
  for (const char* name : {"F1", "F2", "dP6"}) {
    auto x = ToricVariety::named(name);
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> c(0, 4);
    auto psef = extremal_rays(x.psef_cone());
    int done = 0;
    for (int it = 0; it < 300 && done < 120; ++it) {
      QVec a = QVec::Zero(x.rank());
      for (const auto& r : psef.rays) a += Rational(c(rng)) * r;
      if (!x.is_big(a)) continue;
      CHECK(x.positive_product_pairing(a, a) == x.volume(a));
      ++done;
    }
    CHECK(done >= 120);
  }
}

TEST_CASE("positive product pairing is linear in gamma") {
  auto x = ToricVariety::named("dP6");
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> c(-3, 3);
  QVec alpha = qvec({3, -1, -1, -1});  // anticanonical, ample
  REQUIRE(x.is_big(alpha));
  for (int it = 0; it < 100; ++it) {
    QVec g1(4), g2(4);
    for (int i = 0; i < 4; ++i) g1(i) = Rational(c(rng)), g2(i) = Rational(c(rng));
    Rational s = Rational(c(rng)) / 2;
    CHECK(x.positive_product_pairing(alpha, QVec(g1 + s * g2)) ==
          x.positive_product_pairing(alpha, g1) + s * x.positive_product_pairing(alpha, g2));
  }
}

TEST_CASE("one-sided derivatives agree and match the facet-measure pairing") {
  auto x = ToricVariety::named("F1");
  // crossing the nef wall at H along E: vol(H + tE) = 1 for t in [0,1],
  // 1 - t^2 for t < 0 -- C^1 at t = 0
  auto [dl, dr] = x.one_sided_derivatives(qvec({1, 0}), qvec({0, 1}));
  CHECK(dl == Rational(0));
  CHECK(dr == Rational(0));

  auto [dl2, dr2] = x.one_sided_derivatives(qvec({1, Rational(1, 2)}), qvec({1, 0}));
  CHECK(dl2 == Rational(2));  // 2 P.H = 2 H.H
  CHECK(dr2 == Rational(2));
  CHECK(x.positive_product_pairing(qvec({1, Rational(1, 2)}), qvec({1, 0})) == Rational(1));

  std::mt19937_64 rng(25);
  std::uniform_int_distribution<int> c(0, 4), g(-2, 2);
  auto psef = extremal_rays(x.psef_cone());
  int done = 0;
  for (int it = 0; it < 200 && done < 60; ++it) {
    QVec a = QVec::Zero(2);
    for (const auto& r : psef.rays) a += Rational(c(rng)) * r;
    if (!x.is_big(a)) continue;
    QVec gamma = qvec({g(rng), g(rng)});
    auto [l, r] = x.one_sided_derivatives(a, gamma);
    CHECK(l == r);
    CHECK(l == Rational(2) * x.positive_product_pairing(a, gamma));
    ++done;
  }
  CHECK(done >= 60);
}

TEST_CASE("P1^3: cones are the octant and box volumes match") {
  auto x = ToricVariety::named("P1^3");
  std::vector<QVec> oct = {qvec({1, 0, 0}), qvec({0, 1, 0}), qvec({0, 0, 1})};
  CHECK(same_rays(x.nef_cone().generators, oct));
  CHECK(same_rays(x.psef_cone().generators, oct));
  CHECK(x.volume(qvec({2, 2, 2})) == Rational(48));
  CHECK(x.volume(qvec({1, 1, 1})) == Rational(6));
  CHECK(x.intersection_number({qvec({1, 0, 0}), qvec({0, 1, 0}), qvec({0, 0, 1})}) ==
        Rational(1));
  CHECK(x.intersection_number({qvec({2, 2, 2}), qvec({2, 2, 2}), qvec({1, 1, 1})}) ==
        Rational(24));
}

TEST_CASE("blown-up 3-space: cones, intersection table, curve classes") {
  auto x = ToricVariety::named("BlP3");
  CHECK(same_rays(x.psef_cone().generators, {qvec({0, 1}), qvec({1, -1})}));  // E, H-E
  CHECK(same_rays(x.nef_cone().generators, {qvec({1, 0}), qvec({1, -1})}));   // H, H-E

  auto tri = [&](long h1, long e1, long h2, long e2, long h3, long e3) {
    return x.intersection_product({qvec({h1, e1}), qvec({h2, e2}), qvec({h3, e3})});
  };
  CHECK(tri(1, 0, 1, 0, 1, 0) == Rational(1));  // H^3
  CHECK(tri(1, 0, 1, 0, 0, 1) == Rational(0));  // H^2 E
  CHECK(tri(1, 0, 0, 1, 0, 1) == Rational(0));  // H E^2
  CHECK(tri(0, 1, 0, 1, 0, 1) == Rational(1));  // E^3
  CHECK(x.volume(qvec({1, -1})) == Rational(0));
  CHECK(x.volume(qvec({2, -1})) == Rational(7));  // (2H-E)^3 = 8 - 1

  // curve classes of nef products, coordinates dual to (H, E)
  QVec h2 = x.curve_class_of_product({qvec({1, 0}), qvec({1, 0})});
  CHECK(vec_eq(h2, qvec({1, 0})));  // line missing the center
  QVec hme2 = x.curve_class_of_product({qvec({1, -1}), qvec({1, -1})});
  CHECK(vec_eq(hme2, qvec({1, 1})));  // line through the center
  // dual of the psef cone is spanned by exactly these two curve classes
  auto dual = dual_cone(x.psef_cone());
  CHECK(same_rays(dual.generators, {qvec({1, 0}), qvec({1, 1})}));
}

TEST_CASE("dP6 prime divisor classes are the six (-1)-classes") {
  auto x = ToricVariety::named("dP6");
  auto rays = extremal_rays(x.psef_cone());
  std::vector<QVec> expect = {qvec({0, 1, 0, 0}),   qvec({0, 0, 1, 0}),  qvec({0, 0, 0, 1}),
                              qvec({1, -1, -1, 0}), qvec({1, -1, 0, -1}), qvec({1, 0, -1, -1})};
  CHECK(same_rays(rays.rays, expect));
  CHECK(x.volume(qvec({3, -1, -1, -1})) == Rational(6));  // deg dP6
}

TEST_CASE("fan validation rejects bad input") {
  Fan f;
  f.dim = 2;
  f.rays = {qvec({1, 0}), qvec({0, 1}), qvec({-1, -1})};
  f.max_cones = {{0, 1}, {1, 2}};  // missing a cone: not complete
  CHECK_THROWS_AS(ToricVariety{f}, InputError);

  Fan g;
  g.dim = 2;
  g.rays = {qvec({1, 0}), qvec({1, 2}), qvec({-1, -1})};  // cone {0,1} has det 2
  g.max_cones = {{0, 1}, {1, 2}, {2, 0}};
  CHECK_THROWS_AS(ToricVariety{g}, InputError);

  Fan h;
  h.dim = 2;
  h.rays = {qvec({2, 0}), qvec({0, 1}), qvec({-1, -1})};  // non-primitive ray
  h.max_cones = {{0, 1}, {1, 2}, {2, 0}};
  CHECK_THROWS_AS(ToricVariety{h}, InputError);
}

TEST_CASE("json loader round-trips P2 with a default basis") {
  const char* path = "test_fan_p2.json";
  {
    std::ofstream out(path);
    out << R"({"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]})";
  }
  auto x = ToricVariety::from_json_file(path);
  CHECK(x.rank() == 1);
  // SNF basis may differ from H by sign; volume of the psef generator pins it
  auto gens = extremal_rays(x.psef_cone());
  REQUIRE(gens.rays.size() == 1);
  CHECK(x.volume(gens.rays[0]) == Rational(1));
  CHECK_THROWS_AS(ToricVariety::from_json_file("does_not_exist.json"), InputError);
}

TEST_CASE("intersection_number requires nef classes") {
  auto x = ToricVariety::named("F1");
  CHECK_THROWS_AS(x.intersection_number({qvec({1, 1}), qvec({1, 0})}), InputError);
  // but the general product agrees with the form on the same classes
  CHECK(x.intersection_product({qvec({1, 1}), qvec({1, 0})}) == Rational(1));   // (H+E).H
  CHECK(x.intersection_product({qvec({0, 1}), qvec({0, 1})}) == Rational(-1));  // E^2
}
