#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poslab/cone.hpp"

#include <random>

using namespace poslab;

TEST_CASE("octant is self-dual") {
  std::vector<QVec> gens = {qvec({1, 0, 0}), qvec({0, 1, 0}), qvec({0, 0, 1})};
  auto c = cone_from_generators(3, gens);
  auto d = dual_cone(c);
  CHECK(same_rays(d.generators, gens));
  CHECK(same_rays(d.facets, gens));
}

TEST_CASE("psef cone of Bl1P2 dualizes to the nef cone under the intersection form") {
  // basis (H, E), form H^2=1, E^2=-1, H.E=0
  QMat q(2, 2);
  q << Rational(1), Rational(0), Rational(0), Rational(-1);
  auto psef = cone_from_generators(2, {qvec({0, 1}), qvec({1, -1})});  // E, H-E
  auto dual = dual_cone(psef, q);
  CHECK(same_rays(dual.generators, {qvec({1, 0}), qvec({1, -1})}));  // H, H-E
}

TEST_CASE("extremal rays drop redundant generators") {
  auto c = cone_from_generators(2, {qvec({1, 0}), qvec({1, 1}), qvec({0, 1})});
  auto rs = extremal_rays(c);
  CHECK(rs.pointed());
  CHECK(same_rays(rs.rays, {qvec({1, 0}), qvec({0, 1})}));
}

TEST_CASE("nef cone of F1 from its inequality description") {
  // inequalities b <= 0, a+b >= 0 in basis (H, E): facets -E and H+E under
  // the dual pairing written directly as facet normals.
  auto c = cone_from_facets(2, {qvec({0, -1}), qvec({1, 1})});
  CHECK(same_rays(c.generators, {qvec({1, 0}), qvec({1, -1})}));
}

TEST_CASE("non-pointed cone reports lineality") {
  auto c = cone_from_facets(2, {qvec({1, 0})});  // half-plane
  auto rs = extremal_rays(c);
  CHECK(!rs.pointed());
  CHECK(same_rays(rs.lineality, {qvec({0, 1})}));
}

TEST_CASE("lower-dimensional cone keeps equality facets") {
  auto c = cone_from_generators(2, {qvec({1, 0})});
  CHECK(cone_contains(c, qvec({2, 0})));
  CHECK(!cone_contains(c, qvec({1, 1})));
  CHECK(!cone_contains(c, qvec({-1, 0})));
}

TEST_CASE("pairing dimension mismatch is an input error") {
  auto c = cone_from_generators(2, {qvec({1, 0}), qvec({0, 1})});
  QMat q = QMat::Identity(3, 3);
  CHECK_THROWS_AS(dual_cone(c, q), InputError);
}

TEST_CASE("biduality on random pointed cones") {
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<int> coef(-4, 4);
  int done = 0;
  for (int d = 2; d <= 4; ++d) {
    for (int it = 0; it < 400; ++it) {
      std::vector<QVec> gens;
      int m = 2 + static_cast<int>(rng() % 5);
      for (int k = 0; k < m; ++k) {
        QVec g(d);
        for (int i = 0; i < d; ++i) g(i) = Rational(coef(rng));
        gens.push_back(g);
      }
      auto c = cone_from_generators(d, gens);
      if (!extremal_rays(c).pointed()) continue;
      auto dd = dual_cone(dual_cone(c));
      CHECK(same_cone(c, dd));
      ++done;
    }
  }
  CHECK(done > 300);
}
