#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poslab/polytope.hpp"

#include <random>

using namespace poslab;

namespace {

// Independent 2D oracle: vertex enumeration + shoelace over an angular sort.
Rational shoelace_area(const LatticePolytope& p) {
  auto vs = p.vertices();
  if (vs.size() < 3) return Rational(0);
  QVec c = QVec::Zero(2);
  for (const auto& v : vs) c += v;
  c /= Rational(static_cast<long>(vs.size()));
  std::sort(vs.begin(), vs.end(), [&](const QVec& a, const QVec& b) {
    auto half = [&](const QVec& x) {
      QVec d = x - c;
      return (d(1) < 0 || (d(1) == 0 && d(0) < 0)) ? 1 : 0;
    };
    if (half(a) != half(b)) return half(a) < half(b);
    QVec da = a - c, db = b - c;
    return da(0) * db(1) - da(1) * db(0) > 0;
  });
  Rational area(0);
  for (size_t i = 0; i < vs.size(); ++i) {
    const QVec& a = vs[i];
    const QVec& b = vs[(i + 1) % vs.size()];
    area += a(0) * b(1) - a(1) * b(0);
  }
  return abs(area) / 2;
}

LatticePolytope random_poly2(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> off(0, 4);
  std::vector<QVec> normals;
  std::vector<Rational> offsets;
  // bounding box keeps everything bounded
  auto box = make_box(qvec({-5, -5}), qvec({5, 5}));
  normals = box.normals();
  offsets = box.offsets();
  int extra = 1 + static_cast<int>(rng() % 5);
  for (int i = 0; i < extra; ++i) {
    QVec v(2);
    v(0) = Rational(coef(rng));
    v(1) = Rational(coef(rng));
    normals.push_back(v);
    offsets.push_back(Rational(off(rng)));
  }
  return LatticePolytope(2, normals, offsets);
}

}  // namespace

TEST_CASE("unit simplex and boxes") {
  CHECK(polytope_volume(make_simplex(2, 1)) == Rational(1, 2));
  CHECK(polytope_volume(make_box(qvec({0, 0}), qvec({3, 3}))) == Rational(9));
  CHECK(polytope_volume(make_simplex(3, 2)) == Rational(4, 3));
}

TEST_CASE("truncated simplex of 2H-E on Bl1P2 has area 3/2") {
  // {x>=0, y>=1, y-x>=0, y<=2}: translate of the corner-cut triangle
  LatticePolytope p(2, {qvec({1, 0}), qvec({0, 1}), qvec({-1, 1}), qvec({0, -1})},
                    {Rational(0), Rational(-1), Rational(0), Rational(2)});
  CHECK(polytope_volume(p) == Rational(3, 2));
  CHECK(Rational(2) * polytope_volume(p) == Rational(3));  // vol(2H-E)
}

TEST_CASE("degenerate polytopes have volume zero") {
  LatticePolytope seg(2, {qvec({1, 0}), qvec({-1, 0}), qvec({0, 1}), qvec({0, -1})},
                      {Rational(0), Rational(3), Rational(0), Rational(0)});
  CHECK(polytope_volume(seg) == Rational(0));
  CHECK(polytope_volume(empty_polytope(2)) == Rational(0));
  CHECK(empty_polytope(3).empty());
}

TEST_CASE("unbounded input is rejected") {
  LatticePolytope half(2, {qvec({1, 0})}, {Rational(0)});
  CHECK(!half.bounded());
  CHECK_THROWS_AS(polytope_volume(half), InputError);
}

TEST_CASE("facet measures of the unit square are all 1") {
  auto sq = make_box(qvec({0, 0}), qvec({1, 1}));
  for (const auto& fm : facet_measures(sq)) CHECK(fm == Rational(1));
}

TEST_CASE("slanted facet of the size-3 simplex has measure 3") {
  auto s = make_simplex(2, 3);
  auto fm = facet_measures(s);
  CHECK(fm[2] == Rational(3));
  CHECK(fm[0] == Rational(3));
  CHECK(fm[1] == Rational(3));
}

TEST_CASE("volume agrees with the shoelace oracle on random 2D polytopes") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 300; ++it) {
    auto p = random_poly2(rng);
    CHECK(polytope_volume(p) == shoelace_area(p));
  }
}

TEST_CASE("Euler identity sum a_i fm_i = n vol on random polytopes") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 300; ++it) {
    auto p = random_poly2(rng);
    auto fm = facet_measures(p);
    Rational s(0);
    for (size_t i = 0; i < fm.size(); ++i) s += p.offsets()[i] * fm[i];
    CHECK(s == Rational(2) * polytope_volume(p));
  }
}

TEST_CASE("facet measures are exact derivatives inside a chamber") {
  std::mt19937_64 rng(9);
  Rational h(1, 1024);
  int checked = 0;
  for (int it = 0; it < 60 && checked < 40; ++it) {
    auto p = random_poly2(rng);
    if (!p.full_dimensional()) continue;
    auto fm = facet_measures(p);
    for (size_t i = 0; i < fm.size(); ++i) {
      if (fm[i] == 0) continue;
      auto offs = p.offsets();
      offs[i] += h;
      Rational vp = polytope_volume(LatticePolytope(2, p.normals(), offs));
      offs[i] -= 2 * h;
      Rational vm = polytope_volume(LatticePolytope(2, p.normals(), offs));
      // central difference of a piecewise quadratic brackets the derivative
      Rational cd = (vp - vm) / (2 * h);
      Rational lo = std::min(cd, fm[i]), hi = std::max(cd, fm[i]);
      CHECK(hi - lo <= h * 8);  // curvature bound at this scale
      ++checked;
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("mixed volume: diagonal, rectangles, and Alexandrov-Fenchel") {
  auto sq = make_box(qvec({0, 0}), qvec({1, 1}));
  CHECK(mixed_volume({sq, sq}) == Rational(1));

  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> side(1, 5);
  for (int it = 0; it < 100; ++it) {
    long a = side(rng), b = side(rng), c = side(rng), d = side(rng);
    auto p = make_box(qvec({0, 0}), qvec({a, b}));
    auto q = make_box(qvec({0, 0}), qvec({c, d}));
    CHECK(mixed_volume({p, q}) == Rational(a * d + b * c) / 2);
  }
  for (int it = 0; it < 100; ++it) {
    auto p = random_poly2(rng);
    auto q = random_poly2(rng);
    if (p.empty() || q.empty()) continue;
    Rational vpq = mixed_volume({p, q});
    CHECK(vpq * vpq >= polytope_volume(p) * polytope_volume(q));
  }
}

TEST_CASE("mixed volume symmetry and multilinearity in 3D") {
  auto box = [](long a, long b, long c) { return make_box(qvec({0, 0, 0}), qvec({a, b, c})); };
  auto p = box(1, 2, 1);
  auto q = box(2, 1, 1);
  auto r = box(1, 1, 3);
  CHECK(mixed_volume({p, q, r}) == mixed_volume({r, p, q}));
  CHECK(mixed_volume({p, p, p}) == polytope_volume(p));
  // multilinearity under Minkowski sum in the first slot
  auto pq = minkowski_sum(p, q);
  CHECK(mixed_volume({pq, r, r}) == mixed_volume({p, r, r}) + mixed_volume({q, r, r}));
  // and under rational scaling
  CHECK(mixed_volume({scale_polytope(p, Rational(3, 2)), q, r}) ==
        Rational(3, 2) * mixed_volume({p, q, r}));
}

TEST_CASE("mixed volume input validation") {
  auto sq = make_box(qvec({0, 0}), qvec({1, 1}));
  auto cube = make_box(qvec({0, 0, 0}), qvec({1, 1, 1}));
  CHECK_THROWS_AS(mixed_volume({sq, cube}), InputError);
  CHECK_THROWS_AS(mixed_volume({sq, empty_polytope(2)}), InputError);
}

TEST_CASE("volume independent of inequality order") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 50; ++it) {
    auto p = random_poly2(rng);
    auto normals = p.normals();
    auto offsets = p.offsets();
    std::vector<size_t> perm(normals.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<QVec> n2;
    std::vector<Rational> o2;
    for (size_t i : perm) {
      n2.push_back(normals[i]);
      o2.push_back(offsets[i]);
    }
    CHECK(polytope_volume(LatticePolytope(2, n2, o2)) == polytope_volume(p));
  }
}
