#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poslab/checks.hpp"

#include <sstream>

using namespace poslab;

TEST_CASE("morse bound on hand cases") {
  auto x = ToricVariety::named("P1xP1");
  auto r = check_morse(x, "P1xP1", qvec({3, 3}), qvec({1, 1}));
  CHECK(r.passed());
  CHECK(r.lhs == "8");
  CHECK(r.rhs == "6");
  CHECK(r.margin == Rational(2));

  // beta = 0 gives equality
  auto eq = check_morse(x, "P1xP1", qvec({3, 3}), qvec({0, 0}));
  CHECK(eq.passed());
  CHECK(eq.margin == Rational(0));

  // the surface equality case
  auto s = Surface::named("F1");
  auto se = check_morse(s, "F1", qvec({2, -1}), qvec({1, -1}));
  CHECK(se.passed());
  CHECK(se.lhs == "1");
  CHECK(se.rhs == "1");
  CHECK(se.margin == Rational(0));

  CHECK_THROWS_AS(check_morse(s, "F1", qvec({1, 1}), qvec({1, -1})), InputError);
}

TEST_CASE("binomial bound is weaker and exact on hand cases") {
  auto x = ToricVariety::named("P1xP1");
  auto r = check_binomial_morse(x, "P1xP1", qvec({3, 3}), qvec({1, 1}));
  CHECK(r.passed());
  CHECK(r.lhs == "8");
  CHECK(r.rhs == "4");  // 18 - 12 - 2

  auto y = ToricVariety::named("P1^3");
  auto r3 = check_binomial_morse(y, "P1^3", qvec({2, 2, 2}), qvec({1, 1, 1}));
  CHECK(r3.passed());
  CHECK(r3.lhs == "6");
  CHECK(r3.margin == Rational(72));  // 6 - (48 - 72 - 36 - 6)

  auto eq = check_binomial_morse(x, "P1xP1", qvec({2, 1}), qvec({0, 0}));
  CHECK(eq.passed());
  CHECK(eq.margin == Rational(0));
}

TEST_CASE("differentiability across the F1 wall and along rays") {
  auto x = ToricVariety::named("F1");
  auto wall = check_differentiability(x, "F1", qvec({1, 0}), qvec({0, 1}));
  CHECK(wall.passed());
  CHECK(wall.rhs == "0");

  auto euler = check_differentiability(x, "F1", qvec({2, 1}), qvec({2, 1}));
  CHECK(euler.passed());

  QVec a(2);
  a << Rational(1), Rational(1) / 2;
  auto chamber = check_differentiability(x, "F1", a, qvec({1, -1}));
  CHECK(chamber.passed());
  CHECK(chamber.rhs == "2");

  // non-big classes are refused, not failed
  auto s = Surface::named("F1");
  auto skip = check_differentiability(s, "F1", qvec({0, 1}), qvec({1, 0}));
  CHECK(skip.verdict == "skip");
}

TEST_CASE("orthogonality on big classes") {
  auto x = ToricVariety::named("F1");
  auto s = Surface::named("F1");
  auto rt = check_orthogonality(x, "F1", qvec({1, 1}));
  auto rs = check_orthogonality(s, "F1", qvec({1, 1}));
  CHECK(rt.passed());
  CHECK(rs.passed());
  CHECK(rt.lhs == "1");
  CHECK(rs.rhs == "1");
  // ample classes reduce to the self-intersection
  CHECK(check_orthogonality(x, "F1", qvec({2, 1})).passed());
  CHECK_THROWS_AS(check_orthogonality(s, "F1", qvec({0, 1})), DomainError);
}

TEST_CASE("concavity inequality after clearing roots") {
  auto s = Surface::named("F1");
  auto r = check_concavity(s, "F1", qvec({1, 0}), qvec({2, -1}));
  CHECK(r.passed());
  CHECK(r.margin == Rational(1));  // (1-(-1))^2 - 3*1

  auto eq = check_concavity(s, "F1", qvec({2, -1}), qvec({2, -1}));
  CHECK(eq.passed());
  CHECK(eq.margin == Rational(0));

  // scaling ray: beta = t alpha gives equality
  auto p2 = Surface::named("P2");
  auto ray = check_concavity(p2, "P2", qvec({2}), qvec({1}));
  CHECK(ray.passed());
  CHECK(ray.margin == Rational(0));
}

TEST_CASE("khovanskii-teissier on rectangles") {
  auto x = ToricVariety::named("P1xP1");
  auto r = check_khovanskii_teissier(x, "P1xP1", qvec({1, 2}), qvec({2, 1}));
  CHECK(r.passed());
  CHECK(r.lhs == "5");
  CHECK(r.margin == Rational(9));  // 25 - 16

  auto eq = check_khovanskii_teissier(x, "P1xP1", qvec({1, 2}), qvec({1, 2}));
  CHECK(eq.passed());
  CHECK(eq.margin == Rational(0));

  auto zero = check_khovanskii_teissier(x, "P1xP1", qvec({1, 2}), qvec({0, 0}));
  CHECK(zero.passed());
  CHECK(zero.margin == Rational(0));
}

TEST_CASE("duality on all builtin surfaces") {
  for (const auto& name : Surface::builtin_names()) {
    auto r = check_duality(Surface::named(name), name);
    CHECK(r.passed());
  }
}

TEST_CASE("duality on toric instances with curve certificates") {
  CHECK(check_duality(ToricVariety::named("P2"), "P2", 10, 1).passed());
  CHECK(check_duality(ToricVariety::named("F1"), "F1", 10, 1).passed());
  CHECK(check_duality(ToricVariety::named("P1^3"), "P1^3", 50, 1).passed());
  CHECK(check_duality(ToricVariety::named("BlP3"), "BlP3", 50, 1).passed());
  // a threefold without declared certificates cannot pass the certificate leg
  auto r = check_duality(ToricVariety::named("P1^3"), "unregistered", 10, 1);
  CHECK(r.verdict == "fail");
  CHECK(r.note.find("no curve certificates") != std::string::npos);
}

TEST_CASE("samplers respect their cones") {
  auto x = ToricVariety::named("dP6");
  auto s = Surface::named("Bl2P2");
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    CHECK(x.is_nef(sample_nef(x, rng)));
    CHECK(x.is_big(sample_big(x, rng)));
    CHECK(s.is_nef(sample_nef(s, rng)));
    CHECK(s.is_big(sample_big(s, rng)));
    QVec d = sample_direction(3, rng);
    CHECK(d.size() == 3);
  }
}

TEST_CASE("batch runner is deterministic and all-green on builtins") {
  auto batch = run_checks("morse", "F1", 50, 7);
  REQUIRE(batch.size() == 50);
  for (const auto& r : batch) {
    CHECK(r.passed());
    CHECK(r.seed == 7);
  }
  auto again = run_checks("morse", "F1", 50, 7);
  for (size_t i = 0; i < batch.size(); ++i) {
    CHECK(batch[i].inputs == again[i].inputs);
    CHECK(batch[i].margin == again[i].margin);
  }

  // surface route forced explicitly
  auto sb = run_checks("orthogonality", "F0", 25, 8, InstanceKind::Surface);
  REQUIRE(sb.size() == 25);
  for (const auto& r : sb) CHECK(r.passed());

  // everything at once; skips allowed, failures not
  for (const auto& r : run_checks("all", "P1xP1", 10, 9)) CHECK(r.verdict != "fail");
  for (const auto& r : run_checks("all", "dP6", 10, 10)) CHECK(r.verdict != "fail");

  CHECK_THROWS_AS(run_checks("nonsense", "F1", 5, 1), InputError);
  CHECK_THROWS_AS(run_checks("morse", "F1", 0, 1), InputError);
  CHECK_THROWS_AS(run_checks("morse", "NotAThing", 5, 1), InputError);
}

TEST_CASE("report serialization") {
  auto batch = run_checks("kt", "P2", 3, 11);
  std::ostringstream js, cs;
  write_reports_json(batch, js);
  write_reports_csv(batch, cs);
  CHECK(js.str().find("khovanskii_teissier") != std::string::npos);
  CHECK(js.str().find("\"verdict\": \"pass\"") != std::string::npos);
  CHECK(cs.str().rfind("theorem,instance,", 0) == 0);
  CHECK(cs.str().find("pass") != std::string::npos);
}
