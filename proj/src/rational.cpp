#include "poslab/rational.hpp"

#include <algorithm>
#include <sstream>

namespace poslab {

Rational parse_rational(const std::string& s) {
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InputError("cannot parse rational: '" + s + "'");
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const QVec& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v(i).get_str();
  }
  os << ")";
  return os.str();
}

QVec primitive(const QVec& v) {
  mpz_class den(1);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v(i).get_den().get_mpz_t());
  mpz_class g(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    mpz_class num = v(i).get_num() * (den / v(i).get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  if (g == 0) return v;  // zero vector
  QVec out(v.size());
  Rational scale(den, g);
  scale.canonicalize();
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) * scale;
  return out;
}

bool lex_less(const QVec& a, const QVec& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return a.size() < b.size();
}

bool vec_eq(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

std::vector<QVec> canonical_rays(std::vector<QVec> rays) {
  for (auto& r : rays) r = primitive(r);
  std::sort(rays.begin(), rays.end(), lex_less);
  rays.erase(std::unique(rays.begin(), rays.end(), vec_eq), rays.end());
  return rays;
}

bool same_rays(const std::vector<QVec>& a, const std::vector<QVec>& b) {
  auto ca = canonical_rays(a), cb = canonical_rays(b);
  if (ca.size() != cb.size()) return false;
  for (size_t i = 0; i < ca.size(); ++i)
    if (!vec_eq(ca[i], cb[i])) return false;
  return true;
}

bool is_integer_vec(const QVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i).get_den() != 1) return false;
  return true;
}

}  // namespace poslab
