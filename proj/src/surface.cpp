#include "poslab/surface.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace poslab {

namespace {

// Signature of a symmetric rational matrix by congruence diagonalization.
std::pair<int, int> signature(QMat m) {
  const Eigen::Index n = m.rows();
  int pos = 0, neg = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      // prefer a nonzero diagonal entry to swap in
      for (Eigen::Index i = k + 1; i < n && m(k, k) == 0; ++i)
        if (m(i, i) != 0) {
          m.row(k).swap(m.row(i));
          m.col(k).swap(m.col(i));
        }
    }
    if (m(k, k) == 0) {
      // trailing diagonal all zero: Q(v+w) = 2 Q(v,w) for any nonzero pair
      for (Eigen::Index i = k; i < n && m(k, k) == 0; ++i)
        for (Eigen::Index l = i + 1; l < n && m(k, k) == 0; ++l)
          if (m(i, l) != 0) {
            if (i != k) {
              m.row(k).swap(m.row(i));
              m.col(k).swap(m.col(i));
              l = (l == k) ? i : l;
            }
            m.row(k) += m.row(l);
            m.col(k) += m.col(l);
          }
      if (m(k, k) == 0) continue;  // remaining block is zero
    }
    if (m(k, k) > 0)
      ++pos;
    else
      ++neg;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / m(k, k);
      m.row(i) -= f * m.row(k);
      m.col(i) -= f * m.col(k);
    }
  }
  return {pos, neg};
}

}  // namespace

Surface::Surface(int rank, QMat form, std::vector<QVec> curves, QVec ample, std::string region)
    : rank_(rank),
      form_(std::move(form)),
      curves_(std::move(curves)),
      ample_(std::move(ample)),
      region_(std::move(region)) {
  if (rank_ < 1) throw InputError("rank must be positive");
  if (form_.rows() != rank_ || form_.cols() != rank_)
    throw InputError("intersection form has wrong size");
  for (Eigen::Index i = 0; i < rank_; ++i)
    for (Eigen::Index j = 0; j < rank_; ++j) {
      if (form_(i, j) != form_(j, i)) throw InputError("intersection form not symmetric");
      if (form_(i, j).get_den() != 1) throw InputError("intersection form must be integral");
    }
  auto [pos, neg] = signature(form_);
  if (pos != 1 || neg != rank_ - 1)
    throw InputError("intersection form must have signature (1, rank-1)");
  if (ample_.size() != rank_) throw InputError("ample class has wrong length");
  if (pair(ample_, ample_) <= 0) throw InputError("ample witness has nonpositive square");
  for (const auto& c : curves_) {
    if (c.size() != rank_) throw InputError("curve class has wrong length");
    if (pair(ample_, c) <= 0) throw InputError("ample witness does not pair positively with a curve");
  }
}

void Surface::check_dim(const QVec& a) const {
  if (a.size() != rank_) throw InputError("class coordinate length mismatch");
}

Rational Surface::pair(const QVec& a, const QVec& b) const {
  check_dim(a);
  check_dim(b);
  return a.dot(QVec(form_ * b));
}

bool Surface::is_nef(const QVec& a) const {
  check_dim(a);
  if (pair(a, a) < 0 || pair(a, ample_) < 0) return false;
  for (const auto& c : curves_)
    if (pair(a, c) < 0) return false;
  return true;
}

ZariskiDecomposition Surface::zariski(const QVec& alpha) const {
  check_dim(alpha);
  const int m = static_cast<int>(curves_.size());
  std::set<int> supp;
  QVec p = alpha;
  std::vector<Rational> coeffs;

  for (int iter = 0; iter <= m + 1; ++iter) {
    if (!supp.empty()) {
      std::vector<int> idx(supp.begin(), supp.end());
      const int k = static_cast<int>(idx.size());
      QMat gram(k, k);
      QVec rhs(k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) gram(i, j) = pair(curves_[idx[i]], curves_[idx[j]]);
        rhs(i) = pair(alpha, curves_[idx[i]]);
      }
      // negative definite: leading principal minors alternate in sign
      for (int j = 1; j <= k; ++j) {
        Rational det = Eigen::FullPivLU<QMat>(QMat(gram.topLeftCorner(j, j))).determinant();
        if ((j % 2 == 1 && det >= 0) || (j % 2 == 0 && det <= 0))
          throw DomainError("not pseudoeffective");
      }
      QVec x = Eigen::FullPivLU<QMat>(gram).solve(rhs);
      coeffs.assign(x.data(), x.data() + k);
      p = alpha;
      for (int i = 0; i < k; ++i) p -= x(i) * curves_[idx[i]];
    }
    bool grew = false;
    for (int c = 0; c < m; ++c)
      if (!supp.count(c) && pair(p, curves_[c]) < 0) {
        supp.insert(c);
        grew = true;
      }
    if (!grew) break;
  }

  std::vector<int> idx(supp.begin(), supp.end());
  for (size_t i = 0; i < idx.size(); ++i)
    if (coeffs[i] < 0) throw DomainError("not pseudoeffective");
  if (pair(p, p) < 0 || pair(p, ample_) < 0) throw DomainError("not pseudoeffective");

  ZariskiDecomposition out;
  out.positive = p;
  for (size_t i = 0; i < idx.size(); ++i)
    if (coeffs[i] > 0) out.negative.emplace_back(idx[i], coeffs[i]);
  return out;
}

bool Surface::is_psef(const QVec& a) const {
  try {
    zariski(a);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

Rational Surface::volume(const QVec& alpha) const {
  try {
    auto z = zariski(alpha);
    return pair(z.positive, z.positive);
  } catch (const DomainError&) {
    return Rational(0);
  }
}

QVec Surface::positive_part(const QVec& alpha) const { return zariski(alpha).positive; }

bool Surface::is_big(const QVec& a) const { return volume(a) > 0; }

Rational Surface::derivative(const QVec& alpha, const QVec& gamma) const {
  check_dim(gamma);
  if (!is_big(alpha)) throw DomainError("derivative undefined at volume-zero class");
  return Rational(2) * pair(positive_part(alpha), gamma);
}

std::pair<Rational, Rational> Surface::one_sided_derivatives(const QVec& alpha,
                                                             const QVec& gamma) const {
  check_dim(alpha);
  check_dim(gamma);
  if (!is_big(alpha)) throw DomainError("derivative undefined at volume-zero class");
  Rational v0 = volume(alpha);

  auto side = [&](int sgn) {
    Rational eps(1, 4);
    for (int attempt = 0; attempt < 64; ++attempt, eps /= 16) {
      std::vector<Rational> ts = {Rational(0)};
      std::vector<Rational> vs = {v0};
      for (int j = 1; j <= 3; ++j) {
        Rational t = Rational(sgn) * eps * Rational(j) / Rational(3);
        ts.push_back(t);
        vs.push_back(volume(QVec(alpha + t * gamma)));
      }
      QMat vm(3, 3);
      QVec rhs(3);
      for (int i = 0; i < 3; ++i) {
        vm(i, 0) = 1;
        vm(i, 1) = ts[static_cast<size_t>(i)];
        vm(i, 2) = ts[static_cast<size_t>(i)] * ts[static_cast<size_t>(i)];
        rhs(i) = vs[static_cast<size_t>(i)];
      }
      QVec coef = Eigen::FullPivLU<QMat>(vm).solve(rhs);
      Rational t3 = ts[3];
      if (coef(0) + coef(1) * t3 + coef(2) * t3 * t3 == vs[3]) return Rational(coef(1));
    }
    throw DomainError("no stable chamber found for the derivative");
  };
  return {side(-1), side(+1)};
}

std::vector<int> Surface::nonkahler_divisors(const QVec& alpha) const {
  if (!is_big(alpha)) throw DomainError("non-Kahler locus only defined for big classes");
  QVec p = positive_part(alpha);
  std::vector<int> out;
  for (size_t c = 0; c < curves_.size(); ++c)
    if (pair(p, curves_[c]) == 0) out.push_back(static_cast<int>(c));
  return out;
}

RationalCone Surface::psef_cone() const {
  std::vector<QVec> gens = curves_;
  gens.push_back(ample_);
  return cone_from_generators(rank_, gens);
}

RationalCone Surface::nef_cone() const { return dual_cone(psef_cone(), form_); }

ApproxZariskiReport Surface::approximate_zariski_experiment(
    const QVec& alpha, const std::vector<Rational>& eps) const {
  auto z = zariski(alpha);
  if (pair(z.positive, z.positive) <= 0) throw DomainError("experiment needs a big class");
  QVec n_part = alpha - z.positive;

  // smallest integer multiple of the ample witness dominating alpha
  QVec h;
  bool found = false;
  for (long c = 1; c <= 1 << 20 && !found; c *= 2) {
    h = Rational(c) * ample_;
    if (is_nef(QVec(h - alpha))) found = true;
  }
  if (!found) throw InputError("no bounding nef multiple of the ample witness");

  ApproxZariskiReport rep;
  rep.h = h;
  std::vector<QVec> cls = {z.positive, h, QVec(h - alpha)};
  Rational c(1);
  for (const auto& a : cls)
    for (const auto& b : cls) c = std::max(c, Rational(abs(pair(a, b))));
  rep.c = Rational(8) * c;

  Rational vol = pair(z.positive, z.positive);
  for (const auto& e : eps) {
    if (e < 0 || e > 1) throw InputError("perturbation must lie in [0,1]");
    QVec pj = (Rational(1) - e) * z.positive;
    QVec ej = n_part + e * z.positive;
    ApproxZariskiRow row;
    row.eps = e;
    row.pe = pair(pj, ej);
    row.gap = vol - pair(pj, pj);
    row.ok = row.pe * row.pe <= rep.c * row.gap;  // (4C/n^2) with n = 2
    rep.rows.push_back(row);
  }
  return rep;
}

const std::vector<std::string>& Surface::builtin_names() {
  static const std::vector<std::string> names = {"P2", "F0", "F1", "F2",
                                                 "F3", "F4", "Bl2P2", "dP6"};
  return names;
}

namespace {

QMat qmat(int n, std::initializer_list<long> xs) {
  QMat m(n, n);
  auto it = xs.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Rational(*it++);
  return m;
}

Surface hirzebruch_surface(long a) {
  // basis (fiber, negative section)
  return Surface(2, qmat(2, {0, 1, 1, -a}), {qvec({0, 1}), qvec({1, 0})},
                 qvec({a + 1, 1}), "whole psef cone");
}

}  // namespace

Surface Surface::named(const std::string& name) {
  if (name == "P2")
    return Surface(1, qmat(1, {1}), {}, qvec({1}), "whole psef cone");
  if (name == "F0")
    return Surface(2, qmat(2, {0, 1, 1, 0}), {qvec({1, 0}), qvec({0, 1})}, qvec({1, 1}),
                   "whole psef cone");
  if (name == "F1")
    // basis (H, E) of the blown-up plane
    return Surface(2, qmat(2, {1, 0, 0, -1}), {qvec({0, 1}), qvec({1, -1})}, qvec({2, -1}),
                   "whole psef cone");
  if (name == "F2" || name == "F3" || name == "F4") return hirzebruch_surface(name[1] - '0');
  if (name == "Bl2P2")
    return Surface(3, qmat(3, {1, 0, 0, 0, -1, 0, 0, 0, -1}),
                   {qvec({0, 1, 0}), qvec({0, 0, 1}), qvec({1, -1, -1})}, qvec({3, -1, -1}),
                   "whole psef cone");
  if (name == "dP6")
    return Surface(4, qmat(4, {1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1}),
                   {qvec({0, 1, 0, 0}), qvec({0, 0, 1, 0}), qvec({0, 0, 0, 1}),
                    qvec({1, -1, -1, 0}), qvec({1, -1, 0, -1}), qvec({1, 0, -1, -1})},
                   qvec({3, -1, -1, -1}), "whole psef cone");
  throw InputError("unknown builtin surface: " + name);
}

Surface Surface::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open surface file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError(std::string("surface file parse error: ") + e.what());
  }
  for (const char* key : {"rank", "Q", "curves", "ample"})
    if (!j.contains(key)) throw InputError(std::string("surface file needs '") + key + "'");
  int rank = j["rank"].get<int>();
  if (rank < 1) throw InputError("rank must be positive");
  QMat q(rank, rank);
  const auto& qj = j["Q"];
  if (!qj.is_array() || qj.empty()) throw InputError("Q must be an array");
  if (qj[0].is_array()) {
    if (static_cast<int>(qj.size()) != rank) throw InputError("Q has wrong size");
    for (int i = 0; i < rank; ++i)
      for (int k = 0; k < rank; ++k) q(i, k) = Rational(qj[i][k].get<long>());
  } else {
    if (static_cast<int>(qj.size()) != rank * rank) throw InputError("Q has wrong size");
    for (int i = 0; i < rank; ++i)
      for (int k = 0; k < rank; ++k) q(i, k) = Rational(qj[i * rank + k].get<long>());
  }
  auto read_vec = [](const nlohmann::json& row) {
    std::vector<Rational> xs;
    for (const auto& x : row)
      xs.push_back(x.is_string() ? parse_rational(x.get<std::string>())
                                 : Rational(x.get<long>()));
    return qvec(xs);
  };
  std::vector<QVec> curves;
  for (const auto& row : j["curves"]) curves.push_back(read_vec(row));
  QVec ample = read_vec(j["ample"]);
  std::string region = j.value("region", std::string());
  return Surface(rank, q, curves, ample, region);
}

}  // namespace poslab
