#include "poslab/toric.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace poslab {

namespace {

Rational factorial(int n) {
  Rational f(1);
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Smith normal form over the integers: S = P * A * Q with P, Q unimodular.
// Only P is needed here; diag returns the diagonal of S.
struct Snf {
  QMat p;
  QMat pinv;
  std::vector<Rational> diag;
  int rank = 0;
};

Snf smith_normal_form(const QMat& a_in) {
  const Eigen::Index r = a_in.rows(), c = a_in.cols();
  std::vector<std::vector<mpz_class>> a(r, std::vector<mpz_class>(c));
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) {
      if (a_in(i, j).get_den() != 1) throw InputError("ray matrix must be integral");
      a[i][j] = a_in(i, j).get_num();
    }
  std::vector<std::vector<mpz_class>> p(r, std::vector<mpz_class>(r, 0));
  for (Eigen::Index i = 0; i < r; ++i) p[i][i] = 1;

  auto row_sub = [&](Eigen::Index dst, Eigen::Index src, const mpz_class& q) {
    for (Eigen::Index j = 0; j < c; ++j) a[dst][j] -= q * a[src][j];
    for (Eigen::Index j = 0; j < r; ++j) p[dst][j] -= q * p[src][j];
  };
  auto col_sub = [&](Eigen::Index dst, Eigen::Index src, const mpz_class& q) {
    for (Eigen::Index i = 0; i < r; ++i) a[i][dst] -= q * a[i][src];
  };

  Eigen::Index k = 0;
  while (k < r && k < c) {
    // pivot: smallest nonzero absolute value in the trailing block
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = k; i < r; ++i)
      for (Eigen::Index j = k; j < c; ++j)
        if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
    if (pi < 0) break;
    std::swap(a[k], a[pi]);
    std::swap(p[k], p[pi]);
    for (Eigen::Index i = 0; i < r; ++i) std::swap(a[i][k], a[i][pj]);

    bool clean = true;
    for (Eigen::Index i = k + 1; i < r; ++i)
      if (a[i][k] != 0) {
        mpz_class q = a[i][k] / a[k][k];
        row_sub(i, k, q);
        if (a[i][k] != 0) clean = false;
      }
    for (Eigen::Index j = k + 1; j < c; ++j)
      if (a[k][j] != 0) {
        mpz_class q = a[k][j] / a[k][k];
        col_sub(j, k, q);
        if (a[k][j] != 0) clean = false;
      }
    if (clean) ++k;
  }

  Snf out;
  out.rank = static_cast<int>(k);
  out.p = QMat(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) out.p(i, j) = Rational(p[i][j]);
  Eigen::FullPivLU<QMat> lu(out.p);
  out.pinv = lu.inverse();
  for (Eigen::Index i = 0; i < k; ++i) out.diag.push_back(Rational(a[i][i]));
  return out;
}

QMat ray_matrix(const Fan& fan) {
  QMat v(static_cast<Eigen::Index>(fan.rays.size()), fan.dim);
  for (size_t i = 0; i < fan.rays.size(); ++i)
    v.row(static_cast<Eigen::Index>(i)) = fan.rays[i].transpose();
  return v;
}

}  // namespace

ToricVariety::ToricVariety(Fan fan, std::vector<QVec> basis) : fan_(std::move(fan)) {
  validate_fan();
  build_class_map(basis);
  build_walls();

  std::vector<QVec> psef_gens;
  for (int i = 0; i < num_rays(); ++i) psef_gens.push_back(prime_divisor_class(i));
  psef_cone_ = cone_from_generators(rank(), psef_gens);

  std::vector<QVec> nef_facets;
  for (const auto& w : walls_) nef_facets.push_back(w.coords);
  nef_cone_ = cone_from_facets(rank(), nef_facets);
}

void ToricVariety::validate_fan() const {
  const int n = fan_.dim;
  if (n < 1 || n > 3) throw InputError("fan dimension must be 1..3");
  if (fan_.rays.size() < static_cast<size_t>(n + 1)) throw InputError("too few rays");
  for (const auto& v : fan_.rays) {
    if (v.size() != n) throw InputError("ray dimension mismatch");
    if (!is_integer_vec(v) || !vec_eq(v, primitive(v)))
      throw InputError("rays must be primitive integer vectors");
  }
  for (size_t i = 0; i < fan_.rays.size(); ++i)
    for (size_t j = i + 1; j < fan_.rays.size(); ++j)
      if (vec_eq(fan_.rays[i], fan_.rays[j])) throw InputError("duplicate ray");

  if (fan_.max_cones.empty()) throw InputError("fan has no maximal cones");
  for (const auto& cone : fan_.max_cones) {
    if (static_cast<int>(cone.size()) != n) throw InputError("maximal cone is not simplicial");
    std::set<int> uniq(cone.begin(), cone.end());
    if (static_cast<int>(uniq.size()) != n) throw InputError("repeated ray in cone");
    QMat m(n, n);
    for (int j = 0; j < n; ++j) {
      int idx = cone[j];
      if (idx < 0 || idx >= num_rays()) throw InputError("cone ray index out of range");
      m.col(j) = fan_.rays[idx];
    }
    Rational det = Eigen::FullPivLU<QMat>(m).determinant();
    if (det != 1 && det != -1) throw InputError("fan is not smooth (non-unimodular cone)");
  }

  // completeness: every wall of a maximal cone is shared by exactly one other
  std::map<std::vector<int>, int> wall_count;
  for (const auto& cone : fan_.max_cones) {
    for (size_t drop = 0; drop < cone.size(); ++drop) {
      std::vector<int> w;
      for (size_t j = 0; j < cone.size(); ++j)
        if (j != drop) w.push_back(cone[j]);
      std::sort(w.begin(), w.end());
      ++wall_count[w];
    }
  }
  for (const auto& [w, count] : wall_count)
    if (count != 2) throw InputError("fan is not complete (unmatched wall)");
}

void ToricVariety::build_class_map(const std::vector<QVec>& basis) {
  const int r = num_rays(), n = fan_.dim, rk = r - n;
  QMat v = ray_matrix(fan_);  // r x n, column j = pairing of e_j with all rays

  if (!basis.empty()) {
    if (static_cast<int>(basis.size()) != rk)
      throw InputError("class basis must have #rays - dim elements");
    QMat a(r, r);
    a.block(0, 0, r, n) = v;
    for (int k = 0; k < rk; ++k) {
      if (basis[k].size() != r) throw InputError("basis representative has wrong length");
      a.col(n + k) = basis[k];
    }
    Eigen::FullPivLU<QMat> lu(a);
    Rational det = lu.determinant();
    if (det != 1 && det != -1)
      throw InputError("class basis does not complement the character lattice");
    QMat ainv = lu.inverse();
    class_map_ = ainv.block(n, 0, rk, r);
    rep_ = a.block(0, n, r, rk);
  } else {
    Snf snf = smith_normal_form(v);
    if (snf.rank != n) throw InputError("rays do not span the lattice");
    for (const auto& d : snf.diag)
      if (d != 1 && d != -1) throw InputError("class group has torsion");
    class_map_ = snf.p.block(n, 0, rk, r);
    rep_ = snf.pinv.block(0, n, r, rk);
  }
  // rows of the class map kill linear equivalences
  QMat z = class_map_ * v;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      if (z(i, j) != 0) throw InputError("class map inconsistent with ray matrix");
}

void ToricVariety::build_walls() {
  const int n = fan_.dim;
  std::map<std::vector<int>, std::vector<int>> adj;  // wall rays -> cone indices
  for (size_t ci = 0; ci < fan_.max_cones.size(); ++ci) {
    const auto& cone = fan_.max_cones[ci];
    for (size_t drop = 0; drop < cone.size(); ++drop) {
      std::vector<int> w;
      for (size_t j = 0; j < cone.size(); ++j)
        if (j != drop) w.push_back(cone[j]);
      std::sort(w.begin(), w.end());
      adj[w].push_back(static_cast<int>(ci));
    }
  }
  for (const auto& [wall_rays, cones] : adj) {
    int u = -1, up = -1;
    auto other_ray = [&](int ci) {
      for (int idx : fan_.max_cones[ci])
        if (std::find(wall_rays.begin(), wall_rays.end(), idx) == wall_rays.end()) return idx;
      throw InputError("degenerate wall");
    };
    u = other_ray(cones[0]);
    up = other_ray(cones[1]);

    // u' = -u + sum mu_w w across the wall; smoothness forces the -1
    QVec t = QVec::Zero(num_rays());
    t(u) = 1;
    t(up) = 1;
    if (n == 1) {
      if (!vec_eq(fan_.rays[up], QVec(-fan_.rays[u]))) throw InputError("wall relation fails");
    } else {
      QMat m(n, n);
      for (size_t j = 0; j < wall_rays.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = fan_.rays[wall_rays[j]];
      m.col(n - 1) = fan_.rays[u];
      QVec sol = Eigen::FullPivLU<QMat>(m).solve(QVec(fan_.rays[up]));
      if (sol(n - 1) != -1) throw InputError("wall relation fails (fan not convex at wall)");
      for (size_t j = 0; j < wall_rays.size(); ++j) t(wall_rays[j]) = -sol(static_cast<Eigen::Index>(j));
    }
    WallCurve wc;
    wc.ray_indices = wall_rays;
    wc.t = t;
    wc.coords = rep_.transpose() * t;
    walls_.push_back(std::move(wc));
  }
}

void ToricVariety::check_class_dim(const QVec& cls) const {
  if (cls.size() != rank()) throw InputError("class coordinate length mismatch");
}

QVec ToricVariety::class_of(const QVec& ray_coeffs) const {
  if (ray_coeffs.size() != num_rays()) throw InputError("ray coefficient length mismatch");
  return class_map_ * ray_coeffs;
}

QVec ToricVariety::prime_divisor_class(int ray) const {
  if (ray < 0 || ray >= num_rays()) throw InputError("ray index out of range");
  return class_map_.col(ray);
}

QVec ToricVariety::representative(const QVec& cls) const {
  check_class_dim(cls);
  return rep_ * cls;
}

LatticePolytope ToricVariety::section_polytope(const QVec& cls) const {
  QVec a = representative(cls);
  std::vector<Rational> offsets(a.data(), a.data() + a.size());
  return LatticePolytope(fan_.dim, fan_.rays, offsets);
}

Rational ToricVariety::volume(const QVec& cls) const {
  return factorial(fan_.dim) * polytope_volume(section_polytope(cls));
}

bool ToricVariety::is_nef(const QVec& cls) const {
  check_class_dim(cls);
  for (const auto& w : walls_)
    if (w.coords.dot(cls) < 0) return false;
  return true;
}

bool ToricVariety::is_psef(const QVec& cls) const {
  check_class_dim(cls);
  return cone_contains(psef_cone_, cls);
}

bool ToricVariety::is_big(const QVec& cls) const {
  return section_polytope(cls).full_dimensional();
}

QVec ToricVariety::ample_class() const {
  RaySet rs = extremal_rays(nef_cone_);
  QVec a = QVec::Zero(rank());
  for (const auto& r : rs.rays) a += r;
  return a;
}

Rational ToricVariety::intersection_number(const std::vector<QVec>& classes) const {
  if (static_cast<int>(classes.size()) != fan_.dim)
    throw InputError("need exactly dim classes for an intersection number");
  std::vector<LatticePolytope> ps;
  for (const auto& c : classes) {
    if (!is_nef(c)) throw InputError("intersection_number requires nef classes");
    ps.push_back(section_polytope(c));
  }
  return factorial(fan_.dim) * mixed_volume(ps);
}

Rational ToricVariety::intersection_product(const std::vector<QVec>& classes) const {
  const int n = fan_.dim;
  if (static_cast<int>(classes.size()) != n)
    throw InputError("need exactly dim classes for an intersection number");
  QVec amp = ample_class();
  std::vector<QVec> nefpart;
  std::vector<Rational> shift;
  for (const auto& c : classes) {
    check_class_dim(c);
    Rational s(0);
    QVec cur = c;
    for (int tries = 0; !is_nef(cur); ++tries) {
      if (tries > 200) throw InputError("ample shift failed");
      s = (s == 0) ? Rational(1) : s * 2;
      cur = c + s * amp;
    }
    nefpart.push_back(cur);
    shift.push_back(s);
  }
  // expand prod (N_i - s_i A) multilinearly; every term is nef-only
  Rational total(0);
  for (int mask = 0; mask < (1 << n); ++mask) {
    Rational coef(1);
    std::vector<QVec> term;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        term.push_back(nefpart[i]);
      } else {
        coef *= -shift[i];
        term.push_back(amp);
      }
    }
    if (coef == 0) continue;
    total += coef * intersection_number(term);
  }
  return total;
}

QVec ToricVariety::curve_class_of_product(const std::vector<QVec>& classes) const {
  if (static_cast<int>(classes.size()) != fan_.dim - 1)
    throw InputError("curve product needs dim-1 classes");
  QVec out(rank());
  for (int k = 0; k < rank(); ++k) {
    std::vector<QVec> term = classes;
    QVec e = QVec::Zero(rank());
    e(k) = 1;
    term.push_back(e);
    out(k) = intersection_product(term);
  }
  return out;
}

Rational ToricVariety::positive_product_pairing(const QVec& alpha, const QVec& gamma) const {
  check_class_dim(gamma);
  if (!is_big(alpha)) throw DomainError("derivative undefined at volume-zero class");
  QVec c = representative(gamma);
  auto fm = facet_measures(section_polytope(alpha));
  Rational s(0);
  for (int i = 0; i < num_rays(); ++i) s += c(i) * fm[static_cast<size_t>(i)];
  return factorial(fan_.dim - 1) * s;
}

std::pair<Rational, Rational> ToricVariety::one_sided_derivatives(const QVec& alpha,
                                                                  const QVec& gamma) const {
  check_class_dim(alpha);
  check_class_dim(gamma);
  if (!is_big(alpha)) throw DomainError("derivative undefined at volume-zero class");
  const int n = fan_.dim;
  Rational v0 = volume(alpha);

  // vol(alpha + t gamma) is a piecewise polynomial of degree <= n in t; fit
  // the near-zero piece exactly and validate with a spare sample point.
  auto side = [&](int sgn) {
    Rational eps(1, 4);
    for (int attempt = 0; attempt < 64; ++attempt, eps /= 16) {
      std::vector<Rational> ts, vs;
      ts.push_back(Rational(0));
      vs.push_back(v0);
      for (int j = 1; j <= n + 1; ++j) {
        Rational t = Rational(sgn) * eps * Rational(j) / Rational(n + 1);
        ts.push_back(t);
        vs.push_back(volume(QVec(alpha + t * gamma)));
      }
      // fit degree-n polynomial through points 0..n, check point n+1
      QMat vm(n + 1, n + 1);
      QVec rhs(n + 1);
      for (int i = 0; i <= n; ++i) {
        Rational pw(1);
        for (int j = 0; j <= n; ++j) {
          vm(i, j) = pw;
          pw *= ts[static_cast<size_t>(i)];
        }
        rhs(i) = vs[static_cast<size_t>(i)];
      }
      QVec coef = Eigen::FullPivLU<QMat>(vm).solve(rhs);
      Rational check(0), pw(1);
      for (int j = 0; j <= n; ++j) {
        check += coef(j) * pw;
        pw *= ts[static_cast<size_t>(n + 1)];
      }
      if (check == vs[static_cast<size_t>(n + 1)]) return Rational(coef(1));
    }
    throw DomainError("no stable chamber found for the derivative");
  };
  return {side(-1), side(+1)};
}

namespace {

Fan hirzebruch_fan(long a) {
  Fan f;
  f.dim = 2;
  f.rays = {qvec({1, 0}), qvec({0, 1}), qvec({-1, a}), qvec({0, -1})};
  f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  return f;
}

}  // namespace

const std::vector<std::string>& ToricVariety::builtin_names() {
  static const std::vector<std::string> names = {"P1",  "P2",  "P1xP1", "F1",   "F2",
                                                 "F3",  "F4",  "dP6",   "P1^3", "BlP3"};
  return names;
}

ToricVariety ToricVariety::named(const std::string& name) {
  if (name == "P1") {
    Fan f;
    f.dim = 1;
    f.rays = {qvec({1}), qvec({-1})};
    f.max_cones = {{0}, {1}};
    return ToricVariety(f, {qvec({1, 0})});
  }
  if (name == "P2") {
    Fan f;
    f.dim = 2;
    f.rays = {qvec({1, 0}), qvec({0, 1}), qvec({-1, -1})};
    f.max_cones = {{0, 1}, {1, 2}, {2, 0}};
    return ToricVariety(f, {qvec({1, 0, 0})});  // basis H
  }
  if (name == "P1xP1") {
    Fan f;
    f.dim = 2;
    f.rays = {qvec({1, 0}), qvec({-1, 0}), qvec({0, 1}), qvec({0, -1})};
    f.max_cones = {{0, 2}, {2, 1}, {1, 3}, {3, 0}};
    return ToricVariety(f, {qvec({1, 0, 0, 0}), qvec({0, 0, 1, 0})});  // (fiber, fiber)
  }
  if (name == "F1")
    // basis (H, E) of the blown-up plane: H = D1 + D2, E = D2
    return ToricVariety(hirzebruch_fan(1), {qvec({1, 1, 0, 0}), qvec({0, 1, 0, 0})});
  if (name == "F2" || name == "F3" || name == "F4") {
    long a = name[1] - '0';
    // basis (fiber, negative section)
    return ToricVariety(hirzebruch_fan(a), {qvec({1, 0, 0, 0}), qvec({0, 1, 0, 0})});
  }
  if (name == "dP6") {
    Fan f;
    f.dim = 2;
    f.rays = {qvec({1, 0}),  qvec({1, 1}),   qvec({0, 1}),
              qvec({-1, 0}), qvec({-1, -1}), qvec({0, -1})};
    f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}};
    // basis (H, E1, E2, E3) with exceptional rays (1,1), (-1,0), (0,-1)
    return ToricVariety(f, {qvec({1, 1, 0, 0, 0, 1}), qvec({0, 1, 0, 0, 0, 0}),
                            qvec({0, 0, 0, 1, 0, 0}), qvec({0, 0, 0, 0, 0, 1})});
  }
  if (name == "P1^3") {
    Fan f;
    f.dim = 3;
    f.rays = {qvec({1, 0, 0}), qvec({-1, 0, 0}), qvec({0, 1, 0}),
              qvec({0, -1, 0}), qvec({0, 0, 1}), qvec({0, 0, -1})};
    for (int s0 : {0, 1})
      for (int s1 : {2, 3})
        for (int s2 : {4, 5}) f.max_cones.push_back({s0, s1, s2});
    return ToricVariety(f, {qvec({1, 0, 0, 0, 0, 0}), qvec({0, 0, 1, 0, 0, 0}),
                            qvec({0, 0, 0, 0, 1, 0})});
  }
  if (name == "BlP3") {
    Fan f;
    f.dim = 3;
    f.rays = {qvec({1, 0, 0}), qvec({0, 1, 0}), qvec({0, 0, 1}), qvec({-1, -1, -1}),
              qvec({1, 1, 1})};
    f.max_cones = {{3, 0, 1}, {3, 0, 2}, {3, 1, 2}, {4, 0, 1}, {4, 0, 2}, {4, 1, 2}};
    // basis (H, E): H the strict transform of a plane missing the center
    return ToricVariety(f, {qvec({0, 0, 0, 1, 0}), qvec({0, 0, 0, 0, 1})});
  }
  throw InputError("unknown builtin fan: " + name);
}

ToricVariety ToricVariety::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fan file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError(std::string("fan file parse error: ") + e.what());
  }
  if (!j.contains("rays") || !j.contains("max_cones"))
    throw InputError("fan file needs 'rays' and 'max_cones'");
  Fan f;
  for (const auto& row : j["rays"]) {
    std::vector<Rational> coords;
    for (const auto& x : row) coords.push_back(Rational(x.get<long>()));
    f.rays.push_back(qvec(coords));
  }
  if (f.rays.empty()) throw InputError("fan file has no rays");
  f.dim = static_cast<int>(f.rays[0].size());
  for (const auto& row : j["max_cones"]) {
    std::vector<int> cone;
    for (const auto& x : row) cone.push_back(x.get<int>());
    f.max_cones.push_back(cone);
  }
  std::vector<QVec> basis;
  if (j.contains("basis"))
    for (const auto& row : j["basis"]) {
      std::vector<Rational> coords;
      for (const auto& x : row) coords.push_back(Rational(x.get<long>()));
      basis.push_back(qvec(coords));
    }
  return ToricVariety(f, basis);
}

}  // namespace poslab
