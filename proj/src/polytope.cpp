#include "poslab/polytope.hpp"

#include <algorithm>
#include <map>

namespace poslab {

namespace {

using Ineq = std::pair<QVec, Rational>;  // <m, v> >= -a

// Collapses parallel copies of an inequality to the tightest one, rescaling
// offsets so normals are primitive. Returns nullopt if a zero normal proves
// infeasibility.
std::optional<std::vector<Ineq>> dedup(const std::vector<Ineq>& ineqs) {
  std::vector<Ineq> out;
  for (const auto& [v, a] : ineqs) {
    QVec u = primitive(v);
    bool zero = true;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (u(i) != 0) zero = false;
    if (zero) {
      if (a < 0) return std::nullopt;  // 0 >= -a fails
      continue;
    }
    Eigen::Index j = 0;
    while (v(j) == 0) ++j;
    Rational s = u(j) / v(j);  // positive
    Rational an = a * s;
    bool merged = false;
    for (auto& [w, b] : out) {
      if (vec_eq(w, u)) {
        b = std::min(b, an);
        merged = true;
        break;
      }
    }
    if (!merged) out.emplace_back(u, an);
  }
  return out;
}

// Substitute the equality of inequality k into the others, eliminating
// coordinate j (v_k(j) != 0). Result lives in dimension d-1.
std::vector<Ineq> facet_system(const std::vector<Ineq>& ineqs, size_t k, Eigen::Index j) {
  const QVec& v = ineqs[k].first;
  const Rational& a = ineqs[k].second;
  std::vector<Ineq> sub;
  for (size_t i = 0; i < ineqs.size(); ++i) {
    if (i == k) continue;
    const QVec& w = ineqs[i].first;
    Rational r = w(j) / v(j);
    QVec wn(v.size() - 1);
    Eigen::Index t = 0;
    for (Eigen::Index c = 0; c < v.size(); ++c) {
      if (c == j) continue;
      wn(t++) = w(c) - r * v(c);
    }
    sub.emplace_back(wn, ineqs[i].second - r * a);
  }
  return sub;
}

Rational volume_rec(int d, const std::vector<Ineq>& raw);

// vol_{d-1}(facet k) / ||v_k||, lattice-normalized as d vol / d a_k.
Rational facet_measure_rec(int d, const std::vector<Ineq>& ineqs, size_t k) {
  const QVec& v = ineqs[k].first;
  Eigen::Index j = 0;
  while (v(j) == 0) ++j;
  if (d == 1) {
    // Facet is the single point -a/v; measure 1/|v| if feasible.
    Rational x = -ineqs[k].second / v(0);
    for (size_t i = 0; i < ineqs.size(); ++i) {
      if (i == k) continue;
      if (ineqs[i].first(0) * x < -ineqs[i].second) return Rational(0);
    }
    return Rational(1) / abs(v(0));
  }
  Rational sub = volume_rec(d - 1, facet_system(ineqs, k, j));
  return sub / abs(v(j));
}

Rational volume_rec(int d, const std::vector<Ineq>& raw) {
  auto ded = dedup(raw);
  if (!ded) return Rational(0);
  const std::vector<Ineq>& ineqs = *ded;
  if (d == 1) {
    std::optional<Rational> lo, hi;
    for (const auto& [v, a] : ineqs) {
      Rational bound = -a / v(0);
      if (v(0) > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (!lo || !hi) throw InputError("unbounded polytope");
    Rational len = *hi - *lo;
    return len > 0 ? len : Rational(0);
  }
  Rational total(0);
  for (size_t k = 0; k < ineqs.size(); ++k)
    total += ineqs[k].second * facet_measure_rec(d, ineqs, k);
  return total / d;
}

std::vector<Ineq> to_ineqs(const LatticePolytope& p) {
  std::vector<Ineq> v;
  for (size_t i = 0; i < p.normals().size(); ++i) v.emplace_back(p.normals()[i], p.offsets()[i]);
  return v;
}

QVec cross3(const QVec& a, const QVec& b) {
  QVec c(3);
  c(0) = a(1) * b(2) - a(2) * b(1);
  c(1) = a(2) * b(0) - a(0) * b(2);
  c(2) = a(0) * b(1) - a(1) * b(0);
  return c;
}

}  // namespace

LatticePolytope::LatticePolytope(int dim, std::vector<QVec> normals, std::vector<Rational> offsets)
    : dim_(dim), normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.size() != offsets_.size()) throw InputError("normals/offsets size mismatch");
  for (const auto& v : normals_)
    if (v.size() != dim_) throw InputError("normal dimension mismatch");
}

bool LatticePolytope::bounded() const {
  if (!bounded_cache_) {
    RaySet rec = extremal_rays(cone_from_facets(dim_, normals_));
    bounded_cache_ = rec.rays.empty() && rec.lineality.empty();
  }
  return *bounded_cache_;
}

const std::vector<QVec>& LatticePolytope::vertices() const {
  if (vertex_cache_) return *vertex_cache_;
  std::vector<QVec> verts;
  auto ded = dedup(to_ineqs(*this));
  if (ded) {
    const auto& ineqs = *ded;
    const int m = static_cast<int>(ineqs.size());
    std::vector<int> idx(dim_);
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == dim_) {
        QMat A(dim_, dim_);
        QVec b(dim_);
        for (int i = 0; i < dim_; ++i) {
          A.row(i) = ineqs[idx[i]].first.transpose();
          b(i) = -ineqs[idx[i]].second;
        }
        Eigen::FullPivLU<QMat> lu(A);
        if (lu.rank() != dim_) return;
        QVec x = lu.solve(b);
        for (const auto& [v, a] : ineqs)
          if (v.dot(x) < -a) return;
        for (const auto& w : verts)
          if (vec_eq(w, x)) return;
        verts.push_back(x);
        return;
      }
      for (int i = start; i < m; ++i) {
        idx[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    if (dim_ >= 1) rec(0, 0);
  }
  vertex_cache_ = std::move(verts);
  return *vertex_cache_;
}

bool LatticePolytope::empty() const {
  if (!bounded()) throw InputError("emptiness test on unbounded polytope");
  return vertices().empty();
}

bool LatticePolytope::contains(const QVec& x) const {
  if (x.size() != dim_) throw InputError("point dimension mismatch");
  for (size_t i = 0; i < normals_.size(); ++i)
    if (normals_[i].dot(x) < -offsets_[i]) return false;
  return true;
}

bool LatticePolytope::full_dimensional() const {
  const auto& vs = vertices();
  if (vs.empty()) return false;
  std::vector<QVec> diffs;
  for (size_t i = 1; i < vs.size(); ++i) diffs.push_back(vs[i] - vs[0]);
  return rank_of(diffs, dim_) == dim_;
}

LatticePolytope make_box(const QVec& lo, const QVec& hi) {
  int d = static_cast<int>(lo.size());
  std::vector<QVec> normals;
  std::vector<Rational> offsets;
  for (int i = 0; i < d; ++i) {
    QVec e = QVec::Zero(d);
    e(i) = 1;
    normals.push_back(e);
    offsets.push_back(-lo(i));
    normals.push_back(QVec(-e));
    offsets.push_back(hi(i));
  }
  return LatticePolytope(d, normals, offsets);
}

LatticePolytope make_simplex(int dim, const Rational& c) {
  std::vector<QVec> normals;
  std::vector<Rational> offsets;
  for (int i = 0; i < dim; ++i) {
    QVec e = QVec::Zero(dim);
    e(i) = 1;
    normals.push_back(e);
    offsets.push_back(Rational(0));
  }
  QVec s = QVec::Constant(dim, Rational(-1));
  normals.push_back(s);
  offsets.push_back(c);
  return LatticePolytope(dim, normals, offsets);
}

LatticePolytope empty_polytope(int dim) {
  // box with lo > hi: infeasible but with bounded recession cone
  return make_box(QVec(QVec::Constant(dim, Rational(1))), QVec(QVec::Zero(dim)));
}

Rational polytope_volume(const LatticePolytope& p) {
  if (!p.bounded()) throw InputError("unbounded polytope");
  return volume_rec(p.dim(), to_ineqs(p));
}

std::vector<Rational> facet_measures(const LatticePolytope& p) {
  if (!p.bounded()) throw InputError("unbounded polytope");
  auto ded = dedup(to_ineqs(p));
  std::vector<Rational> out(p.normals().size(), Rational(0));
  if (!ded) return out;
  const auto& ineqs = *ded;
  if (!p.full_dimensional()) return out;  // degenerate: empty facet measures

  std::vector<Rational> fm(ineqs.size());
  for (size_t k = 0; k < ineqs.size(); ++k) fm[k] = facet_measure_rec(p.dim(), ineqs, k);

  std::vector<bool> claimed(ineqs.size(), false);
  for (size_t i = 0; i < p.normals().size(); ++i) {
    QVec u = primitive(p.normals()[i]);
    Eigen::Index j = 0;
    while (j < u.size() && u(j) == 0) ++j;
    if (j == u.size()) continue;  // zero normal
    Rational s = u(j) / p.normals()[i](j);
    Rational an = p.offsets()[i] * s;
    for (size_t k = 0; k < ineqs.size(); ++k) {
      if (claimed[k]) continue;
      if (vec_eq(ineqs[k].first, u) && ineqs[k].second == an) {
        out[i] = s * fm[k];  // chain rule through the primitive rescaling
        claimed[k] = true;
        break;
      }
    }
  }
  return out;
}

LatticePolytope scale_polytope(const LatticePolytope& p, const Rational& t) {
  if (t < 0) throw InputError("negative polytope scale");
  std::vector<Rational> offsets;
  for (const auto& a : p.offsets()) offsets.push_back(a * t);
  return LatticePolytope(p.dim(), p.normals(), offsets);
}

LatticePolytope minkowski_sum(const LatticePolytope& p, const LatticePolytope& q) {
  if (p.dim() != q.dim()) throw InputError("minkowski_sum dimension mismatch");
  const int d = p.dim();
  if (d > 3) throw InputError("minkowski_sum supports dimension <= 3");
  if (!p.bounded() || !q.bounded()) throw InputError("minkowski_sum of unbounded polytope");
  if (p.empty() || q.empty()) return empty_polytope(d);

  // Candidate outer facet directions: summand facet directions, plus edge
  // cross products in dimension 3.
  std::vector<QVec> dirs;
  auto add_dir = [&](const QVec& w) {
    QVec u = primitive(w);
    bool zero = true;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (u(i) != 0) zero = false;
    if (zero) return;
    for (const auto& x : dirs)
      if (vec_eq(x, u)) return;
    dirs.push_back(u);
  };
  for (const auto& v : p.normals()) add_dir(QVec(-v));
  for (const auto& v : q.normals()) add_dir(QVec(-v));
  if (d == 3) {
    auto edges = [&](const LatticePolytope& poly) {
      std::vector<QVec> dirs;
      auto ded = dedup(to_ineqs(poly));
      const auto& ineqs = *ded;
      const auto& vs = poly.vertices();
      std::vector<std::vector<int>> tight(vs.size());
      for (size_t i = 0; i < vs.size(); ++i)
        for (size_t k = 0; k < ineqs.size(); ++k)
          if (ineqs[k].first.dot(vs[i]) == -ineqs[k].second) tight[i].push_back(static_cast<int>(k));
      for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) {
          std::vector<QVec> common;
          for (int k : tight[i])
            if (std::find(tight[j].begin(), tight[j].end(), k) != tight[j].end())
              common.push_back(ineqs[k].first);
          if (rank_of(common, d) == d - 1) dirs.push_back(QVec(vs[j] - vs[i]));
        }
      return dirs;
    };
    for (const auto& ep : edges(p))
      for (const auto& eq : edges(q)) {
        QVec c = cross3(ep, eq);
        add_dir(c);
        add_dir(QVec(-c));
      }
  }

  auto support = [](const LatticePolytope& poly, const QVec& w) {
    const auto& vs = poly.vertices();
    Rational best = w.dot(vs[0]);
    for (const auto& v : vs) best = std::max(best, Rational(w.dot(v)));
    return best;
  };
  std::vector<QVec> normals;
  std::vector<Rational> offsets;
  for (const auto& w : dirs) {
    normals.push_back(QVec(-w));
    offsets.push_back(support(p, w) + support(q, w));
  }
  return LatticePolytope(d, normals, offsets);
}

Rational mixed_volume(const std::vector<LatticePolytope>& ps) {
  const int n = static_cast<int>(ps.size());
  if (n == 0) throw InputError("mixed_volume of no polytopes");
  for (const auto& p : ps) {
    if (p.dim() != n) throw InputError("mixed_volume dimension mismatch");
    if (p.empty()) throw InputError("mixed_volume of empty polytope");
  }
  std::vector<std::optional<LatticePolytope>> sums(static_cast<size_t>(1) << n);
  for (int i = 0; i < n; ++i) sums[static_cast<size_t>(1) << i] = ps[i];
  Rational acc(0);
  mpz_class nfact(1);
  for (int i = 2; i <= n; ++i) nfact *= i;
  for (size_t mask = 1; mask < sums.size(); ++mask) {
    if (!sums[mask]) {
      size_t low = mask & (~mask + 1);
      sums[mask] = minkowski_sum(*sums[mask ^ low], *sums[low]);
    }
    int pop = __builtin_popcountll(mask);
    Rational v = polytope_volume(*sums[mask]);
    acc += ((n - pop) % 2 == 0) ? v : Rational(-v);
  }
  return acc / Rational(nfact);
}

}  // namespace poslab
