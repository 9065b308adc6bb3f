#include "poslab/cone.hpp"

#include <algorithm>

namespace poslab {

namespace {

QMat rows_matrix(const std::vector<QVec>& vecs, int dim) {
  QMat m(static_cast<Eigen::Index>(vecs.size()), dim);
  for (size_t i = 0; i < vecs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = vecs[i].transpose();
  return m;
}

// Visits all k-subsets of {0..m-1}.
template <typename F>
void for_each_subset(int m, int k, F&& fn) {
  if (k < 0 || k > m) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void push_unique(std::vector<QVec>& out, const QVec& v) {
  for (const auto& w : out)
    if (vec_eq(w, v)) return;
  out.push_back(v);
}

// Kernel directions of the span of a (d-1)-rank subset; empty subsets in d=1
// give the full line.
std::vector<QVec> one_dim_kernel(const std::vector<QVec>& sub, int dim) {
  if (sub.empty()) {
    if (dim != 1) return {};
    QVec e(1);
    e(0) = 1;
    return {e};
  }
  QMat m = rows_matrix(sub, dim);
  Eigen::FullPivLU<QMat> lu(m);
  if (lu.rank() != dim - 1) return {};
  QMat k = lu.kernel();
  return {primitive(QVec(k.col(0)))};
}

}  // namespace

int rank_of(const std::vector<QVec>& vecs, int dim) {
  if (vecs.empty()) return 0;
  Eigen::FullPivLU<QMat> lu(rows_matrix(vecs, dim));
  return static_cast<int>(lu.rank());
}

std::vector<QVec> orthogonal_complement(int dim, const std::vector<QVec>& vecs) {
  if (vecs.empty()) {
    std::vector<QVec> basis;
    for (int i = 0; i < dim; ++i) {
      QVec e = QVec::Zero(dim);
      e(i) = 1;
      basis.push_back(e);
    }
    return basis;
  }
  Eigen::FullPivLU<QMat> lu(rows_matrix(vecs, dim));
  if (lu.rank() == dim) return {};
  QMat k = lu.kernel();
  std::vector<QVec> basis;
  for (Eigen::Index j = 0; j < k.cols(); ++j) basis.push_back(primitive(QVec(k.col(j))));
  return basis;
}

namespace {

std::vector<QVec> facets_from_generators(int dim, const std::vector<QVec>& gens) {
  std::vector<QVec> pool = gens;
  for (const auto& c : orthogonal_complement(dim, gens)) pool.push_back(c);
  const int rg = rank_of(gens, dim);

  std::vector<QVec> cands;
  auto consider = [&](const QVec& w) {
    bool pos = true, neg = true;
    for (const auto& g : gens) {
      Rational s = w.dot(g);
      if (s < 0) pos = false;
      if (s > 0) neg = false;
    }
    if (pos) push_unique(cands, w);
    if (neg) push_unique(cands, QVec(-w));
  };
  for_each_subset(static_cast<int>(pool.size()), dim - 1, [&](const std::vector<int>& idx) {
    std::vector<QVec> sub;
    for (int i : idx) sub.push_back(pool[i]);
    for (const auto& w : one_dim_kernel(sub, dim)) consider(w);
  });
  if (dim == 1) {
    QVec e(1);
    e(0) = 1;
    consider(e);
  }

  // A candidate is a real facet when its tight set has rank rg-1; pairs
  // {w,-w} valid simultaneously are the equality facets of a low-dim cone.
  std::vector<QVec> facets;
  for (const auto& w : cands) {
    std::vector<QVec> tight;
    for (const auto& g : gens)
      if (w.dot(g) == 0) tight.push_back(g);
    int rt = rank_of(tight, dim);
    bool equality = false;
    for (const auto& u : cands)
      if (vec_eq(u, QVec(-w))) equality = true;
    if ((equality && rt == rg) || rt == rg - 1) push_unique(facets, w);
  }
  return canonical_rays(facets);
}

RaySet rays_from_facets(int dim, const std::vector<QVec>& facets) {
  RaySet out;
  out.lineality = orthogonal_complement(dim, facets);
  if (!out.lineality.empty()) {
    // Quotient by the lineality space: rays of the pointed slice in the
    // orthogonal complement, lifted back.
    std::vector<QVec> comp = orthogonal_complement(dim, out.lineality);
    if (comp.empty()) return out;  // whole space
    const int k = static_cast<int>(comp.size());
    QMat b(dim, k);
    for (int j = 0; j < k; ++j) b.col(j) = comp[j];
    std::vector<QVec> reduced;
    for (const auto& f : facets) reduced.push_back(QVec(b.transpose() * f));
    RaySet slice = rays_from_facets(k, reduced);
    for (const auto& r : slice.rays) out.rays.push_back(primitive(QVec(b * r)));
    out.rays = canonical_rays(out.rays);
    return out;
  }

  std::vector<QVec> rays;
  auto consider = [&](const QVec& r) {
    bool pos = true, neg = true;
    for (const auto& f : facets) {
      Rational s = f.dot(r);
      if (s < 0) pos = false;
      if (s > 0) neg = false;
    }
    if (pos)
      push_unique(rays, r);
    else if (neg)
      push_unique(rays, QVec(-r));
  };
  for_each_subset(static_cast<int>(facets.size()), dim - 1, [&](const std::vector<int>& idx) {
    std::vector<QVec> sub;
    for (int i : idx) sub.push_back(facets[i]);
    for (const auto& r : one_dim_kernel(sub, dim)) consider(r);
  });
  out.rays = canonical_rays(rays);
  return out;
}

}  // namespace

RationalCone cone_from_generators(int dim, std::vector<QVec> generators) {
  for (const auto& g : generators)
    if (g.size() != dim) throw InputError("generator dimension mismatch");
  RationalCone c;
  c.dim = dim;
  c.facets = facets_from_generators(dim, generators);
  RaySet rs = rays_from_facets(dim, c.facets);
  if (rs.pointed()) {
    c.generators = rs.rays;
  } else {
    c.generators = rs.rays;
    for (const auto& l : rs.lineality) {
      c.generators.push_back(l);
      c.generators.push_back(QVec(-l));
    }
    c.generators = canonical_rays(c.generators);
  }
  return c;
}

RationalCone cone_from_facets(int dim, std::vector<QVec> facets) {
  for (const auto& f : facets)
    if (f.size() != dim) throw InputError("facet dimension mismatch");
  RaySet rs = rays_from_facets(dim, canonical_rays(facets));
  std::vector<QVec> gens = rs.rays;
  for (const auto& l : rs.lineality) {
    gens.push_back(l);
    gens.push_back(QVec(-l));
  }
  return cone_from_generators(dim, gens);
}

bool cone_contains(const RationalCone& c, const QVec& x) {
  if (x.size() != c.dim) throw InputError("point dimension mismatch");
  for (const auto& f : c.facets)
    if (f.dot(x) < 0) return false;
  return true;
}

RaySet extremal_rays(const RationalCone& c) { return rays_from_facets(c.dim, c.facets); }

RationalCone dual_cone(const RationalCone& c, const QMat& pairing) {
  if (pairing.rows() != c.dim || pairing.cols() != c.dim)
    throw InputError("pairing dimension mismatch with cone");
  Eigen::FullPivLU<QMat> lu(pairing);
  if (lu.rank() != c.dim) throw InputError("pairing is degenerate");
  const std::vector<QVec>* gens = &c.generators;
  RationalCone rebuilt;
  if (c.generators.empty() && !c.facets.empty()) {
    rebuilt = cone_from_facets(c.dim, c.facets);
    gens = &rebuilt.generators;
  }
  if (gens->empty()) {
    // the dual of the zero cone is the whole space
    std::vector<QVec> all;
    for (int i = 0; i < c.dim; ++i) {
      all.push_back(QVec(QVec::Unit(c.dim, i)));
      all.push_back(QVec(-QVec::Unit(c.dim, i)));
    }
    return cone_from_generators(c.dim, all);
  }
  std::vector<QVec> facets;
  for (const auto& g : *gens) facets.push_back(primitive(QVec(pairing.transpose() * g)));
  return cone_from_facets(c.dim, facets);
}

RationalCone dual_cone(const RationalCone& c) {
  return dual_cone(c, QMat(QMat::Identity(c.dim, c.dim)));
}

bool same_cone(const RationalCone& a, const RationalCone& b) {
  // Facet normals of lower-dimensional cones are not unique, so compare by
  // mutual containment of the generating rays.
  if (a.dim != b.dim) return false;
  for (const auto& g : a.generators)
    if (!cone_contains(b, g)) return false;
  for (const auto& g : b.generators)
    if (!cone_contains(a, g)) return false;
  return true;
}

}  // namespace poslab
