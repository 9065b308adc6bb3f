#ifndef POSLAB_POLYTOPE_HPP
#define POSLAB_POLYTOPE_HPP

#include "poslab/cone.hpp"
#include "poslab/rational.hpp"

#include <optional>
#include <vector>

namespace poslab {

// Rational polytope {m : <m, v_i> >= -a_i}. Lower-dimensional and empty
// polytopes are legal values (volume 0); unbounded ones are rejected by the
// volume routines.
class LatticePolytope {
 public:
  LatticePolytope() = default;
  LatticePolytope(int dim, std::vector<QVec> normals, std::vector<Rational> offsets);

  int dim() const { return dim_; }
  const std::vector<QVec>& normals() const { return normals_; }
  const std::vector<Rational>& offsets() const { return offsets_; }

  const std::vector<QVec>& vertices() const;
  bool bounded() const;
  bool empty() const;
  bool contains(const QVec& x) const;
  // dim(affine hull) == dim
  bool full_dimensional() const;

 private:
  int dim_ = 0;
  std::vector<QVec> normals_;
  std::vector<Rational> offsets_;
  mutable std::optional<std::vector<QVec>> vertex_cache_;
  mutable std::optional<bool> bounded_cache_;
};

LatticePolytope make_box(const QVec& lo, const QVec& hi);
// {x >= 0, sum x_i <= c}
LatticePolytope make_simplex(int dim, const Rational& c);
LatticePolytope empty_polytope(int dim);

// Exact Euclidean volume (degenerate polytopes give 0). Throws InputError on
// unbounded input.
Rational polytope_volume(const LatticePolytope& p);

// d vol / d a_i per inequality; zero for inactive or duplicate inequalities.
std::vector<Rational> facet_measures(const LatticePolytope& p);

LatticePolytope minkowski_sum(const LatticePolytope& p, const LatticePolytope& q);
LatticePolytope scale_polytope(const LatticePolytope& p, const Rational& t);

// Symmetric multilinear form normalized so mixed_volume(P,...,P) ==
// polytope_volume(P); inclusion-exclusion over Minkowski sums, n <= 3.
Rational mixed_volume(const std::vector<LatticePolytope>& ps);

}  // namespace poslab

#endif
