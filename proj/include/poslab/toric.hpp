#ifndef POSLAB_TORIC_HPP
#define POSLAB_TORIC_HPP

#include "poslab/cone.hpp"
#include "poslab/polytope.hpp"
#include "poslab/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace poslab {

// Complete unimodular fan in dimension n <= 3. Rays are primitive integer
// vectors; maximal cones are index lists into the ray table.
struct Fan {
  int dim = 0;
  std::vector<QVec> rays;
  std::vector<std::vector<int>> max_cones;
};

// A wall (codimension-1 cone) with its curve class: t pairs against ray
// coefficient vectors, coords against class coordinates.
struct WallCurve {
  std::vector<int> ray_indices;
  QVec t;
  QVec coords;
};

// Smooth projective toric variety with a fixed basis of its divisor class
// lattice. Classes are coordinate vectors in that basis throughout.
class ToricVariety {
 public:
  // basis: ray-coefficient vectors (length #rays) of the chosen basis classes;
  // when empty a basis is derived from the Smith normal form of the ray
  // matrix. Throws InputError unless the fan is complete and unimodular.
  explicit ToricVariety(Fan fan, std::vector<QVec> basis = {});

  static ToricVariety named(const std::string& name);
  static ToricVariety from_json_file(const std::string& path);
  static const std::vector<std::string>& builtin_names();

  const Fan& fan() const { return fan_; }
  int dim() const { return fan_.dim; }
  int num_rays() const { return static_cast<int>(fan_.rays.size()); }
  // rank of the divisor class lattice (#rays - dim)
  int rank() const { return num_rays() - fan_.dim; }

  // class of a divisor given by ray coefficients
  QVec class_of(const QVec& ray_coeffs) const;
  QVec prime_divisor_class(int ray) const;
  // ray coefficients of the fixed representative of a class
  QVec representative(const QVec& cls) const;

  const std::vector<WallCurve>& walls() const { return walls_; }

  // {m : <m, v_i> >= -a_i} for the fixed representative a
  LatticePolytope section_polytope(const QVec& cls) const;
  // n! * vol(section polytope); zero iff the class is not big
  Rational volume(const QVec& cls) const;

  bool is_nef(const QVec& cls) const;
  bool is_psef(const QVec& cls) const;
  bool is_big(const QVec& cls) const;

  const RationalCone& nef_cone() const { return nef_cone_; }
  const RationalCone& psef_cone() const { return psef_cone_; }
  // sum of the nef cone's extremal rays; interior, hence ample
  QVec ample_class() const;

  // n! * mixed volume of section polytopes; requires every class nef
  Rational intersection_number(const std::vector<QVec>& classes) const;
  // arbitrary classes, by multilinear expansion after an ample shift
  Rational intersection_product(const std::vector<QVec>& classes) const;
  // curve class of a product of n-1 nef classes, in coordinates dual to the
  // class basis: pairing with a divisor class d is dot(d, result)
  QVec curve_class_of_product(const std::vector<QVec>& classes) const;

  // <alpha^{n-1}> . gamma for big alpha, via facet measures of P_alpha
  Rational positive_product_pairing(const QVec& alpha, const QVec& gamma) const;
  // exact (left, right) derivatives of t -> volume(alpha + t gamma) at t = 0,
  // by chamber-exact polynomial fits at shrinking rational steps
  std::pair<Rational, Rational> one_sided_derivatives(const QVec& alpha, const QVec& gamma) const;

 private:
  void validate_fan() const;
  void build_class_map(const std::vector<QVec>& basis);
  void build_walls();
  void check_class_dim(const QVec& cls) const;

  Fan fan_;
  QMat rep_;        // num_rays x rank: representative(c) = rep_ * c
  QMat class_map_;  // rank x num_rays: class_of(a) = class_map_ * a
  std::vector<WallCurve> walls_;
  RationalCone nef_cone_;
  RationalCone psef_cone_;
};

}  // namespace poslab

#endif
