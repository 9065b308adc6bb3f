#ifndef POSLAB_SURFACE_HPP
#define POSLAB_SURFACE_HPP

#include "poslab/cone.hpp"
#include "poslab/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace poslab {

// alpha = positive + sum coeff * curve, with positive nef, positive.curve = 0
// on the support, and the support's Gram matrix negative definite.
struct ZariskiDecomposition {
  QVec positive;
  std::vector<std::pair<int, Rational>> negative;  // (curve index, coefficient)
};

struct ApproxZariskiRow {
  Rational eps;
  Rational pe;    // P_j . E_j
  Rational gap;   // vol(alpha) - P_j^2
  bool ok = false;
};

struct ApproxZariskiReport {
  QVec h;       // the bounding nef class used for the constant
  Rational c;   // instance constant
  std::vector<ApproxZariskiRow> rows;
};

// Projective surface given as its intersection lattice with a declared curve
// list generating the effective cone (together with the ample witness).
class Surface {
 public:
  Surface(int rank, QMat form, std::vector<QVec> curves, QVec ample, std::string region = "");

  static Surface named(const std::string& name);
  static Surface from_json_file(const std::string& path);
  static const std::vector<std::string>& builtin_names();

  int rank() const { return rank_; }
  const QMat& form() const { return form_; }
  const std::vector<QVec>& curves() const { return curves_; }
  const QVec& ample() const { return ample_; }
  const std::string& region() const { return region_; }

  Rational pair(const QVec& a, const QVec& b) const;

  bool is_nef(const QVec& a) const;
  bool is_psef(const QVec& a) const;
  bool is_big(const QVec& a) const;

  // Exact fixpoint decomposition; DomainError("not pseudoeffective") when the
  // iteration certifies alpha is outside the psef cone.
  ZariskiDecomposition zariski(const QVec& alpha) const;

  // P^2 of the positive part; 0 for non-psef classes by convention
  Rational volume(const QVec& alpha) const;
  QVec positive_part(const QVec& alpha) const;

  // d/dt vol(alpha + t gamma) = 2 P(alpha).gamma for big alpha
  Rational derivative(const QVec& alpha, const QVec& gamma) const;
  // exact (left, right) derivatives by piecewise-quadratic fits on the segment
  std::pair<Rational, Rational> one_sided_derivatives(const QVec& alpha, const QVec& gamma) const;

  // curves with P(alpha).C = 0, for big alpha
  std::vector<int> nonkahler_divisors(const QVec& alpha) const;

  RationalCone psef_cone() const;
  RationalCone nef_cone() const;

  ApproxZariskiReport approximate_zariski_experiment(const QVec& alpha,
                                                     const std::vector<Rational>& eps) const;

 private:
  void check_dim(const QVec& a) const;

  int rank_ = 0;
  QMat form_;
  std::vector<QVec> curves_;
  QVec ample_;
  std::string region_;
};

}  // namespace poslab

#endif
