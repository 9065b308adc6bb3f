#ifndef POSLAB_CONE_HPP
#define POSLAB_CONE_HPP

#include "poslab/rational.hpp"

#include <vector>

namespace poslab {

// Finitely generated convex cone over Q with both descriptions kept in sync:
// generators hit every extremal ray, facets are the irredundant supporting
// inequalities <f, x> >= 0.
struct RationalCone {
  int dim = 0;
  std::vector<QVec> generators;
  std::vector<QVec> facets;
};

RationalCone cone_from_generators(int dim, std::vector<QVec> generators);
RationalCone cone_from_facets(int dim, std::vector<QVec> facets);

bool cone_contains(const RationalCone& c, const QVec& x);

struct RaySet {
  std::vector<QVec> rays;
  std::vector<QVec> lineality;  // nonempty means the cone is not pointed
  bool pointed() const { return lineality.empty(); }
};

// Minimal generating set of a pointed cone, unique up to scaling and order.
// Non-pointed cones get their lineality space reported instead of an error.
RaySet extremal_rays(const RationalCone& c);

// {y : <x, pairing*y> >= 0 for all x in c}. The pairing must be square,
// symmetric and nondegenerate; the identity gives the standard dual.
RationalCone dual_cone(const RationalCone& c, const QMat& pairing);
RationalCone dual_cone(const RationalCone& c);

bool same_cone(const RationalCone& a, const RationalCone& b);

// Nullspace basis of the span of the given vectors (all of Q^dim when empty).
std::vector<QVec> orthogonal_complement(int dim, const std::vector<QVec>& vecs);

int rank_of(const std::vector<QVec>& vecs, int dim);

}  // namespace poslab

#endif
