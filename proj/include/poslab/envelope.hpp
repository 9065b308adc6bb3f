#ifndef POSLAB_ENVELOPE_HPP
#define POSLAB_ENVELOPE_HPP

#include "poslab/polytope.hpp"
#include "poslab/toric.hpp"

#include <string>
#include <vector>

namespace poslab {

// Uniform grid on [-L, L]^dim, dim 1 or 2, N nodes per axis.
struct GridSpec {
  int dim = 1;
  double L = 10.0;
  int N = 256;

  double step() const { return 2.0 * L / (N - 1); }
  double coord(int i) const { return -L + step() * i; }
  size_t size() const { return dim == 1 ? static_cast<size_t>(N)
                                        : static_cast<size_t>(N) * static_cast<size_t>(N); }
};

struct GridFunction {
  GridSpec spec;
  std::vector<double> values;  // x index fastest: idx = iy*N + ix

  double at(int ix, int iy = 0) const {
    return values[static_cast<size_t>(iy) * spec.N + ix];
  }
};

// Cell-centered slope grid over the bounding box of a polytope, with an exact
// rational inside-test per cell center.
struct SlopeGrid {
  int dim = 1;
  int M = 0;
  double lo[2] = {0, 0}, hi[2] = {0, 0};
  std::vector<double> centers[2];
  std::vector<char> inside;  // cell ky*M + kx
  double cellvol = 0;
  LatticePolytope poly;
};

SlopeGrid make_slope_grid(const LatticePolytope& p, int m);

// log sum over vertices of exp(<m, x>); gradient image is the polytope
GridFunction reference_potential(const LatticePolytope& p, const GridSpec& spec);

// g(x) = <m0, x> - psi_beta(x), normalized so max over the grid is 0
GridFunction build_obstacle(const LatticePolytope& p_beta, const QVec& m0, const GridSpec& spec);

// pointwise smooth max(f, floor): |.|_reg = (x^2+1)/2 on [-1,1], |.| outside
GridFunction regularized_max(const GridFunction& f, double floor);
double regularized_max_value(double a, double b);

// Discrete Legendre transform f*(p) = max_x <p,x> - f(x) on the slope cells;
// arg records the flattened grid index of the (leftmost) maximizer.
void legendre(const GridFunction& f, const SlopeGrid& sg, std::vector<double>& out,
              std::vector<int>& arg);

// Largest function below h with slopes constrained to the polytope: the
// biconjugate through the masked slope grid.
GridFunction constrained_envelope(const GridFunction& h, const SlopeGrid& sg);

// n! * (slope-cell measure of {p in P : argmax of u at p is interior and in
// region}); region is a mask over grid nodes (empty = everywhere).
double ma_mass(const GridFunction& u, const SlopeGrid& sg,
               const std::vector<char>& region = {});

// nonnegative second differences along axes and diagonals, within tol
bool discretely_convex(const GridFunction& f, double tol);

struct EnvelopeRunRow {
  double r = 0;
  double total_mass = 0;
  double contact_mass = 0;
  double u_mass = 0;       // over U = {g >= -R/2}
  double comp_mass = 0;    // over the complement of U
  double contact_fraction = 0;
  double max_above_obstacle = 0;  // max(u - h), should be ~0
};

struct MorsePipelineReport {
  int dim = 0;
  double tau = 0;
  double oracle_total = 0;      // (alpha^n)
  double oracle_vol_diff = 0;   // vol(alpha - beta)
  double binomial_bound = 0;    // (alpha^n) - sum_k C(n,k) (alpha^{n-k}.beta^k)
  std::vector<EnvelopeRunRow> rows;
  double vol_estimate = 0;      // U-mass limit, extrapolated in 1/R over the tail
  bool monotone = true;         // envelopes decrease along the R schedule
};

struct MorsePipelineSpec {
  QVec alpha, beta, m0;
  double L = 10.0;
  int N = 512;
  int M = 0;  // 0: use N
  std::vector<double> r_schedule = {2, 4, 8, 16};
};

// The full obstacle/envelope/mass chain on a 1- or 2-dimensional instance.
// InputError for malformed inputs, RegimeError when alpha - beta is not big.
MorsePipelineReport run_morse_pipeline(const ToricVariety& x, const MorsePipelineSpec& spec);

}  // namespace poslab

#endif
