#ifndef POSLAB_RATIONAL_HPP
#define POSLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace Eigen {

// Exact rational scalar for dense types. No epsilon: comparisons are exact.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 6,
    MulCost = 8
  };
};

}  // namespace Eigen

namespace poslab {

using Rational = mpq_class;
using QVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using QMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

// Bad user input (malformed files, dimension mismatches). CLI exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mathematically out of domain (non-psef class, non-big class). Exit code 3.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Outside the regime a computation is valid in (e.g. alpha-beta not big). Exit 4.
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline QVec qvec(std::initializer_list<long> xs) {
  QVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long x : xs) v(i++) = Rational(x);
  return v;
}

inline QVec qvec(const std::vector<Rational>& xs) {
  QVec v(static_cast<Eigen::Index>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
  return v;
}

// Parses "3", "-2/5".
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
std::string to_string(const QVec& v);
inline double to_double(const Rational& q) { return q.get_d(); }

// Scales a rational vector to a primitive integer vector with the same
// direction. The zero vector is returned unchanged.
QVec primitive(const QVec& v);

bool lex_less(const QVec& a, const QVec& b);
bool vec_eq(const QVec& a, const QVec& b);

// Sorted primitive representatives; equality of these means equality of ray
// sets up to positive scaling and permutation.
std::vector<QVec> canonical_rays(std::vector<QVec> rays);
bool same_rays(const std::vector<QVec>& a, const std::vector<QVec>& b);

bool is_integer_vec(const QVec& v);

}  // namespace poslab

#endif
