#ifndef POSLAB_CHECKS_HPP
#define POSLAB_CHECKS_HPP

#include "poslab/rational.hpp"
#include "poslab/surface.hpp"
#include "poslab/toric.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace poslab {

// One verified inequality (or equality, or cone identity). Exact checks carry
// tolerance 0 and pass iff margin >= 0; "skip" records a refusal, not a
// failure. Where the original statement involves n-th roots the margin is
// reported after clearing them (see the note field).
struct CheckReport {
  std::string theorem;
  std::string instance;
  std::string inputs;
  std::string lhs, rhs;
  Rational margin = 0;
  double tolerance = 0;
  std::string verdict;  // "pass" | "fail" | "skip"
  std::string note;
  std::uint64_t seed = 0;

  bool passed() const { return verdict == "pass"; }
};

// vol(alpha - beta) >= (alpha^n) - n (alpha^{n-1}.beta), alpha and beta nef
CheckReport check_morse(const ToricVariety& x, const std::string& instance, const QVec& alpha,
                        const QVec& beta);
CheckReport check_morse(const Surface& s, const std::string& instance, const QVec& alpha,
                        const QVec& beta);

// the weaker bound (alpha^n) - sum_{k>=1} C(n,k)(alpha^{n-k}.beta^k); also
// asserts it never exceeds the bound above
CheckReport check_binomial_morse(const ToricVariety& x, const std::string& instance,
                                 const QVec& alpha, const QVec& beta);
CheckReport check_binomial_morse(const Surface& s, const std::string& instance, const QVec& alpha,
                                 const QVec& beta);

// both one-sided derivatives of vol along gamma exist, agree, and equal
// n <alpha^{n-1}>.gamma; skip (not fail) when alpha is not big
CheckReport check_differentiability(const ToricVariety& x, const std::string& instance,
                                    const QVec& alpha, const QVec& gamma);
CheckReport check_differentiability(const Surface& s, const std::string& instance,
                                    const QVec& alpha, const QVec& gamma);

// vol(alpha) = alpha . <alpha^{n-1}> exactly, alpha big
CheckReport check_orthogonality(const ToricVariety& x, const std::string& instance,
                                const QVec& alpha);
CheckReport check_orthogonality(const Surface& s, const std::string& instance, const QVec& alpha);

// vol(alpha)^{1/n} - vol(beta)^{1/n} >= (alpha-beta).<alpha^{n-1}> / vol(alpha)^{(n-1)/n},
// both big; verified exactly after clearing the roots
CheckReport check_concavity(const ToricVariety& x, const std::string& instance, const QVec& alpha,
                            const QVec& beta);
CheckReport check_concavity(const Surface& s, const std::string& instance, const QVec& alpha,
                            const QVec& beta);

// (alpha^{n-1}.beta)^n >= (alpha^n)^{n-1} (beta^n), both nef
CheckReport check_khovanskii_teissier(const ToricVariety& x, const std::string& instance,
                                      const QVec& alpha, const QVec& beta);
CheckReport check_khovanskii_teissier(const Surface& s, const std::string& instance,
                                      const QVec& alpha, const QVec& beta);

// surfaces: the dual of the effective cone under the intersection form is the
// nef cone, extremal rays matched; toric threefolds: every sampled product of
// nef classes lands in dual(psef), and each extremal ray of dual(psef) is
// certified by a declared pair of nef classes whose product hits it
CheckReport check_duality(const ToricVariety& x, const std::string& instance, int samples,
                          std::uint64_t seed);
CheckReport check_duality(const Surface& s, const std::string& instance);

// Seeded samplers: rational conic combinations of the extremal rays (strictly
// positive weights plus an ample kick for the big samplers).
QVec sample_nef(const ToricVariety& x, std::mt19937_64& rng);
QVec sample_big(const ToricVariety& x, std::mt19937_64& rng);
QVec sample_nef(const Surface& s, std::mt19937_64& rng);
QVec sample_big(const Surface& s, std::mt19937_64& rng);
QVec sample_direction(int rank, std::mt19937_64& rng);

enum class InstanceKind { Auto, Toric, Surface };

// Batch driver: `theorem` is one of morse, binomial_morse, differentiability,
// orthogonality, concavity, khovanskii_teissier, duality, or all; `instance`
// is a builtin name or a JSON file path.
std::vector<CheckReport> run_checks(const std::string& theorem, const std::string& instance,
                                    int count, std::uint64_t seed,
                                    InstanceKind kind = InstanceKind::Auto);

const std::vector<std::string>& check_names();

void write_reports_json(const std::vector<CheckReport>& reports, std::ostream& out);
void write_reports_csv(const std::vector<CheckReport>& reports, std::ostream& out);

}  // namespace poslab

#endif
