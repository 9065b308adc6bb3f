#include "poslab/checks.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <type_traits>

namespace poslab {

namespace {

Rational binomial(int n, int k) {
  Rational b(1);
  for (int i = 0; i < k; ++i) b = b * Rational(n - i) / Rational(i + 1);
  return b;
}

Rational qpow(const Rational& x, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

std::string inputs_str(const char* an, const QVec& a) {
  return std::string(an) + "=" + to_string(a);
}

std::string inputs_str(const char* an, const QVec& a, const char* bn, const QVec& b) {
  return inputs_str(an, a) + " " + inputs_str(bn, b);
}

CheckReport base_report(std::string theorem, std::string instance, std::string inputs) {
  CheckReport r;
  r.theorem = std::move(theorem);
  r.instance = std::move(instance);
  r.inputs = std::move(inputs);
  return r;
}

void finish_inequality(CheckReport& r, const Rational& lhs, const Rational& rhs) {
  r.lhs = to_string(lhs);
  r.rhs = to_string(rhs);
  r.margin = lhs - rhs;
  r.verdict = r.margin >= 0 ? "pass" : "fail";
}

void finish_equality(CheckReport& r, const Rational& lhs, const Rational& rhs) {
  r.lhs = to_string(lhs);
  r.rhs = to_string(rhs);
  r.margin = -Rational(abs(lhs - rhs));
  r.verdict = r.margin == 0 ? "pass" : "fail";
}

// vol(a-b) >= sum of nef products given per power of b (terms[k] = a^{n-k}.b^k)
CheckReport morse_core(const std::string& instance, const std::string& inputs, int n,
                       const Rational& vol_diff, const Rational& an, const Rational& an1b) {
  auto r = base_report("morse", instance, inputs);
  finish_inequality(r, vol_diff, an - Rational(n) * an1b);
  return r;
}

CheckReport binomial_core(const std::string& instance, const std::string& inputs, int n,
                          const Rational& vol_diff, const std::vector<Rational>& terms) {
  auto r = base_report("binomial_morse", instance, inputs);
  Rational bound = terms[0];
  for (int k = 1; k <= n; ++k) bound -= binomial(n, k) * terms[static_cast<size_t>(k)];
  Rational morse_bound = terms[0] - Rational(n) * terms[1];
  finish_inequality(r, vol_diff, bound);
  if (bound > morse_bound) {
    r.verdict = "fail";
    r.note = "binomial bound exceeds the one-term bound";
  }
  return r;
}

CheckReport diff_core(const std::string& instance, const std::string& inputs, bool big,
                      const Rational& dl, const Rational& dr, const Rational& expected) {
  auto r = base_report("differentiability", instance, inputs);
  if (!big) {
    r.verdict = "skip";
    r.note = "refused: the class is not big";
    return r;
  }
  r.lhs = to_string(dl) + " / " + to_string(dr);
  r.rhs = to_string(expected);
  r.margin = -Rational(abs(dl - dr)) - Rational(abs(dl - expected));
  r.verdict = r.margin == 0 ? "pass" : "fail";
  r.note = "left and right derivatives vs n <alpha^{n-1}>.gamma";
  return r;
}

CheckReport concavity_core(const std::string& instance, const std::string& inputs, int n,
                           const Rational& a, const Rational& b, const Rational& d) {
  // A^{1/n} - B^{1/n} >= D / A^{(n-1)/n}  <=>  A - D >= (B A^{n-1})^{1/n}
  // <=>  A - D >= 0  and  (A - D)^n >= B A^{n-1}
  auto r = base_report("concavity", instance, inputs);
  Rational shifted = a - d;
  r.lhs = to_string(shifted);
  r.rhs = "(" + to_string(b) + " * " + to_string(a) + "^" + std::to_string(n - 1) + ")^(1/" +
          std::to_string(n) + ")";
  r.note = "roots cleared: requires A-D >= 0 and (A-D)^n >= B A^{n-1}";
  if (shifted < 0) {
    r.margin = shifted;
    r.verdict = "fail";
    return r;
  }
  r.margin = qpow(shifted, n) - b * qpow(a, n - 1);
  r.verdict = r.margin >= 0 ? "pass" : "fail";
  return r;
}

CheckReport kt_core(const std::string& instance, const std::string& inputs, int n,
                    const Rational& an1b, const Rational& an, const Rational& bn) {
  // (a^{n-1}.b) >= (a^n)^{(n-1)/n} (b^n)^{1/n}; all quantities nonnegative for
  // nef inputs, so raise both sides to the n-th power
  auto r = base_report("khovanskii_teissier", instance, inputs);
  r.lhs = to_string(an1b);
  r.rhs = "((" + to_string(an) + ")^" + std::to_string(n - 1) + " * " + to_string(bn) + ")^(1/" +
          std::to_string(n) + ")";
  r.margin = qpow(an1b, n) - qpow(an, n - 1) * bn;
  r.verdict = (an1b >= 0 && r.margin >= 0) ? "pass" : "fail";
  r.note = "roots cleared: compares n-th powers";
  return r;
}

std::vector<QVec> nef_powers(const QVec& a, int copies) {
  return std::vector<QVec>(static_cast<size_t>(copies), a);
}

void require_nef_pair(bool a_nef, bool b_nef) {
  if (!a_nef) throw InputError("alpha is not nef");
  if (!b_nef) throw InputError("beta is not nef");
}

void require_big(bool big, const char* who) {
  if (!big) throw DomainError(std::string(who) + " is not big");
}

// declared movable-curve certificates for the extremal rays of dual(psef) on
// the builtin threefolds: pairs of nef classes whose product hits the ray
const std::vector<std::pair<QVec, QVec>>* curve_certificates(const std::string& instance) {
  static const std::map<std::string, std::vector<std::pair<QVec, QVec>>> table = {
      {"P1^3",
       {{qvec({0, 1, 0}), qvec({0, 0, 1})},
        {qvec({1, 0, 0}), qvec({0, 0, 1})},
        {qvec({1, 0, 0}), qvec({0, 1, 0})}}},
      {"BlP3", {{qvec({1, 0}), qvec({1, 0})}, {qvec({1, -1}), qvec({1, -1})}}},
  };
  auto it = table.find(instance);
  return it == table.end() ? nullptr : &it->second;
}

}  // namespace

CheckReport check_morse(const ToricVariety& x, const std::string& instance, const QVec& alpha,
                        const QVec& beta) {
  require_nef_pair(x.is_nef(alpha), x.is_nef(beta));
  int n = x.dim();
  auto aa = nef_powers(alpha, n);
  auto ab = aa;
  ab.back() = beta;
  return morse_core(instance, inputs_str("alpha", alpha, "beta", beta), n,
                    x.volume(QVec(alpha - beta)), x.intersection_number(aa),
                    x.intersection_number(ab));
}

CheckReport check_morse(const Surface& s, const std::string& instance, const QVec& alpha,
                        const QVec& beta) {
  require_nef_pair(s.is_nef(alpha), s.is_nef(beta));
  return morse_core(instance, inputs_str("alpha", alpha, "beta", beta), 2,
                    s.volume(QVec(alpha - beta)), s.pair(alpha, alpha), s.pair(alpha, beta));
}

CheckReport check_binomial_morse(const ToricVariety& x, const std::string& instance,
                                 const QVec& alpha, const QVec& beta) {
  require_nef_pair(x.is_nef(alpha), x.is_nef(beta));
  int n = x.dim();
  std::vector<Rational> terms;
  for (int k = 0; k <= n; ++k) {
    auto cs = nef_powers(alpha, n - k);
    auto bs = nef_powers(beta, k);
    cs.insert(cs.end(), bs.begin(), bs.end());
    terms.push_back(x.intersection_number(cs));
  }
  return binomial_core(instance, inputs_str("alpha", alpha, "beta", beta), n,
                       x.volume(QVec(alpha - beta)), terms);
}

CheckReport check_binomial_morse(const Surface& s, const std::string& instance, const QVec& alpha,
                                 const QVec& beta) {
  require_nef_pair(s.is_nef(alpha), s.is_nef(beta));
  std::vector<Rational> terms = {s.pair(alpha, alpha), s.pair(alpha, beta), s.pair(beta, beta)};
  return binomial_core(instance, inputs_str("alpha", alpha, "beta", beta), 2,
                       s.volume(QVec(alpha - beta)), terms);
}

CheckReport check_differentiability(const ToricVariety& x, const std::string& instance,
                                    const QVec& alpha, const QVec& gamma) {
  std::string in = inputs_str("alpha", alpha, "gamma", gamma);
  if (!x.is_big(alpha)) return diff_core(instance, in, false, 0, 0, 0);
  auto [dl, dr] = x.one_sided_derivatives(alpha, gamma);
  Rational expected = Rational(x.dim()) * x.positive_product_pairing(alpha, gamma);
  return diff_core(instance, in, true, dl, dr, expected);
}

CheckReport check_differentiability(const Surface& s, const std::string& instance,
                                    const QVec& alpha, const QVec& gamma) {
  std::string in = inputs_str("alpha", alpha, "gamma", gamma);
  if (!s.is_big(alpha)) return diff_core(instance, in, false, 0, 0, 0);
  auto [dl, dr] = s.one_sided_derivatives(alpha, gamma);
  return diff_core(instance, in, true, dl, dr, s.derivative(alpha, gamma));
}

CheckReport check_orthogonality(const ToricVariety& x, const std::string& instance,
                                const QVec& alpha) {
  require_big(x.is_big(alpha), "alpha");
  auto r = base_report("orthogonality", instance, inputs_str("alpha", alpha));
  finish_equality(r, x.volume(alpha), x.positive_product_pairing(alpha, alpha));
  r.note = "vol(alpha) vs alpha.<alpha^{n-1}> via facet measures";
  return r;
}

CheckReport check_orthogonality(const Surface& s, const std::string& instance, const QVec& alpha) {
  require_big(s.is_big(alpha), "alpha");
  auto r = base_report("orthogonality", instance, inputs_str("alpha", alpha));
  finish_equality(r, s.volume(alpha), s.pair(alpha, s.positive_part(alpha)));
  r.note = "vol(alpha) vs alpha.P via the Zariski positive part";
  return r;
}

CheckReport check_concavity(const ToricVariety& x, const std::string& instance, const QVec& alpha,
                            const QVec& beta) {
  require_big(x.is_big(alpha), "alpha");
  require_big(x.is_big(beta), "beta");
  return concavity_core(instance, inputs_str("alpha", alpha, "beta", beta), x.dim(),
                        x.volume(alpha), x.volume(beta),
                        x.positive_product_pairing(alpha, QVec(alpha - beta)));
}

CheckReport check_concavity(const Surface& s, const std::string& instance, const QVec& alpha,
                            const QVec& beta) {
  require_big(s.is_big(alpha), "alpha");
  require_big(s.is_big(beta), "beta");
  return concavity_core(instance, inputs_str("alpha", alpha, "beta", beta), 2, s.volume(alpha),
                        s.volume(beta), s.pair(QVec(alpha - beta), s.positive_part(alpha)));
}

CheckReport check_khovanskii_teissier(const ToricVariety& x, const std::string& instance,
                                      const QVec& alpha, const QVec& beta) {
  require_nef_pair(x.is_nef(alpha), x.is_nef(beta));
  int n = x.dim();
  auto ab = nef_powers(alpha, n);
  ab.back() = beta;
  return kt_core(instance, inputs_str("alpha", alpha, "beta", beta), n, x.intersection_number(ab),
                 x.intersection_number(nef_powers(alpha, n)),
                 x.intersection_number(nef_powers(beta, n)));
}

CheckReport check_khovanskii_teissier(const Surface& s, const std::string& instance,
                                      const QVec& alpha, const QVec& beta) {
  require_nef_pair(s.is_nef(alpha), s.is_nef(beta));
  return kt_core(instance, inputs_str("alpha", alpha, "beta", beta), 2, s.pair(alpha, beta),
                 s.pair(alpha, alpha), s.pair(beta, beta));
}

CheckReport check_duality(const Surface& s, const std::string& instance) {
  auto r = base_report("duality", instance, "psef and nef cones of the instance lattice");
  auto dual_psef = dual_cone(s.psef_cone(), s.form());
  auto nef = s.nef_cone();
  bool cones_equal = same_cone(dual_psef, nef);
  bool rays_match =
      same_rays(extremal_rays(dual_psef).rays, extremal_rays(nef).rays);
  r.lhs = "dual(psef)";
  r.rhs = "nef";
  r.margin = (cones_equal && rays_match) ? Rational(0) : Rational(-1);
  r.verdict = (cones_equal && rays_match) ? "pass" : "fail";
  r.note = "extremal rays matched up to scaling and order";
  return r;
}

CheckReport check_duality(const ToricVariety& x, const std::string& instance, int samples,
                          std::uint64_t seed) {
  auto r = base_report("duality", instance, "psef cone vs nef products");
  r.seed = seed;
  int n = x.dim();
  auto dual_psef = dual_cone(x.psef_cone());

  if (n == 1) {
    r.lhs = "dual(psef)";
    r.rhs = "nef";
    r.margin = same_cone(dual_psef, x.nef_cone()) ? Rational(0) : Rational(-1);
    r.verdict = r.margin == 0 ? "pass" : "fail";
    return r;
  }

  if (n == 2) {
    std::vector<QVec> movable;
    for (const auto& g : x.nef_cone().generators)
      movable.push_back(x.curve_class_of_product({g}));
    bool ok = same_cone(dual_psef, cone_from_generators(x.rank(), movable));
    r.lhs = "dual(psef)";
    r.rhs = "curve classes of the nef cone";
    r.margin = ok ? Rational(0) : Rational(-1);
    r.verdict = ok ? "pass" : "fail";
    return r;
  }

  // n = 3: containment of sampled nef products, plus a declared certificate
  // pair for every extremal ray of dual(psef)
  std::mt19937_64 rng(seed);
  int bad = 0;
  for (int it = 0; it < samples; ++it) {
    QVec a = sample_nef(x, rng), b = sample_nef(x, rng);
    if (!cone_contains(dual_psef, x.curve_class_of_product({a, b}))) ++bad;
  }
  const auto* certs = curve_certificates(instance);
  int uncertified = 0;
  auto rays = extremal_rays(dual_psef).rays;
  for (const auto& ray : rays) {
    bool found = false;
    if (certs)
      for (const auto& [a, b] : *certs) {
        if (!x.is_nef(a) || !x.is_nef(b)) continue;
        if (vec_eq(primitive(x.curve_class_of_product({a, b})), primitive(ray))) {
          found = true;
          break;
        }
      }
    if (!found) ++uncertified;
  }
  r.lhs = std::to_string(samples) + " sampled nef products";
  r.rhs = "dual(psef), " + std::to_string(rays.size()) + " extremal rays";
  r.margin = -Rational(bad + uncertified);
  r.verdict = r.margin == 0 ? "pass" : "fail";
  if (!certs) r.note = "no curve certificates declared for this instance";
  else r.note = std::to_string(uncertified) + " rays without certificate, " +
                std::to_string(bad) + " products outside";
  return r;
}

namespace {

QVec combine(const std::vector<QVec>& gens, Eigen::Index dim, std::mt19937_64& rng, int lo,
             int hi) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, 3);
  QVec out = QVec::Zero(dim);
  bool nonzero = false;
  for (const auto& g : gens) {
    Rational w = Rational(num(rng)) / den(rng);
    if (w != 0) nonzero = true;
    out += w * g;
  }
  if (!nonzero && !gens.empty()) out += gens[rng() % gens.size()];
  return out;
}

}  // namespace

QVec sample_nef(const ToricVariety& x, std::mt19937_64& rng) {
  return combine(x.nef_cone().generators, x.rank(), rng, 0, 4);
}

QVec sample_big(const ToricVariety& x, std::mt19937_64& rng) {
  return x.ample_class() + combine(x.psef_cone().generators, x.rank(), rng, 0, 3);
}

QVec sample_nef(const Surface& s, std::mt19937_64& rng) {
  return combine(s.nef_cone().generators, s.rank(), rng, 0, 4);
}

QVec sample_big(const Surface& s, std::mt19937_64& rng) {
  return s.ample() + combine(s.psef_cone().generators, s.rank(), rng, 0, 3);
}

QVec sample_direction(int rank, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-2, 2);
  QVec g(rank);
  bool zero = true;
  while (zero) {
    for (int i = 0; i < rank; ++i) {
      g(i) = Rational(c(rng));
      if (g(i) != 0) zero = false;
    }
  }
  return g;
}

namespace {

struct ResolvedInstance {
  std::vector<ToricVariety> toric;  // 0 or 1
  std::vector<Surface> surface;     // 0 or 1
};

bool is_file_path(const std::string& s) {
  return s.find(".json") != std::string::npos || s.find('/') != std::string::npos;
}

ResolvedInstance resolve(const std::string& instance, InstanceKind kind) {
  ResolvedInstance out;
  const auto& tn = ToricVariety::builtin_names();
  const auto& sn = Surface::builtin_names();
  bool toric_builtin = std::find(tn.begin(), tn.end(), instance) != tn.end();
  bool surface_builtin = std::find(sn.begin(), sn.end(), instance) != sn.end();

  if (kind == InstanceKind::Toric || (kind == InstanceKind::Auto && toric_builtin)) {
    if (toric_builtin) out.toric.push_back(ToricVariety::named(instance));
    else if (is_file_path(instance)) out.toric.push_back(ToricVariety::from_json_file(instance));
    else throw InputError("unknown toric instance: " + instance);
    return out;
  }
  if (kind == InstanceKind::Surface || (kind == InstanceKind::Auto && surface_builtin)) {
    if (surface_builtin) out.surface.push_back(Surface::named(instance));
    else if (is_file_path(instance)) out.surface.push_back(Surface::from_json_file(instance));
    else throw InputError("unknown surface instance: " + instance);
    return out;
  }
  if (is_file_path(instance)) {
    try {
      out.toric.push_back(ToricVariety::from_json_file(instance));
      return out;
    } catch (const InputError&) {
    }
    out.surface.push_back(Surface::from_json_file(instance));
    return out;
  }
  throw InputError("unknown instance: " + instance);
}

template <class Inst>
void run_one(const Inst& inst, const std::string& theorem, const std::string& name, int count,
             std::uint64_t seed, std::vector<CheckReport>& out) {
  std::mt19937_64 rng(seed);
  auto push = [&](CheckReport r) {
    r.seed = seed;
    out.push_back(std::move(r));
  };
  if (theorem == "morse") {
    for (int i = 0; i < count; ++i)
      push(check_morse(inst, name, sample_nef(inst, rng), sample_nef(inst, rng)));
  } else if (theorem == "binomial_morse") {
    for (int i = 0; i < count; ++i)
      push(check_binomial_morse(inst, name, sample_nef(inst, rng), sample_nef(inst, rng)));
  } else if (theorem == "differentiability") {
    for (int i = 0; i < count; ++i)
      push(check_differentiability(inst, name, sample_big(inst, rng),
                                   sample_direction(inst.rank(), rng)));
  } else if (theorem == "orthogonality") {
    for (int i = 0; i < count; ++i) push(check_orthogonality(inst, name, sample_big(inst, rng)));
  } else if (theorem == "concavity") {
    for (int i = 0; i < count; ++i)
      push(check_concavity(inst, name, sample_big(inst, rng), sample_big(inst, rng)));
  } else if (theorem == "khovanskii_teissier") {
    for (int i = 0; i < count; ++i)
      push(check_khovanskii_teissier(inst, name, sample_nef(inst, rng), sample_nef(inst, rng)));
  } else if (theorem == "duality") {
    if constexpr (std::is_same_v<Inst, ToricVariety>) push(check_duality(inst, name, count, seed));
    else push(check_duality(inst, name));
  } else {
    throw InputError("unknown theorem: " + theorem);
  }
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "morse",       "binomial_morse", "differentiability",  "orthogonality",
      "concavity",   "khovanskii_teissier", "duality"};
  return names;
}

std::vector<CheckReport> run_checks(const std::string& theorem, const std::string& instance,
                                    int count, std::uint64_t seed, InstanceKind kind) {
  if (count <= 0) throw InputError("sample count must be positive");
  std::vector<std::string> theorems;
  if (theorem == "all") theorems = check_names();
  else if (theorem == "diff") theorems = {"differentiability"};
  else if (theorem == "kt") theorems = {"khovanskii_teissier"};
  else if (theorem == "binomial") theorems = {"binomial_morse"};
  else theorems = {theorem};

  auto inst = resolve(instance, kind);
  std::vector<CheckReport> out;
  for (const auto& t : theorems) {
    for (const auto& x : inst.toric) run_one(x, t, instance, count, seed, out);
    for (const auto& s : inst.surface) run_one(s, t, instance, count, seed, out);
  }
  return out;
}

void write_reports_json(const std::vector<CheckReport>& reports, std::ostream& out) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"theorem", r.theorem},
                   {"instance", r.instance},
                   {"inputs", r.inputs},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"margin", to_string(r.margin)},
                   {"tolerance", r.tolerance},
                   {"verdict", r.verdict},
                   {"note", r.note},
                   {"seed", r.seed}});
  }
  out << arr.dump(2) << "\n";
}

void write_reports_csv(const std::vector<CheckReport>& reports, std::ostream& out) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  out << "theorem,instance,inputs,lhs,rhs,margin,tolerance,verdict,note,seed\n";
  for (const auto& r : reports)
    out << r.theorem << ',' << r.instance << ',' << quote(r.inputs) << ',' << quote(r.lhs) << ','
        << quote(r.rhs) << ',' << to_string(r.margin) << ',' << r.tolerance << ',' << r.verdict
        << ',' << quote(r.note) << ',' << r.seed << "\n";
}

}  // namespace poslab
