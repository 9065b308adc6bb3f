#include "poslab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace poslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// max over samples of q*xs[i] - f[i] for each query, leftmost maximizer;
// positions and queries increasing, so the maximizer index is monotone.
void dlt_rec(const std::vector<double>& xs, const std::vector<double>& f,
             const std::vector<double>& qs, int qlo, int qhi, int ilo, int ihi,
             std::vector<double>& out, std::vector<int>& arg) {
  if (qlo >= qhi) return;
  const int qm = (qlo + qhi) / 2;
  const double q = qs[static_cast<size_t>(qm)];
  int best = ilo;
  double bv = -kInf;
  for (int i = ilo; i < ihi; ++i) {
    double v = q * xs[static_cast<size_t>(i)] - f[static_cast<size_t>(i)];
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  out[static_cast<size_t>(qm)] = bv;
  arg[static_cast<size_t>(qm)] = best;
  dlt_rec(xs, f, qs, qlo, qm, ilo, best + 1, out, arg);
  dlt_rec(xs, f, qs, qm + 1, qhi, best, ihi, out, arg);
}

void dlt1(const std::vector<double>& xs, const std::vector<double>& f,
          const std::vector<double>& qs, std::vector<double>& out, std::vector<int>& arg) {
  out.assign(qs.size(), -kInf);
  arg.assign(qs.size(), 0);
  dlt_rec(xs, f, qs, 0, static_cast<int>(qs.size()), 0, static_cast<int>(xs.size()), out, arg);
}

std::vector<double> grid_coords(const GridSpec& spec) {
  std::vector<double> xs(static_cast<size_t>(spec.N));
  for (int i = 0; i < spec.N; ++i) xs[static_cast<size_t>(i)] = spec.coord(i);
  return xs;
}

// conjugate of sampled values at sample positions, evaluated at queries;
// generic core shared by both transform directions (2D, separable)
void conj2(const std::vector<double>& sx, const std::vector<double>& sy,
           const std::vector<double>& vals,  // iy*nx + ix
           const std::vector<double>& qx, const std::vector<double>& qy,
           std::vector<double>& out,  // jy*qx.size() + jx
           std::vector<int>& arg) {   // flattened sample index iy*nx + ix
  const int nx = static_cast<int>(sx.size()), ny = static_cast<int>(sy.size());
  const int mx = static_cast<int>(qx.size()), my = static_cast<int>(qy.size());
  // pass 1: conjugate along y for every sample column
  std::vector<double> g(static_cast<size_t>(my) * nx);
  std::vector<int> gy(static_cast<size_t>(my) * nx);
  std::vector<double> col(static_cast<size_t>(ny)), o;
  std::vector<int> a;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) col[static_cast<size_t>(iy)] = vals[static_cast<size_t>(iy) * nx + ix];
    dlt1(sy, col, qy, o, a);
    for (int jy = 0; jy < my; ++jy) {
      g[static_cast<size_t>(jy) * nx + ix] = o[static_cast<size_t>(jy)];
      gy[static_cast<size_t>(jy) * nx + ix] = a[static_cast<size_t>(jy)];
    }
  }
  // pass 2: conjugate along x for every query row
  out.assign(static_cast<size_t>(my) * mx, -kInf);
  arg.assign(static_cast<size_t>(my) * mx, 0);
  std::vector<double> row(static_cast<size_t>(nx));
  for (int jy = 0; jy < my; ++jy) {
    for (int ix = 0; ix < nx; ++ix) {
      double v = g[static_cast<size_t>(jy) * nx + ix];
      row[static_cast<size_t>(ix)] = (v == -kInf) ? kInf : -v;
    }
    dlt1(sx, row, qx, o, a);
    for (int jx = 0; jx < mx; ++jx) {
      out[static_cast<size_t>(jy) * mx + jx] = o[static_cast<size_t>(jx)];
      int ix = a[static_cast<size_t>(jx)];
      arg[static_cast<size_t>(jy) * mx + jx] = gy[static_cast<size_t>(jy) * nx + ix] * nx + ix;
    }
  }
}

}  // namespace

SlopeGrid make_slope_grid(const LatticePolytope& p, int m) {
  if (m < 1) throw InputError("slope resolution must be positive");
  if (!p.full_dimensional()) throw InputError("slope polytope must be full-dimensional");
  const int d = p.dim();
  if (d < 1 || d > 2) throw InputError("slope grid supports dimension 1 or 2 only");
  SlopeGrid sg;
  sg.dim = d;
  sg.M = m;
  sg.poly = p;

  std::vector<Rational> rlo(static_cast<size_t>(d)), rhi(static_cast<size_t>(d));
  const auto& vs = p.vertices();
  for (int k = 0; k < d; ++k) {
    rlo[static_cast<size_t>(k)] = vs[0](k);
    rhi[static_cast<size_t>(k)] = vs[0](k);
    for (const auto& v : vs) {
      rlo[static_cast<size_t>(k)] = std::min(rlo[static_cast<size_t>(k)], Rational(v(k)));
      rhi[static_cast<size_t>(k)] = std::max(rhi[static_cast<size_t>(k)], Rational(v(k)));
    }
  }
  sg.cellvol = 1.0;
  for (int k = 0; k < d; ++k) {
    sg.lo[k] = to_double(rlo[static_cast<size_t>(k)]);
    sg.hi[k] = to_double(rhi[static_cast<size_t>(k)]);
    Rational w = (rhi[static_cast<size_t>(k)] - rlo[static_cast<size_t>(k)]) / m;
    sg.cellvol *= to_double(w);
    for (int i = 0; i < m; ++i)
      sg.centers[k].push_back(
          to_double(rlo[static_cast<size_t>(k)] + w * (Rational(2 * i + 1) / 2)));
  }

  size_t cells = (d == 1) ? static_cast<size_t>(m) : static_cast<size_t>(m) * m;
  sg.inside.assign(cells, 0);
  for (size_t c = 0; c < cells; ++c) {
    QVec center(d);
    int kx = static_cast<int>(c % m), ky = static_cast<int>(c / m);
    Rational wx = (rhi[0] - rlo[0]) / m;
    center(0) = rlo[0] + wx * (Rational(2 * kx + 1) / 2);
    if (d == 2) {
      Rational wy = (rhi[1] - rlo[1]) / m;
      center(1) = rlo[1] + wy * (Rational(2 * ky + 1) / 2);
    }
    sg.inside[c] = p.contains(center) ? 1 : 0;
  }
  return sg;
}

GridFunction reference_potential(const LatticePolytope& p, const GridSpec& spec) {
  if (p.dim() != spec.dim) throw InputError("polytope/grid dimension mismatch");
  const auto& vs = p.vertices();
  if (vs.empty()) throw InputError("reference potential needs a nonempty polytope");
  std::vector<std::vector<double>> verts;
  for (const auto& v : vs) {
    std::vector<double> vv;
    for (int k = 0; k < p.dim(); ++k) vv.push_back(to_double(v(k)));
    verts.push_back(vv);
  }
  GridFunction f;
  f.spec = spec;
  f.values.resize(spec.size());
  const int n = spec.N;
  for (size_t idx = 0; idx < spec.size(); ++idx) {
    double x0 = spec.coord(static_cast<int>(idx % n));
    double x1 = (spec.dim == 2) ? spec.coord(static_cast<int>(idx / n)) : 0.0;
    double best = -kInf;
    for (const auto& v : verts) {
      double dot = v[0] * x0 + (spec.dim == 2 ? v[1] * x1 : 0.0);
      best = std::max(best, dot);
    }
    double s = 0;
    for (const auto& v : verts) {
      double dot = v[0] * x0 + (spec.dim == 2 ? v[1] * x1 : 0.0);
      s += std::exp(dot - best);
    }
    f.values[idx] = best + std::log(s);
  }
  return f;
}

GridFunction build_obstacle(const LatticePolytope& p_beta, const QVec& m0, const GridSpec& spec) {
  if (m0.size() != p_beta.dim()) throw InputError("section point dimension mismatch");
  if (!is_integer_vec(m0) || !p_beta.contains(m0))
    throw InputError("section point must be a lattice point of the polytope");
  GridFunction psi = reference_potential(p_beta, spec);
  GridFunction g;
  g.spec = spec;
  g.values.resize(spec.size());
  const int n = spec.N;
  double m00 = to_double(m0(0));
  double m01 = (spec.dim == 2) ? to_double(m0(1)) : 0.0;
  double top = -kInf;
  for (size_t idx = 0; idx < spec.size(); ++idx) {
    double x0 = spec.coord(static_cast<int>(idx % n));
    double x1 = (spec.dim == 2) ? spec.coord(static_cast<int>(idx / n)) : 0.0;
    g.values[idx] = m00 * x0 + m01 * x1 - psi.values[idx];
    top = std::max(top, g.values[idx]);
  }
  for (auto& v : g.values) v -= top;
  return g;
}

double regularized_max_value(double a, double b) {
  double d = a - b;
  double reg = (std::abs(d) <= 1.0) ? (d * d + 1.0) / 2.0 : std::abs(d);
  return (a + b + reg) / 2.0;
}

GridFunction regularized_max(const GridFunction& f, double floor) {
  GridFunction out = f;
  for (auto& v : out.values) v = regularized_max_value(v, floor);
  return out;
}

void legendre(const GridFunction& f, const SlopeGrid& sg, std::vector<double>& out,
              std::vector<int>& arg) {
  if (f.spec.dim != sg.dim) throw InputError("grid/slope dimension mismatch");
  std::vector<double> xs = grid_coords(f.spec);
  if (sg.dim == 1) {
    dlt1(xs, f.values, sg.centers[0], out, arg);
  } else {
    conj2(xs, xs, f.values, sg.centers[0], sg.centers[1], out, arg);
  }
}

GridFunction constrained_envelope(const GridFunction& h, const SlopeGrid& sg) {
  if (h.spec.dim != sg.dim) throw InputError("grid/slope dimension mismatch");
  bool any = false;
  for (char c : sg.inside) any = any || c;
  if (!any) throw InputError("empty slope grid");

  std::vector<double> hstar;
  std::vector<int> hs_arg;
  legendre(h, sg, hstar, hs_arg);
  for (size_t c = 0; c < hstar.size(); ++c)
    if (!sg.inside[c]) hstar[c] = kInf;

  GridFunction u;
  u.spec = h.spec;
  std::vector<double> xs = grid_coords(h.spec);
  std::vector<int> arg;
  if (sg.dim == 1) {
    dlt1(sg.centers[0], hstar, xs, u.values, arg);
  } else {
    conj2(sg.centers[0], sg.centers[1], hstar, xs, xs, u.values, arg);
  }
  return u;
}

double ma_mass(const GridFunction& u, const SlopeGrid& sg, const std::vector<char>& region) {
  if (!region.empty() && region.size() != u.spec.size())
    throw InputError("region mask size mismatch");
  std::vector<double> vals;
  std::vector<int> arg;
  legendre(u, sg, vals, arg);
  const int n = u.spec.N;
  long count = 0;
  for (size_t c = 0; c < sg.inside.size(); ++c) {
    if (!sg.inside[c]) continue;
    int ix = arg[c] % n, iy = arg[c] / n;
    if (ix <= 0 || ix >= n - 1) continue;
    if (sg.dim == 2 && (iy <= 0 || iy >= n - 1)) continue;
    if (!region.empty() && !region[static_cast<size_t>(arg[c])]) continue;
    ++count;
  }
  double fact = (sg.dim == 2) ? 2.0 : 1.0;
  return fact * static_cast<double>(count) * sg.cellvol;
}

bool discretely_convex(const GridFunction& f, double tol) {
  const int n = f.spec.N;
  auto second_ok = [&](double a, double b, double c) { return a - 2 * b + c >= -tol; };
  if (f.spec.dim == 1) {
    for (int i = 1; i + 1 < n; ++i)
      if (!second_ok(f.values[i - 1], f.values[i], f.values[i + 1])) return false;
    return true;
  }
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      auto v = [&](int dx, int dy) { return f.at(ix + dx, iy + dy); };
      if (ix >= 1 && ix + 1 < n && !second_ok(v(-1, 0), v(0, 0), v(1, 0))) return false;
      if (iy >= 1 && iy + 1 < n && !second_ok(v(0, -1), v(0, 0), v(0, 1))) return false;
      if (ix >= 1 && ix + 1 < n && iy >= 1 && iy + 1 < n) {
        if (!second_ok(v(-1, -1), v(0, 0), v(1, 1))) return false;
        if (!second_ok(v(-1, 1), v(0, 0), v(1, -1))) return false;
      }
    }
  return true;
}

MorsePipelineReport run_morse_pipeline(const ToricVariety& x, const MorsePipelineSpec& spec) {
  const int n = x.dim();
  if (n < 1 || n > 2) throw InputError("pipeline supports dimension 1 or 2 only");
  if (spec.r_schedule.empty()) throw InputError("empty R schedule");
  for (const auto& w : x.walls())
    if (w.coords.dot(spec.alpha) <= 0)
      throw InputError("alpha must be Kahler (interior of the nef cone)");
  if (!x.is_nef(spec.beta)) throw InputError("beta must be nef");

  LatticePolytope p_alpha = x.section_polytope(spec.alpha);
  LatticePolytope p_beta = x.section_polytope(spec.beta);
  if (!is_integer_vec(spec.m0) || !p_beta.contains(spec.m0))
    throw InputError("m0 must be a lattice point of the section polytope of beta");
  QVec diff = spec.alpha - spec.beta;
  if (!x.is_big(diff))
    throw RegimeError("alpha - beta is not big: outside the regime of the volume estimate");

  GridSpec gs;
  gs.dim = n;
  gs.L = spec.L;
  gs.N = spec.N;
  SlopeGrid sg = make_slope_grid(p_alpha, spec.M > 0 ? spec.M : spec.N);

  MorsePipelineReport rep;
  rep.dim = n;
  rep.oracle_total = to_double(x.volume(spec.alpha));
  rep.oracle_vol_diff = to_double(x.volume(diff));
  {
    // (alpha^n) - sum_{k>=1} C(n,k) (alpha^{n-k} . beta^k)
    Rational bound = x.volume(spec.alpha);
    for (int k = 1; k <= n; ++k) {
      Rational binom(1);
      for (int i = 0; i < k; ++i) binom = binom * (n - i) / (i + 1);
      std::vector<QVec> term;
      for (int i = 0; i < n - k; ++i) term.push_back(spec.alpha);
      for (int i = 0; i < k; ++i) term.push_back(spec.beta);
      bound -= binom * x.intersection_number(term);
    }
    rep.binomial_bound = to_double(bound);
  }

  double max_slope = 0;
  for (const auto& v : p_alpha.vertices()) {
    double norm = 0;
    for (int k = 0; k < n; ++k) norm += to_double(v(k)) * to_double(v(k));
    max_slope = std::max(max_slope, std::sqrt(norm));
  }
  rep.tau = 10.0 * gs.step() * max_slope;

  GridFunction psi_alpha = reference_potential(p_alpha, gs);
  GridFunction g = build_obstacle(p_beta, spec.m0, gs);

  std::vector<double> prev_env;
  for (double r : spec.r_schedule) {
    GridFunction g_r = regularized_max(g, -r);
    GridFunction h = psi_alpha;
    for (size_t i = 0; i < h.values.size(); ++i) h.values[i] += g_r.values[i];
    GridFunction u = constrained_envelope(h, sg);

    std::vector<char> contact(gs.size()), in_u(gs.size());
    for (size_t i = 0; i < gs.size(); ++i) {
      contact[i] = std::abs(u.values[i] - h.values[i]) <= rep.tau ? 1 : 0;
      in_u[i] = g.values[i] >= -r / 2 ? 1 : 0;
    }
    std::vector<char> comp(gs.size());
    for (size_t i = 0; i < gs.size(); ++i) comp[i] = in_u[i] ? 0 : 1;

    EnvelopeRunRow row;
    row.r = r;
    row.total_mass = ma_mass(u, sg);
    row.contact_mass = ma_mass(u, sg, contact);
    row.u_mass = ma_mass(u, sg, in_u);
    row.comp_mass = ma_mass(u, sg, comp);
    row.contact_fraction = row.total_mass > 0 ? row.contact_mass / row.total_mass : 1.0;
    double viol = 0;
    for (size_t i = 0; i < gs.size(); ++i) viol = std::max(viol, u.values[i] - h.values[i]);
    row.max_above_obstacle = viol;
    rep.rows.push_back(row);

    if (!prev_env.empty())
      for (size_t i = 0; i < gs.size(); ++i)
        if (u.values[i] > prev_env[i] + rep.tau) rep.monotone = false;
    prev_env = u.values;
  }
  // The regularized max lifts the obstacle by up to 1/4 at the floor
  // crossing, which biases the restricted mass by Theta(1/R). Extrapolate the
  // tail of the schedule in 1/R to estimate the limit.
  rep.vol_estimate = rep.rows.back().u_mass;
  if (rep.rows.size() >= 2) {
    const auto& last = rep.rows[rep.rows.size() - 1];
    const auto& prev = rep.rows[rep.rows.size() - 2];
    if (last.r > prev.r)
      rep.vol_estimate = (last.r * last.u_mass - prev.r * prev.u_mass) / (last.r - prev.r);
  }
  return rep;
}

}  // namespace poslab
