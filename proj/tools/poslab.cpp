// poslab: cones, decompositions, volumes and verification batches on the
// builtin (or user-supplied) lattice instances.

#include <CLI11.hpp>
#include <json.hpp>

#include "poslab/checks.hpp"
#include "poslab/envelope.hpp"
#include "poslab/surface.hpp"
#include "poslab/toric.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace poslab;
using nlohmann::json;

namespace {

// builtin name, direct path, or a file under $POSLAB_DATA
std::string resolve_instance(const std::string& name) {
  const auto& tn = ToricVariety::builtin_names();
  const auto& sn = Surface::builtin_names();
  if (std::find(tn.begin(), tn.end(), name) != tn.end()) return name;
  if (std::find(sn.begin(), sn.end(), name) != sn.end()) return name;
  if (std::filesystem::exists(name)) return name;
  if (const char* dir = std::getenv("POSLAB_DATA")) {
    for (const auto& cand : {std::filesystem::path(dir) / name,
                             std::filesystem::path(dir) / (name + ".json")})
      if (std::filesystem::exists(cand)) return cand.string();
  }
  throw InputError("cannot resolve instance '" + name +
                   "': not a builtin, not a file, not under POSLAB_DATA");
}

QVec parse_class(const std::string& s) {
  std::vector<Rational> xs;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) xs.push_back(parse_rational(tok));
  if (xs.empty()) throw InputError("empty class vector");
  return qvec(xs);
}

json vec_json(const QVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_string(v(i)));
  return a;
}

json rays_json(const std::vector<QVec>& rays) {
  json a = json::array();
  for (const auto& r : rays) a.push_back(vec_json(r));
  return a;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write " + out_path);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << out_path << "\n";
  }
}

bool is_toric_name(const std::string& inst) {
  const auto& tn = ToricVariety::builtin_names();
  return std::find(tn.begin(), tn.end(), inst) != tn.end();
}

// loads whichever lattice the instance describes, honoring --surface
struct Loaded {
  std::unique_ptr<ToricVariety> toric;
  std::unique_ptr<Surface> surface;
};

Loaded load_instance(const std::string& name, bool force_surface) {
  Loaded out;
  std::string path = resolve_instance(name);
  const auto& sn = Surface::builtin_names();
  bool surface_builtin = std::find(sn.begin(), sn.end(), name) != sn.end();
  if (!force_surface && is_toric_name(name)) {
    out.toric = std::make_unique<ToricVariety>(ToricVariety::named(name));
  } else if (surface_builtin) {
    out.surface = std::make_unique<Surface>(Surface::named(name));
  } else if (force_surface) {
    out.surface = std::make_unique<Surface>(Surface::from_json_file(path));
  } else {
    try {
      out.toric = std::make_unique<ToricVariety>(ToricVariety::from_json_file(path));
    } catch (const InputError&) {
      out.surface = std::make_unique<Surface>(Surface::from_json_file(path));
    }
  }
  return out;
}

json cones_payload(const Loaded& l) {
  json j;
  if (l.toric) {
    j["kind"] = "toric";
    j["nef_rays"] = rays_json(extremal_rays(l.toric->nef_cone()).rays);
    j["psef_rays"] = rays_json(extremal_rays(l.toric->psef_cone()).rays);
    j["dual_psef_rays"] = rays_json(extremal_rays(dual_cone(l.toric->psef_cone())).rays);
  } else {
    j["kind"] = "surface";
    j["nef_rays"] = rays_json(extremal_rays(l.surface->nef_cone()).rays);
    j["psef_rays"] = rays_json(extremal_rays(l.surface->psef_cone()).rays);
    j["dual_psef_rays"] =
        rays_json(extremal_rays(dual_cone(l.surface->psef_cone(), l.surface->form())).rays);
  }
  return j;
}

json report_json(const CheckReport& r) {
  return {{"theorem", r.theorem}, {"instance", r.instance}, {"inputs", r.inputs},
          {"lhs", r.lhs},         {"rhs", r.rhs},           {"margin", to_string(r.margin)},
          {"tolerance", r.tolerance}, {"verdict", r.verdict}, {"note", r.note},
          {"seed", r.seed}};
}

MorsePipelineSpec pipeline_spec_from_json(const json& j) {
  MorsePipelineSpec spec;
  auto vec = [](const json& a) {
    std::vector<Rational> xs;
    for (const auto& e : a)
      xs.push_back(e.is_string() ? parse_rational(e.get<std::string>())
                                 : Rational(e.get<long>()));
    return qvec(xs);
  };
  spec.alpha = vec(j.at("alpha"));
  spec.beta = vec(j.at("beta"));
  spec.m0 = vec(j.at("m0"));
  spec.L = j.value("L", 10.0);
  spec.N = j.value("N", 512);
  spec.M = j.value("M", 0);
  if (j.contains("R")) spec.r_schedule = j.at("R").get<std::vector<double>>();
  return spec;
}

json pipeline_report_json(const MorsePipelineReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.rows)
    rows.push_back({{"r", row.r},
                    {"total_mass", row.total_mass},
                    {"contact_mass", row.contact_mass},
                    {"u_mass", row.u_mass},
                    {"comp_mass", row.comp_mass},
                    {"contact_fraction", row.contact_fraction},
                    {"max_above_obstacle", row.max_above_obstacle}});
  return {{"dim", rep.dim},
          {"tau", rep.tau},
          {"oracle_total", rep.oracle_total},
          {"oracle_vol_diff", rep.oracle_vol_diff},
          {"binomial_bound", rep.binomial_bound},
          {"vol_estimate", rep.vol_estimate},
          {"monotone", rep.monotone},
          {"rows", rows}};
}

void write_rows_csv(const MorsePipelineReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "r,total_mass,contact_mass,u_mass,comp_mass,contact_fraction,max_above_obstacle\n";
  for (const auto& row : rep.rows)
    out << row.r << ',' << row.total_mass << ',' << row.contact_mass << ',' << row.u_mass << ','
        << row.comp_mass << ',' << row.contact_fraction << ',' << row.max_above_obstacle << "\n";
  std::cout << "wrote " << path << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"positivity laboratory on lattice instances"};
  app.require_subcommand(1);

  std::string instance, cls_str, alpha_str, beta_str, out_path, csv_path, theorem = "all";
  std::string spec_path;
  bool force_surface = false, double_l = false;
  int samples = 100;
  std::uint64_t seed = 20240817;

  auto add_common = [&](CLI::App* c, bool with_surface = true) {
    c->add_option("-o,--out", out_path, "write JSON here instead of stdout");
    if (with_surface) c->add_flag("--surface", force_surface, "force the surface lattice");
  };

  auto* cones = app.add_subcommand("cones", "extremal rays of the nef/psef cones");
  cones->add_option("instance", instance)->required();
  add_common(cones);

  auto* zariski = app.add_subcommand("zariski", "decompose a pseudoeffective surface class");
  zariski->add_option("instance", instance)->required();
  zariski->add_option("--class", cls_str, "comma-separated rational coordinates")->required();
  add_common(zariski, false);

  auto* volume = app.add_subcommand("volume", "volume and positivity predicates of a class");
  volume->add_option("instance", instance)->required();
  volume->add_option("--class", cls_str)->required();
  add_common(volume);

  auto* morse = app.add_subcommand("morse", "the two nef-pair volume bounds on one input");
  morse->add_option("instance", instance)->required();
  morse->add_option("--alpha", alpha_str)->required();
  morse->add_option("--beta", beta_str)->required();
  add_common(morse);

  auto* duality = app.add_subcommand("duality", "cone duality check");
  duality->add_option("instance", instance)->required();
  duality->add_option("-n,--samples", samples);
  duality->add_option("--seed", seed);
  add_common(duality);

  auto* verify = app.add_subcommand("verify", "batch theorem verification");
  verify->add_option("instance", instance)->required();
  verify->add_option("-t,--theorem", theorem,
                     "morse|binomial_morse|differentiability|orthogonality|concavity|"
                     "khovanskii_teissier|duality|all");
  verify->add_option("-n,--samples", samples);
  verify->add_option("--seed", seed);
  verify->add_option("--csv", csv_path, "also write a CSV of the reports");
  add_common(verify);

  auto* envelope = app.add_subcommand("envelope", "obstacle/envelope/mass pipeline from a spec");
  envelope->add_option("spec", spec_path, "JSON run spec")->required();
  envelope->add_option("--csv", csv_path, "write the per-R rows as CSV");
  envelope->add_flag("--double-L", double_l, "re-run at twice the box size, report the delta");
  add_common(envelope, false);

  auto* report = app.add_subcommand("report", "run every check on every builtin instance");
  report->add_option("-n,--samples", samples);
  report->add_option("--seed", seed);
  report->add_option("--csv", csv_path, "also write a CSV of the reports");
  add_common(report, false);

  CLI11_PARSE(app, argc, argv);

  json config = {{"seed", seed}, {"samples", samples}};

  if (cones->parsed()) {
    auto l = load_instance(instance, force_surface);
    json j = cones_payload(l);
    j["instance"] = instance;
    emit(j, out_path);
    return 0;
  }

  if (zariski->parsed()) {
    std::string path = resolve_instance(instance);
    auto s = std::filesystem::exists(path) && !is_toric_name(instance)
                 ? Surface::from_json_file(path)
                 : Surface::named(instance);
    QVec a = parse_class(cls_str);
    auto z = s.zariski(a);
    json neg = json::array();
    for (const auto& [idx, coeff] : z.negative)
      neg.push_back({{"curve", idx}, {"curve_class", vec_json(s.curves()[(size_t)idx])},
                     {"coefficient", to_string(coeff)}});
    emit({{"instance", instance},
          {"class", vec_json(a)},
          {"positive", vec_json(z.positive)},
          {"negative", neg},
          {"volume", to_string(s.volume(a))}},
         out_path);
    return 0;
  }

  if (volume->parsed()) {
    auto l = load_instance(instance, force_surface);
    QVec a = parse_class(cls_str);
    json j = {{"instance", instance}, {"class", vec_json(a)}};
    if (l.toric) {
      j["volume"] = to_string(l.toric->volume(a));
      j["nef"] = l.toric->is_nef(a);
      j["psef"] = l.toric->is_psef(a);
      j["big"] = l.toric->is_big(a);
    } else {
      j["volume"] = to_string(l.surface->volume(a));
      j["nef"] = l.surface->is_nef(a);
      j["psef"] = l.surface->is_psef(a);
      j["big"] = l.surface->is_big(a);
    }
    emit(j, out_path);
    return 0;
  }

  if (morse->parsed()) {
    auto l = load_instance(instance, force_surface);
    QVec a = parse_class(alpha_str), b = parse_class(beta_str);
    json j = {{"instance", instance}};
    if (l.toric) {
      j["morse"] = report_json(check_morse(*l.toric, instance, a, b));
      j["binomial_morse"] = report_json(check_binomial_morse(*l.toric, instance, a, b));
    } else {
      j["morse"] = report_json(check_morse(*l.surface, instance, a, b));
      j["binomial_morse"] = report_json(check_binomial_morse(*l.surface, instance, a, b));
    }
    emit(j, out_path);
    bool ok = j["morse"]["verdict"] == "pass" && j["binomial_morse"]["verdict"] == "pass";
    return ok ? 0 : 3;
  }

  if (duality->parsed()) {
    auto l = load_instance(instance, force_surface);
    auto r = l.toric ? check_duality(*l.toric, instance, samples, seed)
                     : check_duality(*l.surface, instance);
    json j = {{"config", config}, {"report", report_json(r)}};
    emit(j, out_path);
    return r.passed() ? 0 : 3;
  }

  if (verify->parsed() || report->parsed()) {
    std::vector<CheckReport> all;
    if (verify->parsed()) {
      auto kind = force_surface ? InstanceKind::Surface : InstanceKind::Auto;
      all = run_checks(theorem, resolve_instance(instance), samples, seed, kind);
    } else {
      for (const auto& n : ToricVariety::builtin_names()) {
        auto batch = run_checks("all", n, samples, seed, InstanceKind::Toric);
        all.insert(all.end(), batch.begin(), batch.end());
      }
      for (const auto& n : Surface::builtin_names()) {
        auto batch = run_checks("all", n, samples, seed, InstanceKind::Surface);
        all.insert(all.end(), batch.begin(), batch.end());
      }
    }
    int passes = 0, fails = 0, skips = 0;
    json arr = json::array();
    for (const auto& r : all) {
      arr.push_back(report_json(r));
      (r.verdict == "pass" ? passes : r.verdict == "skip" ? skips : fails)++;
    }
    json j = {{"config", config}, {"passes", passes}, {"fails", fails},
              {"skips", skips},   {"reports", arr}};
    if (verify->parsed()) j["config"]["instance"] = instance, j["config"]["theorem"] = theorem;
    emit(j, out_path);
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      if (!out) throw InputError("cannot write " + csv_path);
      write_reports_csv(all, out);
      std::cout << "wrote " << csv_path << "\n";
    }
    std::cerr << passes << " pass, " << skips << " skip, " << fails << " fail\n";
    return fails == 0 ? 0 : 3;
  }

  if (envelope->parsed()) {
    std::ifstream in(resolve_instance(spec_path));
    if (!in) throw InputError("cannot read " + spec_path);
    json sj = json::parse(in, nullptr, true, true);
    auto x = ToricVariety::named(sj.at("instance").get<std::string>());
    auto spec = pipeline_spec_from_json(sj);
    auto rep = run_morse_pipeline(x, spec);
    json j = {{"config", sj}, {"report", pipeline_report_json(rep)}};
    if (double_l) {
      auto spec2 = spec;
      spec2.L *= 2;
      auto rep2 = run_morse_pipeline(x, spec2);
      j["double_L"] = pipeline_report_json(rep2);
      j["boundary_effect_delta"] = rep2.vol_estimate - rep.vol_estimate;
    }
    emit(j, out_path);
    if (!csv_path.empty()) write_rows_csv(rep, csv_path);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const RegimeError& e) {
    std::cerr << "regime refusal: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
