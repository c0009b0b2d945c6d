#include "defjump/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "defjump/jump.hpp"
#include "defjump/model_file.hpp"
#include "defjump/models.hpp"
#include "defjump/oracle.hpp"
#include "defjump/report.hpp"

namespace defjump {
namespace {

using nlohmann::json;

struct Flags {
  std::string format = "text";
  std::string config_path;
  bool show_config = false;
  double rank_tol = 0, hodge_tol = 0, obstruction_tol = 0, oracle_rank_tol = 0;
  double min_modulus = 0, max_modulus = 0;
  int order = 0, samples = 0;
  std::uint64_t seed = 0;
  std::string ob_convention;

  std::string model;
  int degree = 0;
  std::string choice;
  std::string target;
  std::string output;
};

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw Error(ErrorKind::UsageError, "cannot parse number '" + s + "'");
  return v;
}

void emit(std::ostream& out, const Flags& f, const json& doc) {
  if (f.format == "structured") {
    out << dump_structured(doc);
  } else {
    out << render_text(doc);
  }
}

std::string model_name(const std::string& path) { return std::filesystem::path(path).filename().string(); }

Vector choose(const VectorChoice& c, const Matrix& harmonic, int dim, const std::string& what) {
  if (c.is_index) {
    if (c.index < 0 || c.index >= harmonic.cols()) {
      throw Error(ErrorKind::UsageError, what + " index " + std::to_string(c.index) + " out of range: there are " +
                                             std::to_string(harmonic.cols()) + " harmonic classes");
    }
    return harmonic.col(c.index);
  }
  if (c.coeffs.size() != dim) {
    throw Error(ErrorKind::UsageError, what + " needs " + std::to_string(dim) + " coefficients, got " +
                                           std::to_string(c.coeffs.size()));
  }
  return c.coeffs;
}

}  // namespace

VectorChoice parse_vector_choice(const std::string& text) {
  VectorChoice c;
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    c.is_index = true;
    c.index = std::stoi(text);
    return c;
  }
  std::vector<Complex> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      vals.emplace_back(parse_number(item), 0.0);
    } else {
      vals.emplace_back(parse_number(item.substr(0, colon)), parse_number(item.substr(colon + 1)));
    }
  }
  if (vals.empty()) throw Error(ErrorKind::UsageError, "empty coefficient list");
  c.coeffs = Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  Flags f;
  CLI::App app{"Cohomology jump detection for deformed complexes", "defjump"};
  app.require_subcommand(0, 1);
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--config", f.config_path, "JSON config file");
  app.add_flag("--show-config", f.show_config, "Print the effective configuration and exit");
  auto* o_rank = app.add_option("--rank-tol", f.rank_tol, "Relative kernel threshold for Hodge data");
  auto* o_hodge = app.add_option("--hodge-tol", f.hodge_tol, "Validation tolerance");
  auto* o_obs = app.add_option("--obstruction-tol", f.obstruction_tol, "Relative obstruction threshold");
  auto* o_order = app.add_option("--order", f.order, "Truncation order N");
  auto* o_conv = app.add_option("--ob-convention", f.ob_convention, "half or full");
  auto* o_samples = app.add_option("--samples", f.samples, "Oracle sample count");
  auto* o_seed = app.add_option("--seed", f.seed, "Oracle seed");
  auto* o_ortol = app.add_option("--oracle-rank-tol", f.oracle_rank_tol, "Oracle relative rank threshold");
  auto* o_min = app.add_option("--min-modulus", f.min_modulus, "Smallest oracle sample modulus");
  auto* o_max = app.add_option("--max-modulus", f.max_modulus, "Largest oracle sample modulus");

  auto model_cmd = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->add_option("model", f.model, "Model file")->required();
    return s;
  };
  auto* c_validate = model_cmd("validate", "Validate every section of a model file");
  auto* c_hodge = model_cmd("hodge-report", "Hodge decomposition residuals and harmonic dimensions");
  auto* c_mc = model_cmd("mc-solve", "Kuranishi recursion from a harmonic degree-1 class");
  c_mc->add_option("--xi", f.choice, "Harmonic basis index or coefficients")->required();
  auto* c_extend = model_cmd("extend", "Canonical extension of a closed class");
  c_extend->add_option("--degree", f.degree, "Degree q")->required();
  c_extend->add_option("--class", f.choice, "Harmonic basis index or coefficients")->required();
  auto* c_obs = model_cmd("obstructions", "Images of the truncated obstruction maps out of degree q");
  c_obs->add_option("--degree", f.degree, "Degree q")->required();
  auto* c_verdict = model_cmd("jump-verdict", "Decide whether dim H^q jumps at t = 0");
  c_verdict->add_option("--degree", f.degree, "Degree q")->required();
  auto* c_oracle = model_cmd("oracle-compare", "Compare the verdict with sampled ranks");
  c_oracle->add_option("--degree", f.degree, "Degree q")->required();
  auto* c_models = app.add_subcommand("models", "Nilmanifold model builders");
  c_models->fallthrough();
  c_models->require_subcommand(1);
  auto* c_build = c_models->add_subcommand("build", "Build a model file from a preset or recipe file");
  c_build->fallthrough();
  c_build->add_option("recipe", f.target, "Preset name or recipe file")->required();
  c_build->add_option("-o,--output", f.output, "Write to a file instead of stdout");
  auto* c_list = c_models->add_subcommand("list", "List presets");
  c_list->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 1;
  }

  try {
    Config cfg;
    if (!f.config_path.empty()) apply_config_file(cfg, f.config_path);
    apply_environment(cfg, env);
    if (o_rank->count()) cfg.rank_tol = f.rank_tol;
    if (o_hodge->count()) cfg.hodge_tol = f.hodge_tol;
    if (o_obs->count()) cfg.obstruction_tol = f.obstruction_tol;
    if (o_order->count()) cfg.order = f.order;
    if (o_conv->count()) cfg.ob_convention = parse_ob_convention(f.ob_convention);
    if (o_samples->count()) cfg.oracle.count = f.samples;
    if (o_seed->count()) cfg.oracle.seed = f.seed;
    if (o_ortol->count()) cfg.oracle.rank_tol = f.oracle_rank_tol;
    if (o_min->count()) cfg.oracle.min_modulus = f.min_modulus;
    if (o_max->count()) cfg.oracle.max_modulus = f.max_modulus;
    cfg.validate();

    if (f.show_config) {
      out << config_to_json(cfg).dump(2) << "\n";
      return 0;
    }
    if (app.get_subcommands().empty()) {
      out << app.help();
      return 1;
    }

    if (c_list->parsed()) {
      for (const auto& name : preset_names()) out << name << "\n";
      return 0;
    }
    if (c_build->parsed()) {
      ModelRecipe recipe;
      if (auto p = preset(f.target)) {
        recipe = *p;
      } else {
        std::ifstream in(f.target);
        if (!in) throw Error(ErrorKind::UsageError, "'" + f.target + "' is neither a preset nor a readable file");
        try {
          recipe = parse_recipe(json::parse(in));
        } catch (const json::exception& e) {
          throw Error(ErrorKind::ParseError, f.target + ": " + e.what());
        }
      }
      if (o_order->count()) recipe.order = cfg.order;
      const InvariantModel m = build_invariant_model(recipe.spec);
      const Vector xi = ks_vector(m, recipe.xi);
      const KuranishiResult k = kuranishi_solve(m.ks, xi, recipe.order, cfg.obstruction_tol, cfg.ob_convention,
                                                cfg.hodge_tol);
      if (k.first_obstructed) {
        err << "warning: direction obstructed at order " << *k.first_obstructed
            << "; the series is not Maurer-Cartan\n";
      }
      json meta = {{"recipe", recipe_to_json(recipe)},
                   {"bundle", bundle_name(m.bundle)},
                   {"labels", m.labels},
                   {"ks_labels", m.ks_labels}};
      const std::string text = dump_structured(model_to_json(model_file_from(m, k.series, meta)));
      if (f.output.empty()) {
        out << text;
      } else {
        std::ofstream file(f.output);
        if (!file) throw Error(ErrorKind::UsageError, "cannot write " + f.output);
        file << text;
      }
      return 0;
    }

    const ResolvedModel r = resolve_model(load_model(f.model), cfg);
    const std::string name = model_name(f.model);
    JumpOptions jo{cfg.rank_tol, cfg.obstruction_tol, cfg.hodge_tol};

    if (c_validate->parsed()) {
      emit(out, f, envelope("validate", name, cfg, validate_report(r), "valid"));
      return 0;
    }
    if (c_hodge->parsed()) {
      emit(out, f, envelope("hodge-report", name, cfg, hodge_report(r.complex, r.hodge), "hodge data computed"));
      return 0;
    }
    if (c_mc->parsed()) {
      if (!r.dgla) throw Error(ErrorKind::UsageError, "mc-solve needs a dgla section");
      const Dgla& l = *r.dgla;
      if (!l.complex().in_range(1)) throw Error(ErrorKind::DegreeOutOfRange, "DGLA has no degree 1");
      const Vector xi = choose(parse_vector_choice(f.choice), l.hodge().harmonic_basis(1), l.complex().dim(1), "xi");
      const KuranishiResult k = kuranishi_solve(l, xi, cfg.order, cfg.obstruction_tol, cfg.ob_convention, cfg.hodge_tol);
      const std::string summary = k.first_obstructed ? "obstructed at order " + std::to_string(*k.first_obstructed)
                                                     : "unobstructed through order " + std::to_string(cfg.order);
      emit(out, f, envelope("mc-solve", name, cfg, kuranishi_report(l, k, xi, cfg), summary));
      return 0;
    }

    const OperatorSeries& p = require_series(r);
    if (c_extend->parsed()) {
      if (!r.complex.in_range(f.degree)) throw Error(ErrorKind::DegreeOutOfRange, "degree out of range");
      const Vector a = choose(parse_vector_choice(f.choice), r.hodge.harmonic_basis(f.degree), r.complex.dim(f.degree),
                              "class");
      const Extension e = extend_class(p, r.hodge, f.degree, a, cfg.order, cfg.obstruction_tol, cfg.hodge_tol);
      const std::string summary = e.obstructed_at ? "obstructed at order " + std::to_string(*e.obstructed_at)
                                                  : "extends through order " + std::to_string(cfg.order);
      emit(out, f, envelope("extend", name, cfg, extension_report(p, r.hodge, e), summary));
      return 0;
    }
    if (c_obs->parsed()) {
      std::vector<ObstructionImage> images;
      std::optional<int> first;
      for (int n = 1; n <= cfg.order; ++n) {
        images.push_back(obstruction_map_image(p, r.hodge, f.degree, n, cfg.rank_tol, cfg.obstruction_tol));
        if (!first && images.back().rank() > 0) first = n;
      }
      const std::string summary = first ? "first nonzero image at order " + std::to_string(*first)
                                        : "all images vanish through order " + std::to_string(cfg.order);
      emit(out, f, envelope("obstructions", name, cfg, obstructions_report(images), summary));
      return 0;
    }
    if (c_verdict->parsed()) {
      const JumpVerdict v = jump_verdict(p, r.hodge, f.degree, cfg.order, jo);
      emit(out, f, envelope("jump-verdict", name, cfg, verdict_report(v), verdict_summary(v)));
      return v.jumps() ? 2 : 0;
    }
    if (c_oracle->parsed()) {
      const OracleReport o = jump_oracle(p, f.degree, cfg.oracle);
      const JumpVerdict v = jump_verdict(p, r.hodge, f.degree, cfg.order, jo);
      const bool agree = o.jumps == v.jumps();
      json result = {{"oracle", oracle_report(o)}, {"verdict", verdict_report(v)}, {"agree", agree}};
      std::ostringstream summary;
      summary << "oracle dim " << o.dim_at_zero << " -> " << o.generic_dim << ", verdict " << verdict_summary(v)
              << (agree ? ": agree" : ": DISAGREE");
      emit(out, f, envelope("oracle-compare", name, cfg, result, summary.str()));
      return agree ? 0 : 1;
    }
    out << app.help();
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace defjump
