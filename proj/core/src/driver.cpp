#include "sglimit/driver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sglimit/bounds.hpp"
#include "sglimit/errors.hpp"
#include "sglimit/experiments.hpp"
#include "sglimit/functionals.hpp"
#include "sglimit/io.hpp"
#include "sglimit/ou_sim.hpp"
#include "sglimit/sgld_sim.hpp"

namespace sglimit {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kOuEnsembleTag = 0x6f752d656e73ULL;
constexpr std::uint64_t kMaxIneqTag = 0x6d61782d696e6571ULL;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a nonnegative integer");
  }
  return v;
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::vector<PathFunctional> parse_dictionary(const ConfigMap& cfg) {
  const std::string spec = cfg.str("bw_dictionary");
  if (spec == "default") return default_bw_dictionary();
  std::vector<PathFunctional> out;
  for (const auto& item : split(spec, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    auto arg = [&](std::size_t i) {
      if (i >= parts.size()) throw ConfigError("bw_dictionary item '" + item + "' is missing parameters");
      return parse_real("bw_dictionary", parts[i]);
    };
    const std::size_t want = parts[0] == "clipped_sup" ? 2 : 3;
    if (parts[0] == "clipped_sup") {
      out.push_back(clipped_sup(arg(1)));
    } else if (parts[0] == "eval_clip") {
      out.push_back(eval_clip(arg(1), arg(2)));
    } else if (parts[0] == "clipped_average") {
      out.push_back(clipped_average(arg(1), arg(2)));
    } else {
      throw ConfigError("bw_dictionary: unknown functional '" + parts[0] + "'");
    }
    if (parts.size() != want) throw ConfigError("bw_dictionary item '" + item + "' has extra parameters");
  }
  if (out.empty()) throw ConfigError("bw_dictionary is empty");
  return out;
}

std::string path_in(const ExperimentConfig& ec, const std::string& name) {
  return (fs::path(ec.out_dir) / name).string();
}

std::vector<std::pair<std::string, std::string>> ensemble_meta(const AlgoConfig& cfg, const PathEnsemble& ens,
                                                               std::uint64_t seed) {
  return {{"h", format_double(cfg.h)},
          {"b", std::to_string(cfg.b)},
          {"beta_inv", format_double(cfg.beta_inv)},
          {"alpha", std::to_string(ens.alpha)},
          {"w", format_double(ens.w)},
          {"seed", std::to_string(seed)},
          {"label", ens.label}};
}

void write_ensemble(const ExperimentConfig& ec, const AlgoConfig& cfg, const PathEnsemble& ens,
                    std::uint64_t seed) {
  const std::string base = path_in(ec, "ensemble_" + ens.label);
  write_ensemble_csv(base + ".csv", ens);
  write_key_values(base + ".meta", ensemble_meta(cfg, ens, seed));
}

struct Prepared {
  GlmModel model;
  ModelConstants constants;
  AlgoConfig algo;
};

Prepared prepare(const ConfigMap& cfg) {
  Prepared p;
  p.model = build_model(cfg);
  p.constants = model_constants(p.model);
  p.algo = build_algo(cfg, p.model.size());
  return p;
}

std::size_t replicates(const ConfigMap& cfg, std::size_t min) {
  const std::size_t R = cfg.count("replicates");
  if (R < min) throw ConfigError("replicates must be at least " + std::to_string(min) + " for this study");
  return R;
}

PathEnsemble limit_ensemble(const Prepared& p, std::size_t R, int threads) {
  return ou_ensemble(limit_params(p.constants, p.algo), p.algo.alpha, R,
                     derive_seed(p.algo.master_seed, kOuEnsembleTag), threads);
}

void study_simulate(const ExperimentConfig& ec, const Prepared& p) {
  const std::size_t R = replicates(ec.values, 1);
  for (const auto& kind : split(ec.values.str("paths"), ',')) {
    if (kind == "sgld") {
      write_ensemble(ec, p.algo, sgld_ensemble(p.model, p.constants, p.algo, R, ec.threads), p.algo.master_seed);
    } else if (kind == "linearized") {
      write_ensemble(ec, p.algo, linearized_ensemble(p.constants, p.algo, R, ec.threads), p.algo.master_seed);
    } else if (kind == "ou") {
      write_ensemble(ec, p.algo, limit_ensemble(p, R, ec.threads), derive_seed(p.algo.master_seed, kOuEnsembleTag));
    } else {
      throw ConfigError("paths: unknown path kind '" + kind + "' (expected sgld, linearized or ou)");
    }
  }
}

void study_compare(const ExperimentConfig& ec, const Prepared& p) {
  const std::size_t R = replicates(ec.values, 2);
  const auto ensY = sgld_ensemble(p.model, p.constants, p.algo, R, ec.threads);
  const auto ensZ = limit_ensemble(p, R, ec.threads);
  std::vector<DistanceRow> rows;
  for (const auto& g : {g1(), g2()}) rows.push_back({functional_gap(ensY, ensZ, g), ensY.label, ensZ.label});
  write_distance_csv(path_in(ec, "compare.csv"), rows);
}

void write_rate_svg(const std::string& path, const RateStudyResult& res) {
  std::vector<double> lx, ly;
  for (const auto& pt : res.points) {
    lx.push_back(std::log2(pt.h));
    ly.push_back(std::log2(pt.gap_g2));
  }
  const double x0 = *std::min_element(lx.begin(), lx.end()) - 0.5;
  const double x1 = *std::max_element(lx.begin(), lx.end()) + 0.5;
  const double y0 = *std::min_element(ly.begin(), ly.end()) - 0.5;
  const double y1 = *std::max_element(ly.begin(), ly.end()) + 0.5;
  const double W = 480, H = 360, M = 50;
  auto sx = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  auto sy = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">log2 h</text>\n";
  out << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
      << ")\" text-anchor=\"middle\">log2 gap(g2)</text>\n";
  const double ln2 = std::log(2.0);
  auto fit = [&](double x) { return (res.fit.intercept + res.fit.slope * x * ln2) / ln2; };
  out << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(fit(x0)) << "\" x2=\"" << sx(x1) << "\" y2=\"" << sy(fit(x1))
      << "\" stroke=\"steelblue\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i) {
    out << "<circle cx=\"" << sx(lx[i]) << "\" cy=\"" << sy(ly[i]) << "\" r=\"4\" fill=\"firebrick\"/>\n";
  }
  out << "<text x=\"" << M + 10 << "\" y=\"" << M - 10 << "\">slope " << format_double(res.fit.slope) << " (se "
      << format_double(res.fit.slope_stderr) << ")</text>\n";
  out << "</svg>\n";
}

void study_rate(const ExperimentConfig& ec, const Prepared& p) {
  RateStudySpec spec;
  spec.h_grid = ec.values.reals("h_grid");
  spec.b = ec.values.count("b");
  spec.beta_coupling = ec.values.real("beta_coupling");
  spec.c1 = ec.values.real("c1");
  spec.c2 = ec.values.real("c2");
  spec.c3 = ec.values.real("c3");
  spec.replicates = replicates(ec.values, 2);
  spec.seed = p.algo.master_seed;
  spec.threads = ec.threads;
  spec.plain_estimator = ec.values.flag("plain_estimator");
  const auto res = rate_study(p.model, p.constants, spec);

  std::vector<std::string> header = {"h", "alpha", "w", "beta_inv", "B", "A", "replicates", "gap_g2", "gap_g2_se",
                                     "mean_g1", "mean_g1_se", "var_y", "var_y_se", "var_z", "var_gap",
                                     "var_gap_se"};
  if (spec.plain_estimator) {
    header.push_back("plain_gap_g2");
    header.push_back("plain_gap_g2_se");
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    const auto& pt = res.points[i];
    std::vector<std::string> row = {format_double(pt.h),        std::to_string(pt.alpha),
                                    format_double(pt.w),        format_double(pt.beta_inv),
                                    format_double(pt.limit.B),  format_double(pt.limit.A),
                                    std::to_string(pt.replicates), format_double(pt.gap_g2),
                                    format_double(pt.gap_g2_se), format_double(pt.mean_g1),
                                    format_double(pt.mean_g1_se), format_double(pt.var_y),
                                    format_double(pt.var_y_se), format_double(pt.var_z),
                                    format_double(pt.var_gap),  format_double(pt.var_gap_se)};
    if (spec.plain_estimator) {
      row.push_back(format_double(res.plain[i].value));
      row.push_back(format_double(res.plain[i].std_error));
    }
    rows.push_back(std::move(row));
  }
  write_table_csv(path_in(ec, "rate_study.csv"), header, rows);
  write_table_csv(path_in(ec, "rate_fit.csv"),
                  {"slope", "slope_stderr", "intercept", "residual_sd", "points", "monotone"},
                  {{format_double(res.fit.slope), format_double(res.fit.slope_stderr),
                    format_double(res.fit.intercept), format_double(res.fit.residual_sd),
                    std::to_string(res.fit.points), res.monotone ? "true" : "false"}});
  write_rate_svg(path_in(ec, "rate_study.svg"), res);
}

void study_ou_verify(const ExperimentConfig& ec) {
  const auto as = ec.values.reals("maxineq_a");
  const auto As = ec.values.reals("maxineq_A");
  const auto ps = ec.values.reals("maxineq_p");
  const std::size_t R = replicates(ec.values, 100);
  const std::size_t grid = ec.values.count("maxineq_grid");
  const std::uint64_t seed = ec.values.u64("seed");
  std::vector<std::vector<std::string>> rows;
  std::uint64_t index = 0;
  for (double p : ps) {
    for (double a : as) {
      for (double A : As) {
        MaxIneqSpec spec;
        spec.a = a;
        spec.A = A;
        spec.gamma = A / (2.0 * a);
        spec.p = p;
        spec.grid_size = grid;
        spec.replicates = R;
        const auto r = maximal_inequality_experiment(spec, derive_seed(derive_seed(seed, kMaxIneqTag), index++),
                                                     ec.threads);
        rows.push_back({format_double(a), format_double(A), format_double(spec.gamma), format_double(p),
                        std::to_string(grid), std::to_string(r.replicates), format_double(r.lhs_mc),
                        format_double(r.std_error), format_double(r.rhs_no_cp), format_double(r.implied_Cp)});
      }
    }
  }
  write_table_csv(path_in(ec, "max_inequality.csv"),
                  {"a", "A", "gamma", "p", "grid_size", "replicates", "lhs_mc", "stderr", "rhs_no_cp", "implied_Cp"},
                  rows);
}

void study_metrics(const ExperimentConfig& ec, const Prepared& p) {
  const std::size_t R = replicates(ec.values, 2);
  const auto ensY = sgld_ensemble(p.model, p.constants, p.algo, R, ec.threads);
  const auto ensZ = limit_ensemble(p, R, ec.threads);
  const auto eps = ec.values.is_auto("eps_grid") ? auto_eps_grid() : ec.values.reals("eps_grid");
  LevyProkhorovOptions lp;
  lp.max_centers = ec.values.count("lp_centers");
  const auto dict = parse_dictionary(ec.values);
  std::vector<DistanceRow> rows;
  rows.push_back({levy_prokhorov_estimate(ensY, ensZ, eps, lp), ensY.label, ensZ.label});
  rows.push_back({bounded_wasserstein_lower(ensY, ensZ, dict), ensY.label, ensZ.label});
  write_distance_csv(path_in(ec, "metrics.csv"), rows);
}

BoundInputs resolved_bound_inputs(const ExperimentConfig& ec, const Prepared& p) {
  double K1 = 0.0, K3 = 0.0;
  if (ec.values.is_auto("K1") || ec.values.is_auto("K3")) {
    AssumptionCheckOptions opts;
    opts.replicates = ec.values.count("assumption_replicates");
    opts.threads = ec.threads;
    opts.model = &p.model;
    const auto rep = check_assumptions(p.constants, p.algo, opts);
    K1 = rep.K1_hat;
    K3 = rep.K3_hat;
  }
  if (!ec.values.is_auto("K1")) K1 = ec.values.real("K1");
  if (!ec.values.is_auto("K3")) K3 = ec.values.real("K3");
  const double C_bar = ec.values.is_auto("C_bar") ? static_cast<double>(p.algo.alpha) * p.algo.h
                                                   : ec.values.real("C_bar");
  return bound_inputs(p.constants, p.algo, K1, K3, ec.values.real("c_num"), C_bar);
}

void study_bounds(const ExperimentConfig& ec, const Prepared& p) {
  const BoundInputs in = resolved_bound_inputs(ec, p);
  const auto bd = eps_components(in);
  std::vector<BoundTerm> simple_terms;
  const double simple = general_simplified_bound(in, &simple_terms);
  double rate = 0.0;
  if (const auto* st = std::get_if<StatisticalSetting>(&p.algo.setting)) {
    rate = simplified_rate_statistical(static_cast<double>(st->n), in.b, st->m, in.C_R, in.L, in.c_num);
  } else {
    rate = simplified_rate_numerical(in.h, in.beta_inv, in.C_R, in.L, in.c_num);
  }
  const auto ex = metric_rate_exponents(ec.values.real("metric_r"));

  const std::vector<std::pair<std::string, double>> cols = {
      {"L", in.L},           {"C_R", in.C_R},         {"Omega", in.Omega},     {"Sigma", in.Sigma},
      {"E_psi4", in.E_psi4}, {"E_psi6", in.E_psi6},   {"h", in.h},             {"b", in.b},
      {"beta_inv", in.beta_inv}, {"alpha", in.alpha}, {"w", in.w},             {"K1", in.K1},
      {"K3", in.K3},         {"c_num", in.c_num},     {"C_bar", in.C_bar},     {"eps_R", bd.eps_R},
      {"eps_Z", bd.eps_Z},   {"eps_rem", bd.eps_rem}, {"eps_exch", bd.eps_exch}, {"eps_cov", bd.eps_cov},
      {"D1", bd.D1},         {"D2", bd.D2},           {"E1", bd.E1},           {"C_max", bd.C_max},
      {"total", bd.total},   {"general_simplified", simple}, {"simplified_rate", rate},
      {"lp_exponent", ex.lp_exponent}, {"bw_exponent", ex.bw_exponent}};
  std::vector<std::string> header, row;
  for (const auto& [k, v] : cols) {
    header.push_back(k);
    row.push_back(format_double(v));
  }
  header.push_back("sigma_zero_limit");
  row.push_back(bd.sigma_zero_limit ? "true" : "false");
  write_table_csv(path_in(ec, "bounds.csv"), header, {row});

  if (ec.explain) {
    auto& os = *ec.explain;
    for (const auto& t : bd.terms) os << t.component << "  " << t.formula << " = " << format_double(t.value) << '\n';
    for (const auto& t : simple_terms) {
      os << t.component << "  " << t.formula << " = " << format_double(t.value) << '\n';
    }
    os << "total = " << format_double(bd.total) << '\n';
  }
}

void study_var_avg(const ExperimentConfig& ec, const Prepared& p) {
  const std::size_t R = replicates(ec.values, 2);
  const BoundInputs in = resolved_bound_inputs(ec, p);
  const double eps = ec.values.is_auto("var_eps") ? eps_components(in).total : ec.values.real("var_eps");
  const auto ensY = sgld_ensemble(p.model, p.constants, p.algo, R, ec.threads);
  const auto rep = variance_gap(ensY, limit_params(p.constants, p.algo), eps);
  const auto iab = iterate_average_bound(eps, std::abs(rep.mean_g1), in);
  write_table_csv(path_in(ec, "var_avg.csv"),
                  {"var_y", "var_y_se", "mean_g1", "mean_g1_se", "var_z_analytic", "gap", "eps", "rhs_bound",
                   "mean_rhs", "K1", "replicates"},
                  {{format_double(rep.var_y), format_double(rep.var_y_se), format_double(rep.mean_g1),
                    format_double(rep.mean_g1_se), format_double(rep.var_z_analytic), format_double(rep.gap),
                    format_double(eps), format_double(rep.rhs_bound), format_double(iab.mean_rhs),
                    format_double(in.K1), std::to_string(rep.replicates)}});
}

void write_manifest(const ExperimentConfig& ec, const ConfigMap& values, const AlgoConfig* algo) {
  std::ofstream out(path_in(ec, "manifest.txt"), std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write the manifest in '" + ec.out_dir + "'");
  out << "# sglimit manifest; rerun with: sglimit " << study_name(ec.study) << " --config manifest.txt\n";
  if (algo) {
    out << "# realized alpha = " << algo->alpha << ", h = " << format_double(algo->h)
        << ", w = " << format_double(algo->w) << ", beta_inv = " << format_double(algo->beta_inv)
        << ", setting = " << setting_name(algo->setting) << '\n';
  }
  for (const auto& [k, v] : values.resolved()) out << k << " = " << v << '\n';
}

}  // namespace

std::string study_name(Study s) {
  switch (s) {
    case Study::Simulate: return "simulate";
    case Study::Compare: return "compare";
    case Study::RateStudy: return "rate-study";
    case Study::OuVerify: return "ou-verify";
    case Study::Metrics: return "metrics";
    case Study::Bounds: return "bounds";
    case Study::VarAvg: return "var-avg";
  }
  return "unknown";
}

Study parse_study(const std::string& name) {
  for (Study s : {Study::Simulate, Study::Compare, Study::RateStudy, Study::OuVerify, Study::Metrics, Study::Bounds,
                  Study::VarAvg}) {
    if (study_name(s) == name) return s;
  }
  throw ConfigError("unknown study '" + name + "'");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"model_file", "", "model file path; empty selects synthetic data"},
      {"family", "logistic", "synthetic family: linear, logistic or poisson"},
      {"n", "200", "synthetic sample size"},
      {"covariate_c", "3", "synthetic covariates are uniform on [-c, c]"},
      {"theta_true", "1", "synthetic true parameter"},
      {"intercept", "1", "GLM intercept beta0 (synthetic data)"},
      {"noise_sd", "1", "synthetic linear-family noise sd"},
      {"domain_lo", "-2", "synthetic Poisson domain lower end"},
      {"domain_hi", "2", "synthetic Poisson domain upper end"},
      {"data_seed", "1", "synthetic data seed"},
      {"preset", "numerical", "raw, numerical or statistical"},
      {"h", "0.0625", "step size (raw, numerical)"},
      {"b", "1", "batch size"},
      {"beta_inv", "0.0625", "inverse temperature 1/beta; 0 is SGD (raw, numerical)"},
      {"alpha", "64", "steps per unit time (raw)"},
      {"w", "1", "spatial scaling (raw)"},
      {"c1", "4", "numerical preset: alpha = c1 / h"},
      {"c2", "1", "numerical preset: w = c2 min(sqrt(b/h), sqrt(beta))"},
      {"c3", "1", "numerical preset: b <= c3 h^-4"},
      {"w1", "1", "statistical preset: h = 2 w1 b / n"},
      {"w2", "1", "statistical preset: beta = n / w2"},
      {"m", "1", "statistical preset: epochs, alpha = m n / b"},
      {"epochs_c", "1", "statistical preset: requires m <= epochs_c sqrt(n)"},
      {"replicates", "1000", "Monte Carlo replicates R"},
      {"seed", "0", "master seed"},
      {"paths", "sgld", "simulate: comma list of sgld, linearized, ou"},
      {"h_grid", "0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125",
       "rate-study: strictly decreasing step sizes"},
      {"beta_coupling", "1", "rate-study: beta_inv = beta_coupling * h"},
      {"plain_estimator", "false", "rate-study: also report the plain independent-sample gap"},
      {"maxineq_a", "0.5,1,2,4", "ou-verify: mean-reversion grid"},
      {"maxineq_A", "0.5,2", "ou-verify: diffusion grid"},
      {"maxineq_p", "1,2,3", "ou-verify: moment orders"},
      {"maxineq_grid", "500", "ou-verify: time grid size"},
      {"eps_grid", "auto", "metrics: LP radius grid; auto is 0.01..1 step 0.01"},
      {"lp_centers", "0", "metrics: ball centers (0 uses every path)"},
      {"bw_dictionary", "default",
       "metrics: default, or ';' list of clipped_sup:c, eval_clip:t:c, clipped_average:slope:c"},
      {"K1", "auto", "assumption constant K1; auto estimates it"},
      {"K3", "auto", "assumption constant K3; auto estimates it"},
      {"assumption_replicates", "2000", "replicates for the K1, K3 estimates"},
      {"c_num", "1", "prefactor for unspecified constants"},
      {"C_bar", "auto", "cap on alpha h; auto uses the realized alpha h"},
      {"metric_r", "2", "moment order r for the metric rate exponents"},
      {"var_eps", "auto", "var-avg: eps; auto uses the bound total"},
  };
  return keys;
}

ConfigMap ConfigMap::parse(std::istream& in, const std::string& source) {
  ConfigMap cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (cfg.has(key)) throw ConfigError(source + ":" + std::to_string(lineno) + ": repeated key '" + key + "'");
    try {
      cfg.set(key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse(in, path);
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = value;
}

const std::string& ConfigMap::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  const ConfigKey* k = find_key(key);
  if (!k) throw ConfigError("unknown key '" + key + "'");
  return k->default_value;
}

double ConfigMap::real(const std::string& key) const { return parse_real(key, str(key)); }

std::size_t ConfigMap::count(const std::string& key) const {
  return static_cast<std::size_t>(parse_u64(key, str(key)));
}

std::uint64_t ConfigMap::u64(const std::string& key) const { return parse_u64(key, str(key)); }

bool ConfigMap::flag(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false");
}

std::vector<double> ConfigMap::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(str(key), ',')) out.push_back(parse_real(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
  return out;
}

std::vector<std::pair<std::string, std::string>> ConfigMap::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_keys()) out.emplace_back(k.name, str(k.name));
  return out;
}

GlmModel build_model(const ConfigMap& cfg) {
  const std::string& file = cfg.str("model_file");
  if (!file.empty()) {
    if (!fs::exists(file)) throw ConfigError("model_file '" + file + "' does not exist");
    return load_model(file);
  }
  SynthSpec s;
  s.family = parse_family(cfg.str("family"));
  s.n = cfg.count("n");
  s.c = cfg.real("covariate_c");
  s.theta_true = cfg.real("theta_true");
  s.intercept = cfg.real("intercept");
  s.noise_sd = cfg.real("noise_sd");
  s.domain_lo = cfg.real("domain_lo");
  s.domain_hi = cfg.real("domain_hi");
  s.seed = cfg.u64("data_seed");
  return synth_data(s);
}

AlgoConfig build_algo(const ConfigMap& cfg, std::size_t n) {
  const std::string& preset = cfg.str("preset");
  const std::uint64_t seed = cfg.u64("seed");
  const std::size_t b = cfg.count("b");
  AlgoConfig a;
  if (preset == "raw") {
    a.h = cfg.real("h");
    a.b = b;
    a.beta_inv = cfg.real("beta_inv");
    a.alpha = cfg.count("alpha");
    a.alpha_requested = static_cast<double>(a.alpha);
    a.w = cfg.real("w");
    a.master_seed = seed;
    a.validate();
  } else if (preset == "numerical") {
    a = AlgoConfig::numerical(cfg.real("h"), b, cfg.real("beta_inv"), cfg.real("c1"), cfg.real("c2"),
                              cfg.real("c3"), seed);
  } else if (preset == "statistical") {
    a = AlgoConfig::statistical(n, b, cfg.real("w1"), cfg.real("w2"), cfg.real("m"), cfg.real("epochs_c"), seed);
  } else {
    throw ConfigError("preset must be raw, numerical or statistical");
  }
  return a;
}

void run_study(const ExperimentConfig& ec) {
  ConfigMap values = ec.values;
  const std::string& file = values.str("model_file");
  if (!file.empty()) values.set("model_file", fs::absolute(file).lexically_normal().string());

  std::error_code err;
  fs::create_directories(ec.out_dir, err);
  if (err) throw ConfigError("cannot create output directory '" + ec.out_dir + "': " + err.message());

  ExperimentConfig local = ec;
  local.values = values;
  if (ec.study == Study::OuVerify) {
    study_ou_verify(local);
    write_manifest(local, values, nullptr);
    return;
  }
  const Prepared p = prepare(values);
  switch (ec.study) {
    case Study::Simulate: study_simulate(local, p); break;
    case Study::Compare: study_compare(local, p); break;
    case Study::RateStudy: study_rate(local, p); break;
    case Study::Metrics: study_metrics(local, p); break;
    case Study::Bounds: study_bounds(local, p); break;
    case Study::VarAvg: study_var_avg(local, p); break;
    case Study::OuVerify: break;
  }
  write_manifest(local, values, ec.study == Study::RateStudy ? nullptr : &p.algo);
}

int run(const ExperimentConfig& ec, std::ostream& err) {
  try {
    run_study(ec);
    return 0;
  } catch (const ConfigError& e) {
    err << "sglimit: config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "sglimit: numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::bad_alloc&) {
    err << "sglimit: config error: out of memory (reduce replicates or alpha)\n";
    return 2;
  }
}

}  // namespace sglimit
