#include "sglimit/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "sglimit/errors.hpp"
#include "sglimit/stats.hpp"

namespace sglimit {

namespace {

void check_grids(const PathEnsemble& a, const PathEnsemble& b) {
  if (a.alpha != b.alpha) throw ConfigError("ensembles are on different grids");
  if (a.replicates < 1 || b.replicates < 1) throw ConfigError("ensembles must be nonempty");
}

double variance_or_nan(const std::vector<double>& v) {
  return v.size() >= 2 ? sample_variance(v) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<double> evaluate_rows(const PathFunctional& g, const PathEnsemble& ens) {
  std::vector<double> out(ens.replicates);
  for (std::size_t r = 0; r < ens.replicates; ++r) out[r] = evaluate(g, ens.row(r));
  return out;
}

DistanceEstimate functional_gap(const PathEnsemble& ensA, const PathEnsemble& ensB, const PathFunctional& g) {
  check_grids(ensA, ensB);
  const auto va = evaluate_rows(g, ensA);
  const auto vb = evaluate_rows(g, ensB);
  DistanceEstimate out;
  out.value = std::abs(mean(va) - mean(vb)) / g.m_norm_bound;
  out.std_error = std::sqrt(variance_or_nan(va) / static_cast<double>(va.size()) +
                            variance_or_nan(vb) / static_cast<double>(vb.size())) /
                  g.m_norm_bound;
  out.replicates = std::min(va.size(), vb.size());
  out.method = "functional_gap_" + g.name();
  return out;
}

DistanceEstimate functional_gap_paired(const PathEnsemble& ensA, const PathEnsemble& ensB,
                                       const PathFunctional& g) {
  check_grids(ensA, ensB);
  if (ensA.replicates != ensB.replicates) throw ConfigError("paired ensembles need equal replicate counts");
  std::vector<double> d(ensA.replicates);
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = evaluate(g, ensA.row(r)) - evaluate(g, ensB.row(r));
  DistanceEstimate out;
  out.value = std::abs(mean(d)) / g.m_norm_bound;
  out.std_error = std::sqrt(variance_or_nan(d) / static_cast<double>(d.size())) / g.m_norm_bound;
  out.replicates = d.size();
  out.method = "functional_gap_paired_" + g.name();
  return out;
}

double ou_average_variance(const OuParams& p, std::size_t nodes) {
  p.validate();
  if (nodes < 8 || nodes % 8 != 0) throw ConfigError("quadrature nodes must be a positive multiple of 8");
  if (p.A == 0.0) return 0.0;
  using Rule = boost::math::quadrature::gauss<double, 8>;
  const std::size_t panels = nodes / 8;
  const double width = 1.0 / static_cast<double>(panels);

  auto inner = [&](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < panels; ++j) {
      const double lo = width * static_cast<double>(j);
      s += Rule::integrate([&](double v) { return ou_covariance(p, t, t * v) * t; }, lo, lo + width);
    }
    return s;
  };
  double total = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = width * static_cast<double>(i);
    total += Rule::integrate(inner, lo, lo + width);
  }
  return 2.0 * total;
}

VarianceGapReport variance_gap(const PathEnsemble& ensY, const OuParams& paramsZ, double eps) {
  if (ensY.replicates < 2) throw ConfigError("variance_gap needs at least two replicates");
  if (!(eps >= 0.0)) throw ConfigError("eps must be nonnegative");
  const auto a = evaluate_rows(g1(), ensY);
  const auto n = static_cast<double>(a.size());
  VarianceGapReport rep;
  rep.replicates = a.size();
  rep.mean_g1 = mean(a);
  rep.var_y = sample_variance(a);
  rep.mean_g1_se = std::sqrt(rep.var_y / n);
  std::vector<double> d4(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - rep.mean_g1;
    d4[i] = d * d * d * d;
  }
  rep.var_y_se = std::sqrt(std::max(0.0, mean(d4) - rep.var_y * rep.var_y) / n);
  rep.var_z_analytic = ou_average_variance(paramsZ);
  rep.gap = std::abs(rep.var_y - rep.var_z_analytic);
  rep.rhs_bound = (1.53 * std::abs(rep.mean_g1) + 3.53) * eps;
  return rep;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

DistanceEstimate levy_prokhorov_estimate(const PathEnsemble& ensA, const PathEnsemble& ensB,
                                         std::span<const double> eps_grid, const LevyProkhorovOptions& opts) {
  check_grids(ensA, ensB);
  if (eps_grid.empty()) throw ConfigError("eps_grid must be nonempty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] >= 0.0) || (i > 0 && !(eps_grid[i] > eps_grid[i - 1]))) {
      throw ConfigError("eps_grid must be nonnegative and strictly increasing");
    }
  }
  const std::size_t centers =
      opts.max_centers == 0 ? ensB.replicates : std::min(opts.max_centers, ensB.replicates);
  const double na = static_cast<double>(ensA.replicates);
  const double nb = static_cast<double>(ensB.replicates);

  // sorted sup-norm distances from every center to every path of A and of B
  std::vector<std::vector<double>> dist_a(centers), dist_b(centers);
  for (std::size_t j = 0; j < centers; ++j) {
    const auto c = ensB.row(j);
    dist_a[j].resize(ensA.replicates);
    dist_b[j].resize(ensB.replicates);
    for (std::size_t i = 0; i < ensA.replicates; ++i) dist_a[j][i] = sup_distance(c, ensA.row(i));
    for (std::size_t i = 0; i < ensB.replicates; ++i) dist_b[j][i] = sup_distance(c, ensB.row(i));
    std::sort(dist_a[j].begin(), dist_a[j].end());
    std::sort(dist_b[j].begin(), dist_b[j].end());
  }
  auto mass = [](const std::vector<double>& sorted, double radius, double count) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), radius) - sorted.begin()) / count;
  };

  auto passes = [&](double eps) {
    for (std::size_t j = 0; j < centers; ++j) {
      for (double rho : eps_grid) {
        if (mass(dist_a[j], rho, na) > mass(dist_b[j], rho + eps, nb) + eps) return false;
        if (mass(dist_b[j], rho, nb) > mass(dist_a[j], rho + eps, na) + eps) return false;
      }
    }
    return true;
  };

  DistanceEstimate out;
  out.method = "levy_prokhorov_surrogate";
  out.replicates = std::min(ensA.replicates, ensB.replicates);
  out.uses_resolution = true;
  out.std_error = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (passes(eps_grid[i])) {
      out.value = eps_grid[i];
      out.resolution = i == 0 ? eps_grid[0] : eps_grid[i] - eps_grid[i - 1];
      return out;
    }
  }
  out.value = eps_grid.back();
  out.resolution = eps_grid.size() > 1 ? eps_grid.back() - eps_grid[eps_grid.size() - 2] : eps_grid.back();
  out.censored = true;
  return out;
}

DistanceEstimate bounded_wasserstein_lower(const PathEnsemble& ensA, const PathEnsemble& ensB,
                                           std::span<const PathFunctional> dictionary) {
  check_grids(ensA, ensB);
  if (dictionary.empty()) throw ConfigError("bounded Wasserstein dictionary is empty");
  for (const auto& g : dictionary) {
    if (!g.bw_certified()) throw ConfigError("functional " + g.name() + " is not bounded by 1 and 1-Lipschitz");
  }
  DistanceEstimate out;
  out.method = "bounded_wasserstein_lower";
  out.replicates = std::min(ensA.replicates, ensB.replicates);
  out.value = -1.0;
  for (const auto& g : dictionary) {
    const auto va = evaluate_rows(g, ensA);
    const auto vb = evaluate_rows(g, ensB);
    const double d = std::abs(mean(va) - mean(vb));
    if (d > out.value) {
      out.value = d;
      out.std_error = std::sqrt(variance_or_nan(va) / static_cast<double>(va.size()) +
                                variance_or_nan(vb) / static_cast<double>(vb.size()));
    }
  }
  return out;
}

std::vector<PathFunctional> default_bw_dictionary() {
  std::vector<PathFunctional> d;
  for (double c : {0.25, 0.5, 1.0}) d.push_back(clipped_sup(c));
  for (double t : {0.25, 0.5, 0.75, 1.0}) d.push_back(eval_clip(t, 1.0));
  d.push_back(clipped_average(1.0, 1.0));
  return d;
}

std::vector<double> auto_eps_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 100; ++k) g.push_back(k / 100.0);
  return g;
}

}  // namespace sglimit
