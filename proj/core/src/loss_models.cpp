#include "sglimit/loss_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sglimit/errors.hpp"
#include "sglimit/stats.hpp"

namespace sglimit {

std::string family_name(Family f) {
  switch (f) {
    case Family::Linear: return "linear";
    case Family::Logistic: return "logistic";
    case Family::Poisson: return "poisson";
  }
  return "linear";
}

Family parse_family(const std::string& name) {
  if (name == "linear") return Family::Linear;
  if (name == "logistic") return Family::Logistic;
  if (name == "poisson") return Family::Poisson;
  throw ConfigError("unknown family '" + name + "'");
}

void GlmModel::validate() const {
  if (x.empty()) throw ConfigError("model has no observations");
  if (x.size() != y.size()) throw ConfigError("model x and y lengths differ");
  if (!std::isfinite(intercept)) throw ConfigError("model intercept is not finite");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ConfigError("observation " + std::to_string(i) + " is not finite");
    }
    if (family == Family::Logistic && y[i] != 0.0 && y[i] != 1.0) {
      throw ConfigError("logistic responses must be 0 or 1");
    }
    if (family == Family::Poisson && (y[i] < 0.0 || y[i] != std::floor(y[i]))) {
      throw ConfigError("poisson responses must be nonnegative integers");
    }
  }
  if (has_domain && !(domain_lo <= domain_hi && std::isfinite(domain_lo) && std::isfinite(domain_hi))) {
    throw ConfigError("theta domain must be a bounded nonempty interval");
  }
  if (family == Family::Poisson && !has_domain) {
    throw ConfigError("poisson models need a bounded theta domain");
  }
}

double link(Family f, double u) {
  switch (f) {
    case Family::Linear: return u;
    case Family::Logistic:
      if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
      return std::exp(u) / (1.0 + std::exp(u));
    case Family::Poisson: return std::exp(u);
  }
  return u;
}

double link_derivative(Family f, double u) {
  switch (f) {
    case Family::Linear: return 1.0;
    case Family::Logistic: {
      const double e = std::exp(-std::abs(u));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case Family::Poisson: return std::exp(u);
  }
  return 1.0;
}

double ModelConstants::psi_moment(int q) const {
  const auto it = psi_moments.find(q);
  if (it == psi_moments.end()) throw ConfigError("psi moment of order " + std::to_string(q) + " unavailable");
  return it->second;
}

double gradient(const GlmModel& model, std::size_t i, double theta) {
  if (i >= model.size()) throw ConfigError("observation index out of range");
  const double u = theta * model.x[i] + model.intercept;
  return (model.y[i] - link(model.family, u)) * model.x[i];
}

double linearized_gradient(const ModelConstants& c, std::size_t i, double theta) {
  if (i >= c.size()) throw ConfigError("observation index out of range");
  return c.psi[i] - c.sigma[i] * (theta - c.theta_hat);
}

double mean_gradient(const GlmModel& model, double theta) {
  std::vector<double> g(model.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = gradient(model, i, theta);
  return mean(g);
}

namespace {

double mean_curvature(const GlmModel& model, double theta) {
  std::vector<double> s(model.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double u = theta * model.x[i] + model.intercept;
    s[i] = link_derivative(model.family, u) * model.x[i] * model.x[i];
  }
  return mean(s);
}

// Signs of the score as theta -> -inf and +inf; a finite root needs (+, -).
std::pair<double, double> score_limits(const GlmModel& model) {
  double at_minus = 0.0, at_plus = 0.0;
  bool neg_x = false, pos_x = false;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double x = model.x[i], y = model.y[i];
    neg_x = neg_x || x < 0.0;
    pos_x = pos_x || x > 0.0;
    if (model.family == Family::Logistic) {
      at_plus += (y - (x > 0.0 ? 1.0 : 0.0)) * x;
      at_minus += (y - (x < 0.0 ? 1.0 : 0.0)) * x;
    } else {
      at_plus += (x > 0.0 ? 0.0 : y * x);
      at_minus += (x < 0.0 ? 0.0 : y * x);
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (model.family == Family::Poisson) {
    if (pos_x) at_plus = -inf;
    if (neg_x) at_minus = inf;
  }
  return {at_minus, at_plus};
}

}  // namespace

double fit_critical_point(const GlmModel& model) {
  model.validate();
  if (model.family == Family::Linear) {
    bool any = false;
    for (double x : model.x) any = any || x != 0.0;
    if (!any) throw ConfigError("fit_critical_point: all covariates are zero (degenerate data)");
  } else {
    const auto [at_minus, at_plus] = score_limits(model);
    if (!(at_minus > 0.0 && at_plus < 0.0)) {
      throw ConfigError("fit_critical_point: separated or degenerate data, the score has no finite root");
    }
  }
  std::vector<double> abs0(model.size());
  for (std::size_t i = 0; i < abs0.size(); ++i) abs0[i] = std::abs(gradient(model, i, 0.0));
  const double tol = 1e-12 * (1.0 + mean(abs0));

  const double s0 = mean_gradient(model, 0.0);
  if (std::abs(s0) <= tol) return 0.0;

  // The score is nonincreasing in theta; find [lo, hi] with S(lo) > 0 > S(hi).
  double bound = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  const double cap = std::ldexp(1.0, 60);
  for (;; bound *= 2.0) {
    lo = -bound;
    hi = bound;
    s_lo = mean_gradient(model, lo);
    s_hi = mean_gradient(model, hi);
    if (std::abs(s_lo) <= tol) return lo;
    if (std::abs(s_hi) <= tol) return hi;
    if (s_lo > 0.0 && s_hi < 0.0) break;
    if (bound >= cap) {
      throw ConfigError("fit_critical_point: score has no sign change on [-2^60, 2^60] (degenerate data)");
    }
  }

  double theta = std::clamp(0.0, lo, hi);
  double s = s0;
  for (int iter = 0; iter < 500; ++iter) {
    if (s > 0.0) {
      lo = theta;
    } else {
      hi = theta;
    }
    const double d = mean_curvature(model, theta);
    double next = d > 0.0 ? theta + s / d : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == theta) break;
    theta = next;
    s = mean_gradient(model, theta);
    if (std::abs(s) <= tol) return theta;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(theta))) break;
  }
  throw NumericError("fit_critical_point: no convergence to the requested tolerance");
}

ModelConstants constants_from(double theta_hat, std::vector<double> psi, std::vector<double> sigma,
                              double C_R) {
  if (psi.empty() || psi.size() != sigma.size()) {
    throw ConfigError("psi and sigma must be nonempty and of equal length");
  }
  ModelConstants c;
  c.theta_hat = theta_hat;
  c.psi = std::move(psi);
  c.sigma = std::move(sigma);
  c.C_R = C_R;
  c.L = 1.0;
  for (double s : c.sigma) c.L = std::max(c.L, s);
  const std::size_t n = c.psi.size();
  std::vector<double> p2(n), p4(n), p6(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sq = c.psi[i] * c.psi[i];
    p2[i] = sq;
    p4[i] = sq * sq;
    p6[i] = sq * sq * sq;
  }
  c.Omega = mean(p2);
  c.SigmaInfo = mean(c.sigma);
  c.psi_moments[2] = c.Omega;
  c.psi_moments[4] = mean(p4);
  c.psi_moments[6] = mean(p6);
  return c;
}

ModelConstants model_constants(const GlmModel& model) {
  const double theta_hat = fit_critical_point(model);
  const std::size_t n = model.size();
  std::vector<double> psi(n), sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = theta_hat * model.x[i] + model.intercept;
    psi[i] = gradient(model, i, theta_hat);
    sigma[i] = link_derivative(model.family, u) * model.x[i] * model.x[i];
  }

  double C_R = 0.0;
  if (model.family == Family::Logistic) {
    for (double xi : model.x) C_R = std::max(C_R, xi * xi / 27.0);
  } else if (model.family == Family::Poisson) {
    const double b0 = model.intercept;
    for (double xi : model.x) {
      for (double th : {model.domain_lo, model.domain_hi, theta_hat}) {
        C_R = std::max(C_R, std::exp(std::abs(xi * th + b0) + std::abs(b0)) / 2.0 * xi * xi);
      }
    }
  }
  return constants_from(theta_hat, std::move(psi), std::move(sigma), C_R);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + t + "'");
  }
  if (used != t.size()) throw ConfigError("trailing characters in " + what + " '" + t + "'");
  return v;
}

}  // namespace

GlmModel read_model(std::istream& in) {
  GlmModel model;
  std::string line;
  bool header_seen = false;
  bool family_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      std::istringstream fields(line);
      std::string tok;
      while (fields >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError("model header token '" + tok + "' lacks '='");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "family") {
          model.family = parse_family(val);
          family_seen = true;
        } else if (key == "intercept") {
          model.intercept = parse_real(val, "intercept");
        } else if (key == "domain") {
          const auto comma = val.find(',');
          if (comma == std::string::npos) throw ConfigError("domain must be '<lo>,<hi>'");
          model.domain_lo = parse_real(val.substr(0, comma), "domain lower end");
          model.domain_hi = parse_real(val.substr(comma + 1), "domain upper end");
          model.has_domain = true;
        } else {
          throw ConfigError("unknown model header key '" + key + "'");
        }
      }
      if (!family_seen) throw ConfigError("model header lacks family=");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("model line " + std::to_string(lineno) + " is not 'x,y'");
    }
    model.x.push_back(parse_real(line.substr(0, comma), "x on line " + std::to_string(lineno)));
    model.y.push_back(parse_real(line.substr(comma + 1), "y on line " + std::to_string(lineno)));
  }
  if (!header_seen) throw ConfigError("model file is empty");
  model.validate();
  return model;
}

GlmModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  return read_model(in);
}

void write_model(std::ostream& out, const GlmModel& model) {
  const auto old_prec = out.precision(17);
  out << "family=" << family_name(model.family) << " intercept=" << model.intercept;
  if (model.has_domain) out << " domain=" << model.domain_lo << ',' << model.domain_hi;
  out << '\n';
  for (std::size_t i = 0; i < model.size(); ++i) out << model.x[i] << ',' << model.y[i] << '\n';
  out.precision(old_prec);
}

}  // namespace sglimit
