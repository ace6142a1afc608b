#include "sglimit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "sglimit/errors.hpp"

namespace sglimit {

namespace {

using std::pow;
using std::sqrt;

struct Accumulator {
  std::string component;
  std::vector<BoundTerm>* sink;
  double sum = 0.0;

  void add(const char* formula, double value) {
    sum += value;
    if (sink) sink->push_back({component, formula, value});
  }
};

// (1/Sigma^2) (w^2 h Omega / b + w^2 beta_inv)^2 log^2(1 + alpha h Sigma), with its Sigma -> 0 limit
double log_term(const BoundInputs& in, bool& limit_used) {
  const double inner = in.w * in.w * in.h * in.Omega / in.b + in.w * in.w * in.beta_inv;
  double ratio = 0.0;  // log(1 + alpha h Sigma) / Sigma
  if (in.Sigma == 0.0) {
    ratio = in.alpha * in.h;
    limit_used = true;
  } else {
    ratio = std::log1p(in.alpha * in.h * in.Sigma) / in.Sigma;
  }
  return inner * inner * ratio * ratio;
}

}  // namespace

void BoundInputs::validate() const {
  for (double v : {L, C_R, Omega, Sigma, E_psi4, E_psi6, h, b, beta_inv, alpha, w, K1, K3, c_num, C_bar}) {
    if (!std::isfinite(v)) throw ConfigError("bound inputs must be finite");
  }
  if (L < 1.0) throw ConfigError("bound inputs need L >= 1");
  if (!(h > 0.0 && h <= 1.0)) throw ConfigError("bound inputs need 0 < h <= 1");
  if (!(beta_inv >= 0.0 && beta_inv <= 1.0)) throw ConfigError("bound inputs need 0 <= beta_inv <= 1");
  if (!(L * h < 1.0)) throw ConfigError("bound inputs need L h < 1");
  if (b < 1.0 || alpha < 1.0) throw ConfigError("bound inputs need b >= 1 and alpha >= 1");
  if (!(w > 0.0)) throw ConfigError("bound inputs need w > 0");
  if (C_R < 0.0 || Omega < 0.0 || Sigma < 0.0 || E_psi4 < 0.0 || E_psi6 < 0.0 || K1 < 0.0 || K3 < 0.0) {
    throw ConfigError("bound inputs need nonnegative constants and moments");
  }
  if (!(c_num > 0.0) || !(C_bar > 0.0)) throw ConfigError("bound inputs need c_num > 0 and C_bar > 0");
}

BoundInputs bound_inputs(const ModelConstants& c, const AlgoConfig& cfg, double K1, double K3, double c_num,
                         double C_bar) {
  BoundInputs in;
  in.L = c.L;
  in.C_R = c.C_R;
  in.Omega = c.Omega;
  in.Sigma = c.SigmaInfo;
  in.E_psi4 = c.psi_moment(4);
  in.E_psi6 = c.psi_moment(6);
  in.h = cfg.h;
  in.b = static_cast<double>(cfg.b);
  in.beta_inv = cfg.beta_inv;
  in.alpha = static_cast<double>(cfg.alpha);
  in.w = cfg.w;
  in.K1 = K1;
  in.K3 = K3;
  in.c_num = c_num;
  in.C_bar = C_bar;
  return in;
}

double e1_constant(const BoundInputs& in) {
  const double Om = in.Omega, E4 = in.E_psi4, L = in.L;
  return E4 + Om * Om + sqrt(Om) * (1.0 + pow(L, 3)) * (pow(E4 + Om * Om, 0.75) + 1.0) +
         Om * L * (1.0 + pow(L, 4)) * (Om * in.alpha * in.h * in.h / in.b + in.alpha * in.h * in.beta_inv);
}

DConstants d_constants(const BoundInputs& in, std::vector<BoundTerm>* terms) {
  in.validate();
  const double a = in.alpha, h = in.h, b = in.b, bi = in.beta_inv, w = in.w, L = in.L;
  const double Om = in.Omega, E4 = in.E_psi4;
  const double E1 = e1_constant(in);
  const double w2 = w * w, w4 = w2 * w2;
  DConstants out;

  Accumulator d1{"D1^2", terms};
  d1.add("1", 1.0);
  d1.add("w^4 a^2 h^4/b^2 [a h^2 L^2 E1/b + a^2 h^4 L^4 E1 + E4/b + Om^2 + Om]",
         w4 * a * a * pow(h, 4) / (b * b) *
             (a * h * h * L * L * E1 / b + a * a * pow(h, 4) * pow(L, 4) * E1 + E4 / b + Om * Om + Om));
  d1.add("w^4 a^2 h^2 bi^2 [1 + a h^2 L^2/b + a^2 h^4 L^4]",
         w4 * a * a * h * h * bi * bi * (1.0 + a * h * h * L * L / b + a * a * pow(h, 4) * pow(L, 4)));
  d1.add("w^4 (1/b + a h^2 L^2) sqrt(Om) (1 + L^3) a^3 h^(11/2) L^2 bi^(3/2)",
         w4 * (1.0 / b + a * h * h * L * L) * sqrt(Om) * (1.0 + pow(L, 3)) * pow(a, 3) * pow(h, 5.5) * L * L *
             pow(bi, 1.5));
  bool limit_used = false;
  const double lt = log_term(in, limit_used);
  d1.add("(1/Sigma^2)(w^2 h Om/b + w^2 bi)^2 log^2(1 + a h Sigma)", lt);

  Accumulator d2{"D2^2", terms};
  d2.add("1", 1.0);
  d2.add("w^2 a h^2/b [sqrt(Om) L (1 + L^3) a^(1/2) h^(3/4) bi^(3/4) + L^2 Om a h^2 + Om]",
         w2 * a * h * h / b *
             (sqrt(Om) * L * (1.0 + pow(L, 3)) * sqrt(a) * pow(h, 0.75) * pow(bi, 0.75) + L * L * Om * a * h * h + Om));
  d2.add("w^2 a h bi [a^(1/2) h L/b^(1/2) + 1 + L^2 a h^2]",
         w2 * a * h * bi * (sqrt(a) * h * L / sqrt(b) + 1.0 + L * L * a * h * h));
  d2.add("w^2 a^(3/2) h^3 L sqrt(E1)/b^(3/2)", w2 * pow(a, 1.5) * pow(h, 3) * L * sqrt(E1) / pow(b, 1.5));
  d2.add("w^2 (Om h^2/b + h bi)(1 + a^2 h^2 L^2/(1 - L h)^2)",
         w2 * (Om * h * h / b + h * bi) * (1.0 + a * a * h * h * L * L / ((1.0 - L * h) * (1.0 - L * h))));
  d2.add("(1/Sigma^2)(w^2 h Om/b + w^2 bi)^2 log^2(1 + a h Sigma)", lt);

  out.D1 = sqrt(d1.sum);
  out.D2 = sqrt(d2.sum);
  out.sigma_zero_limit = limit_used;
  return out;
}

BoundBreakdown eps_components(const BoundInputs& in) {
  in.validate();
  BoundBreakdown out;
  auto* terms = &out.terms;
  const double a = in.alpha, h = in.h, b = in.b, bi = in.beta_inv, w = in.w, L = in.L;
  const double Om = in.Omega, Sg = in.Sigma, E4 = in.E_psi4, E6 = in.E_psi6, CR = in.C_R;
  const double K1 = in.K1, K3 = in.K3;
  const double lg = std::log(2.0 * a);
  const double w3 = w * w * w, w4 = w3 * w;

  out.E1 = e1_constant(in);
  const auto d = d_constants(in, terms);
  out.D1 = d.D1;
  out.D2 = d.D2;
  out.sigma_zero_limit = d.sigma_zero_limit;
  out.C_max = std::max({1.0, pow(Om, 3), pow(Sg, 3), E6, pow(in.C_bar, 4.75)});
  const double E1 = out.E1;
  const double M3 = pow(Om, 3) + pow(E4, 1.5) + E4 * Om + E6;

  Accumulator R{"eps_R", terms};
  R.add("w a K1 C_R (h^2 Om/b + h bi)", w * a * K1 * CR * (h * h * Om / b + h * bi));
  R.add("w^3 a^3 C_R^3 K3^3 (h^6/b^3 M3 + h^3 bi^3)",
        w3 * pow(a, 3) * pow(CR, 3) * pow(K3, 3) * (pow(h, 6) / pow(b, 3) * M3 + pow(h, 3) * pow(bi, 3)));
  const double brace = a * a * pow(h, 4) / (b * b) *
                           (a * h * h * L * L * E1 / b + a * a * pow(h, 4) * pow(L, 4) * E1 + E4 / b + Om * Om + Om) +
                       a * a * h * h * bi * bi * (1.0 + a * h * h * L * L / b + a * a * pow(h, 4) * pow(L, 4)) +
                       (1.0 / b + a * h * h * L * L) * sqrt(Om) * (1.0 + pow(L, 3)) * pow(a, 3) * pow(h, 5.5) * L *
                           L * pow(bi, 1.5);
  R.add("w^3 {...}^(3/4) w a h C_R K3 [h/b M3^(1/3) + bi]",
        w3 * pow(brace, 0.75) * w * a * h * CR * K3 * (h / b * std::cbrt(M3) + bi));
  out.eps_R = R.sum;

  Accumulator Z{"eps_Z", terms};
  Z.add("w a^(1/2) h^2 Om^(1/2) Sigma/b^(1/2)", w * sqrt(a) * h * h * sqrt(Om) * Sg / sqrt(b));
  Z.add("w a^(1/2) h^(3/2) Sigma bi^(1/2)", w * sqrt(a) * pow(h, 1.5) * Sg * sqrt(bi));
  Z.add("w h Om^(1/2) sqrt(log 2a)/b^(1/2)", w * h * sqrt(Om) * sqrt(lg) / sqrt(b));
  Z.add("w h^(1/2) sqrt(log 2a) bi^(1/2)", w * sqrt(h) * sqrt(lg) * sqrt(bi));
  Z.add("w a^(3/2) h^6 Om^(3/2) Sigma^3/b^(3/2)", w * pow(a, 1.5) * pow(h, 6) * pow(Om, 1.5) * pow(Sg, 3) / pow(b, 1.5));
  Z.add("w^3 a^(3/2) h^(9/2) Sigma^3 bi^(3/2)", w3 * pow(a, 1.5) * pow(h, 4.5) * pow(Sg, 3) * pow(bi, 1.5));
  Z.add("w^3 h^3 Om^(3/2) log^(3/2)(2a)/b^(3/2)", w3 * pow(h, 3) * pow(Om, 1.5) * pow(lg, 1.5) / pow(b, 1.5));
  Z.add("w^3 h^(3/2) log^(3/2)(2a) bi^(3/2)", w3 * pow(h, 1.5) * pow(lg, 1.5) * pow(bi, 1.5));
  Z.add("w^4 a^2 h^5 Om^2 Sigma/b^2", w4 * a * a * pow(h, 5) * Om * Om * Sg / (b * b));
  Z.add("w^4 a^(3/2) h^4 Om^2 sqrt(log 2a)/b^2", w4 * pow(a, 1.5) * pow(h, 4) * Om * Om * sqrt(lg) / (b * b));
  Z.add("w^4 a^2 h^3 Sigma bi^2", w4 * a * a * pow(h, 3) * Sg * bi * bi);
  Z.add("w^4 a^(3/2) h^2 sqrt(log 2a) bi^2", w4 * pow(a, 1.5) * h * h * sqrt(lg) * bi * bi);
  out.eps_Z = Z.sum;

  Accumulator rem{"eps_rem", terms};
  rem.add("D1 a w h L/b^(1/2) sqrt((1 + a^2 h^2 L^2)(h^2 Om/b + h bi))",
          out.D1 * a * w * h * L / sqrt(b) * sqrt((1.0 + a * a * h * h * L * L) * (h * h * Om / b + h * bi)));
  out.eps_rem = rem.sum;

  Accumulator ex{"eps_exch", terms};
  ex.add("w^3 L^3 a^(5/2) h^6 E1^(3/4)/b^(3/2)", w3 * pow(L, 3) * pow(a, 2.5) * pow(h, 6) * pow(E1, 0.75) / pow(b, 1.5));
  ex.add("w^3 L^3 a^(5/2) h^(9/2) bi^(3/2)", w3 * pow(L, 3) * pow(a, 2.5) * pow(h, 4.5) * pow(bi, 1.5));
  ex.add("w^3 sqrt(Om) L^3 (1 + L^(9/4)) a^(5/2) h^(45/8) bi^(9/8)",
         w3 * sqrt(Om) * pow(L, 3) * (1.0 + pow(L, 2.25)) * pow(a, 2.5) * pow(h, 5.625) * pow(bi, 1.125));
  ex.add("w^3 a h^3 (E4 + Om^2)^(3/4)/b^(3/2)", w3 * a * pow(h, 3) * pow(E4 + Om * Om, 0.75) / pow(b, 1.5));
  ex.add("w^3 a h^(3/2) bi^(3/2)", w3 * a * pow(h, 1.5) * pow(bi, 1.5));
  out.eps_exch = ex.sum;

  Accumulator cov{"eps_cov", terms};
  const double pre = out.D2 * a * w * w * h * h;
  auto c = [&](const char* f, double v) { cov.add(f, pre * v); };
  c("a h^2 L^2/b [E4 + Om^2 + sqrt(Om) L^3 ((E4 + Om^2)^(3/4) + 1)]^(1/2)",
    a * h * h * L * L / b * sqrt(E4 + Om * Om + sqrt(Om) * pow(L, 3) * (pow(E4 + Om * Om, 0.75) + 1.0)));
  c("L^(9/2) a^(3/2) h^3 Om/b^(3/2)", pow(L, 4.5) * pow(a, 1.5) * pow(h, 3) * Om / pow(b, 1.5));
  c("L^(9/2) a^(3/2) h^(5/2) Om^(1/2) bi^(1/2)/b", pow(L, 4.5) * pow(a, 1.5) * pow(h, 2.5) * sqrt(Om) * sqrt(bi) / b);
  c("a h L^2 bi", a * h * L * L * bi);
  c("L^(7/2) Om^(1/4) a h^(7/4) bi^(3/4)", pow(L, 3.5) * pow(Om, 0.25) * a * pow(h, 1.75) * pow(bi, 0.75));
  c("a^(1/2) h Om L/b", sqrt(a) * h * Om * L / b);
  c("a^(1/2) h^(1/2) sqrt(Om) L bi^(1/2)/b^(1/2)", sqrt(a) * sqrt(h) * sqrt(Om) * L * sqrt(bi) / sqrt(b));
  c("w h/b^(3/2) (E4^(3/4) + Om^(3/2))", w * h / pow(b, 1.5) * (pow(E4, 0.75) + pow(Om, 1.5)));
  c("L w h^2 a Om^(3/2)/b^(3/2)", L * w * h * h * a * pow(Om, 1.5) / pow(b, 1.5));
  c("L w h^(3/2) a Om bi^(1/2)/b", L * w * pow(h, 1.5) * a * Om * sqrt(bi) / b);
  c("L a^(1/2) h/b^(3/2)", L * sqrt(a) * h / pow(b, 1.5));
  c("L^2 a h^2/b^(3/2)", L * L * a * h * h / pow(b, 1.5));
  c("h Om Sigma/b", h * Om * Sg / b);
  c("a h^2 Om Sigma^2/b", a * h * h * Om * Sg * Sg / b);
  c("L a^(1/2) h^(1/2) Om^(1/2) bi^(1/2)/b", L * sqrt(a) * sqrt(h) * sqrt(Om) * sqrt(bi) / b);
  c("L a^(1/2) bi/b^(1/2)", L * sqrt(a) * bi / sqrt(b));
  c("w h^(1/2) Om bi^(1/2)/b", w * sqrt(h) * Om * sqrt(bi) / b);
  c("w Om^(1/2) bi/b^(1/2)", w * sqrt(Om) * bi / sqrt(b));
  c("L w a h^(3/2) Om bi^(1/2)/b", L * w * a * pow(h, 1.5) * Om * sqrt(bi) / b);
  c("L w a h Om^(1/2) bi/b^(1/2)", L * w * a * h * sqrt(Om) * bi / sqrt(b));
  c("w bi^(3/2)/h^(1/2)", w * pow(bi, 1.5) / sqrt(h));
  c("L a^(1/2) bi/b^(1/2) (repeated)", L * sqrt(a) * bi / sqrt(b));
  c("L^2 a h bi/b^(1/2)", L * L * a * h * bi / sqrt(b));
  c("a h Sigma^2 bi", a * h * Sg * Sg * bi);
  c("Sigma bi", Sg * bi);
  out.eps_cov = cov.sum;

  out.total = in.c_num * (out.eps_R + out.eps_Z + out.eps_rem + out.eps_exch + out.eps_cov);
  return out;
}

double rate_prefactor(double C_R, double L) { return pow(C_R, 3) + C_R * pow(L, 6) + pow(L, 7); }

double simplified_rate_statistical(double n, double b, double m, double C_R, double L, double calib) {
  if (!(n > b) || b < 1.0) throw ConfigError("statistical rate needs n > b >= 1");
  if (!(m > 0.0)) throw ConfigError("statistical rate needs m > 0");
  const double m6 = pow(m, 6);
  return calib * rate_prefactor(C_R, L) * sqrt(m6 * b * (std::log(n / b) + m6) / n);
}

double simplified_rate_numerical(double h, double beta_inv, double C_R, double L, double calib) {
  if (!(h > 0.0 && h <= 1.0)) throw ConfigError("numerical rate needs 0 < h <= 1");
  if (!(beta_inv >= 0.0)) throw ConfigError("numerical rate needs beta_inv >= 0");
  return calib * rate_prefactor(C_R, L) * sqrt(h * std::log(1.0 / h) + beta_inv);
}

double general_simplified_cmax(const BoundInputs& in) {
  return std::max({1.0, pow(in.Omega, 3), pow(in.Sigma, 3), in.E_psi6, pow(in.C_bar, 4.75)});
}

double general_simplified_bound(const BoundInputs& in, std::vector<BoundTerm>* terms) {
  in.validate();
  if (in.alpha * in.h > in.C_bar) throw ConfigError("general simplified bound needs alpha h <= C_bar");
  const double a = in.alpha, h = in.h, b = in.b, bi = in.beta_inv, w = in.w, L = in.L;
  const double lg = std::log(2.0 * a);
  const double rb = sqrt(b), rh = sqrt(h);

  Accumulator g{"simplified", terms};
  g.add("L^2 (h/b + h^(1/2)/b^(1/2) bi^(1/2))", L * L * (h / b + rh / rb * sqrt(bi)));
  g.add("w (1 + K1 C_R)(h/b + bi + [h/b^(1/2) + h^(1/2) bi^(1/2)] log^(1/2)(2a))",
        w * (1.0 + in.K1 * in.C_R) * (h / b + bi + (h / rb + rh * sqrt(bi)) * sqrt(lg)));
  g.add("w^2 L^(13/2) (h^(3/2)/b + h bi + h^(7/4) bi^(3/4) + h^(1/2)/b^(1/2) h^(1/2) bi^(1/2) + h^(1/2)/b^(1/2) bi)",
        w * w * pow(L, 6.5) *
            (pow(h, 1.5) / b + h * bi + pow(h, 1.75) * pow(bi, 0.75) + rh / rb * rh * sqrt(bi) + rh / rb * bi));
  g.add("w^3 L^(27/4) (1 + C_R^3 K3^3)(...)",
        pow(w, 3) * pow(L, 6.75) * (1.0 + pow(in.C_R, 3) * pow(in.K3, 3)) *
            (pow(bi, 3) + pow(h, 3.125) * pow(bi, 1.125) + pow(h, 1.75) * pow(bi, 1.25) + rh / rb * rh * bi +
             rh / rb * pow(h, 1.75) * pow(bi, 0.75) + h / b * rh * sqrt(bi) +
             (pow(h, 3) / pow(b, 1.5) + pow(h, 1.5) * pow(bi, 1.5)) * pow(lg, 1.5)));
  g.add("w^4 L^(27/4) (1 + C_R K3)(...)",
        pow(w, 4) * pow(L, 6.75) * (1.0 + in.C_R * in.K3) *
            (pow(bi, 2.5) + pow(h, 1.875) * pow(bi, 2.125) + h / b * pow(h, 1.875) * pow(bi, 1.125) +
             pow(h, 1.5) / pow(b, 1.5) * rh * sqrt(bi) + h / b * rh * bi + h / b * pow(h, 1.75) * pow(bi, 0.75) +
             rh / rb * pow(bi, 1.5) + (pow(h, 2.5) / (b * b) + rh * bi * bi) * sqrt(lg)));
  g.add("w^5 L (...)",
        pow(w, 5) * L *
            (pow(h, 3) / pow(b, 2.5) + rh * pow(bi, 2.5) + h / b * rh * pow(bi, 1.5) + h * h / (b * b) * rh * sqrt(bi) +
             pow(h, 1.5) / pow(b, 1.5) * rh * bi + rh / rb * rh * bi * bi));
  return general_simplified_cmax(in) * g.sum;
}

double ou_comparison_constant(double A_t, double B, double B_t) {
  const double denom = B_t * (B + B_t);
  if (!(denom > 0.0)) throw ConfigError("C(At, B, Bt) needs Bt (B + Bt) > 0");
  return A_t * (1.0 + 2.0 * B * (1.0 + 4.0 * B_t)) * (3.0 + 4.0 * B_t) * std::exp(4.0 * std::abs(B_t - B)) / denom;
}

OuBoundResult ou_to_ou_bound(double A, double A_t, double B, double B_t, double C1, double C3) {
  if (!(A > 0.0 && A_t > 0.0)) throw ConfigError("ou_to_ou_bound needs A, At > 0");
  if (!(B > 0.0 && B_t > 0.0)) throw ConfigError("ou_to_ou_bound needs B, Bt > 0");
  OuBoundResult r;
  r.C = ou_comparison_constant(A_t, B, B_t);
  auto Kp = [&](double p, double Cp) {
    const double first = pow(2.0, (3.0 * p - 4.0) / 2.0) / pow(std::min(A, A_t), p / 2.0);
    const double second = pow(2.0, 2.0 * (p - 1.0)) *
                          (pow(r.C, p / 2.0) + pow(2.0, p / 2.0) * pow(A_t, p / 2.0) * std::exp(p * std::abs(B_t - B)));
    return Cp * std::max(first, second);
  };
  r.K1 = Kp(1.0, C1);
  r.K3 = Kp(3.0, C3);
  r.K = std::max(r.K1 + pow(2.0, 2.5) * C3 * pow(A, 1.5) * std::cbrt(r.K3), 2.0 * r.K3);
  const double dA = std::abs(A - A_t), dB = std::abs(B - B_t);
  r.difference_factor = dA + dB + dA * dA * dA + dB * dB * dB;
  r.bound = r.K * r.difference_factor;
  return r;
}

MetricExponents metric_rate_exponents(double r) {
  if (!(r > 1.0)) throw ConfigError("metric rate exponents need r > 1");
  MetricExponents e;
  e.lp_exponent = 1.0 / 20.0 - 9.0 / (200.0 * r - 20.0);
  e.bw_exponent = 1.0 / 14.0 - 2.0 / (49.0 * r - 21.0);
  e.lp_vacuous = !(e.lp_exponent > 0.0);
  e.bw_vacuous = !(e.bw_exponent > 0.0);
  return e;
}

IterateAverageBound iterate_average_bound(double eps, double mean_abs_Y, const BoundInputs& in) {
  if (!(eps >= 0.0)) throw ConfigError("iterate_average_bound needs eps >= 0");
  IterateAverageBound r;
  r.variance_rhs = (1.53 * mean_abs_Y + 3.53) * eps;
  r.mean_rhs = in.K1 * in.C_R * in.w * in.alpha * in.h * (in.h * in.Omega / in.b + 2.0 * in.beta_inv);
  return r;
}

}  // namespace sglimit
