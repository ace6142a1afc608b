#include "sglimit/path_functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sglimit/errors.hpp"
#include "sglimit/stats.hpp"

namespace sglimit {

bool PathFunctional::bw_certified() const {
  const double s = std::abs(scale);
  switch (kind) {
    case Kind::IterateAverage:
    case Kind::SquaredAverage: return false;
    case Kind::ClippedSup:
    case Kind::EvalClip: return std::isfinite(c) && c >= 0.0 && s * c <= 1.0 && s <= 1.0;
    case Kind::ClippedAverage:
      return std::isfinite(c) && c >= 0.0 && s * c <= 1.0 && s * std::abs(slope) <= 1.0;
  }
  return false;
}

std::string PathFunctional::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::IterateAverage: os << "g1"; break;
    case Kind::SquaredAverage: os << "g2"; break;
    case Kind::ClippedSup: os << "clipped_sup(c=" << c << ")"; break;
    case Kind::EvalClip: os << "eval_clip(t=" << t << ";c=" << c << ")"; break;
    case Kind::ClippedAverage: os << "clipped_average(slope=" << slope << ";c=" << c << ")"; break;
  }
  if (scale != 1.0) os << "*" << scale;
  return os.str();
}

PathFunctional g1() {
  PathFunctional g;
  g.kind = PathFunctional::Kind::IterateAverage;
  g.m_norm_bound = 1.53;
  return g;
}

PathFunctional g2() {
  PathFunctional g;
  g.kind = PathFunctional::Kind::SquaredAverage;
  g.m_norm_bound = 3.53;
  return g;
}

PathFunctional clipped_sup(double c) {
  PathFunctional g;
  g.kind = PathFunctional::Kind::ClippedSup;
  g.c = c;
  return g;
}

PathFunctional eval_clip(double t, double c) {
  if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("eval_clip time must lie in [0, 1]");
  PathFunctional g;
  g.kind = PathFunctional::Kind::EvalClip;
  g.t = t;
  g.c = c;
  return g;
}

PathFunctional clipped_average(double slope, double c) {
  PathFunctional g;
  g.kind = PathFunctional::Kind::ClippedAverage;
  g.slope = slope;
  g.c = c;
  return g;
}

PathFunctional scaled(PathFunctional g, double s) {
  g.scale *= s;
  g.m_norm_bound *= std::abs(s);
  return g;
}

double iterate_average(std::span<const double> path) {
  if (path.size() < 2) throw ConfigError("path needs at least two grid values");
  return pairwise_sum(path.subspan(1)) / static_cast<double>(path.size() - 1);
}

double evaluate(const PathFunctional& g, std::span<const double> path) {
  if (path.size() < 2) throw ConfigError("cannot evaluate a functional on an empty path");
  const std::size_t alpha = path.size() - 1;
  double inner = 0.0;
  switch (g.kind) {
    case PathFunctional::Kind::IterateAverage: inner = iterate_average(path); break;
    case PathFunctional::Kind::SquaredAverage: {
      const double a = iterate_average(path);
      inner = a * a;
      break;
    }
    case PathFunctional::Kind::ClippedSup: {
      double m = 0.0;
      for (double v : path) m = std::max(m, std::abs(v));
      inner = std::min(m, g.c);
      break;
    }
    case PathFunctional::Kind::EvalClip: {
      const auto k = std::min(alpha, static_cast<std::size_t>(std::floor(g.t * static_cast<double>(alpha))));
      inner = std::clamp(path[k], -g.c, g.c);
      break;
    }
    case PathFunctional::Kind::ClippedAverage:
      inner = std::clamp(g.slope * iterate_average(path), -g.c, g.c);
      break;
  }
  return g.scale * inner;
}

}  // namespace sglimit
