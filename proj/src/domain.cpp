#include "bnlab/domain.hpp"

#include <cmath>
#include <limits>

namespace bnlab {

DomainSpec DomainSpec::make_ball(Vec center, double radius) {
  DomainSpec d;
  d.kind = Kind::ball;
  d.center = std::move(center);
  d.radius = radius;
  d.validate();
  return d;
}

DomainSpec DomainSpec::make_generic(std::vector<Vec> boundary_points,
                                    std::vector<Vec> outward_normals) {
  DomainSpec d;
  d.kind = Kind::generic;
  d.boundary_points = std::move(boundary_points);
  d.outward_normals = std::move(outward_normals);
  d.validate();
  return d;
}

int DomainSpec::dim() const {
  return kind == Kind::ball ? static_cast<int>(center.size())
                            : static_cast<int>(boundary_points.front().size());
}

double DomainSpec::diameter() const {
  if (kind == Kind::ball) return 2.0 * radius;
  double best = 0;
  for (std::size_t i = 0; i < boundary_points.size(); ++i) {
    for (std::size_t j = i + 1; j < boundary_points.size(); ++j) {
      best = std::max(best, (boundary_points[i] - boundary_points[j]).norm());
    }
  }
  return best;
}

bool DomainSpec::inside(const Vec& x, double margin) const {
  if (kind == Kind::ball) return (x - center).norm() < radius - margin;
  // Sign from the nearest boundary sample's outward normal.
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < boundary_points.size(); ++i) {
    const double d = (x - boundary_points[i]).norm();
    if (d < best) {
      best = d;
      arg = i;
    }
  }
  const double side = (x - boundary_points[arg]).dot(outward_normals[arg]);
  return side < 0 && best > margin;
}

double DomainSpec::boundary_distance(const Vec& x) const {
  if (kind == Kind::ball) return radius - (x - center).norm();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : boundary_points) best = std::min(best, (x - b).norm());
  return best;
}

void DomainSpec::validate(int min_boundary_points) const {
  if (kind == Kind::ball) {
    if (center.size() < 3) throw ConfigError("ball center must have dimension >= 3");
    if (!(radius > 0)) throw ConfigError("ball radius must be positive");
    return;
  }
  if (boundary_points.size() < static_cast<std::size_t>(min_boundary_points)) {
    throw ConfigError("generic domain needs at least " + std::to_string(min_boundary_points) +
                      " boundary points, got " + std::to_string(boundary_points.size()));
  }
  if (boundary_points.size() != outward_normals.size()) {
    throw ConfigError("boundary point / normal count mismatch");
  }
  const auto n = boundary_points.front().size();
  if (n < 3) throw ConfigError("generic domain must have dimension >= 3");
  for (std::size_t i = 0; i < boundary_points.size(); ++i) {
    if (boundary_points[i].size() != n || outward_normals[i].size() != n) {
      throw ConfigError("inconsistent dimensions in boundary data");
    }
    if (std::abs(outward_normals[i].norm() - 1.0) > 1e-12) {
      throw ConfigError("outward normal " + std::to_string(i) + " is not unit length");
    }
  }
}

}  // namespace bnlab
