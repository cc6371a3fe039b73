#pragma once

#include <vector>

#include "bnlab/numerics.hpp"

namespace bnlab {

// Bounded domain geometry: an explicit ball, or a smooth domain described by
// a boundary point cloud with outward unit normals.
struct DomainSpec {
  enum class Kind { ball, generic };

  Kind kind = Kind::ball;

  // Ball data.
  Vec center;
  double radius = 0;

  // Generic data.
  std::vector<Vec> boundary_points;
  std::vector<Vec> outward_normals;

  static DomainSpec make_ball(Vec center, double radius);
  static DomainSpec make_generic(std::vector<Vec> boundary_points,
                                 std::vector<Vec> outward_normals);

  int dim() const;
  double diameter() const;

  // Signed membership test with an optional safety margin (in absolute units).
  bool inside(const Vec& x, double margin = 0) const;

  // Distance to the boundary; exact for balls, point-cloud distance otherwise.
  double boundary_distance(const Vec& x) const;

  // Throws ConfigError on malformed geometry.
  void validate(int min_boundary_points = 32) const;
};

}  // namespace bnlab
