#pragma once

#include "volnet/network.hpp"
#include "volnet/polyline.hpp"

namespace volnet {

inline constexpr double kDefaultNoiseFloorDeg = 0.5;

// Euclidean length and angular change of part of a link.
struct HalfCosts {
  double euc_m = 0.0;
  double ang_deg = 0.0;
};

// Whole-link costs plus the two halves split at half arc length. `first`
// runs from the first vertex to the midpoint, `second` from the midpoint to
// the last vertex.
struct LinkCosts {
  double euc_m = 0.0;
  double ang_deg = 0.0;
  HalfCosts first;
  HalfCosts second;
};

// Sum of 3D segment lengths.
double polyline_length(const Polyline3& line);

// Angle in degrees, in [0, 180], between two nonzero directions. Throws
// InputError for a zero or non-finite vector.
double turn_angle_3d(const Vec3& d1, const Vec3& d2);

// Sum of the turns at interior vertices. Any single turn below the noise
// floor counts as zero.
double cumulative_angular_change(const Polyline3& line, double noise_floor_deg = kDefaultNoiseFloorDeg);

// Point at half arc length.
Vec3 arc_midpoint(const Polyline3& line);

// A turn located exactly at the arc-length midpoint belongs to `second`.
// With an angular override each half carries half the override.
LinkCosts link_costs(const Link& link, double noise_floor_deg = kDefaultNoiseFloorDeg);

}  // namespace volnet
