#include "volnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "volnet/errors.hpp"

namespace volnet {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Relative tolerance used to decide that the midpoint falls on a vertex.
constexpr double kMidpointTolerance = 1e-9;

double interior_turn(std::span<const Vec3> v, std::size_t i, double noise_floor_deg) {
  const double t = turn_angle_3d(v[i] - v[i - 1], v[i + 1] - v[i]);
  return t < noise_floor_deg ? 0.0 : t;
}

std::vector<double> cumulative_lengths(std::span<const Vec3> v) {
  std::vector<double> s(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) s[i] = s[i - 1] + distance(v[i - 1], v[i]);
  return s;
}

}  // namespace

double polyline_length(const Polyline3& line) {
  const auto v = line.vertices();
  double total = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) total += distance(v[i - 1], v[i]);
  return total;
}

double turn_angle_3d(const Vec3& d1, const Vec3& d2) {
  if (!is_finite(d1) || !is_finite(d2)) throw InputError("turn angle of a non-finite direction");
  if (dot(d1, d1) == 0.0 || dot(d2, d2) == 0.0) throw InputError("turn angle of a zero direction vector");
  // atan2 keeps full precision near 0 and 180 degrees, where acos does not.
  return std::min(180.0, std::atan2(norm(cross(d1, d2)), dot(d1, d2)) * kDegPerRad);
}

double cumulative_angular_change(const Polyline3& line, double noise_floor_deg) {
  if (!(noise_floor_deg >= 0.0)) throw InputError("noise floor must be >= 0");
  const auto v = line.vertices();
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) total += interior_turn(v, i, noise_floor_deg);
  return total;
}

Vec3 arc_midpoint(const Polyline3& line) {
  const auto v = line.vertices();
  const auto s = cumulative_lengths(v);
  const double half = 0.5 * s.back();
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (s[i] >= half) {
      const double seg = s[i] - s[i - 1];
      const double t = (half - s[i - 1]) / seg;
      return v[i - 1] + t * (v[i] - v[i - 1]);
    }
  }
  return v.back();
}

LinkCosts link_costs(const Link& link, double noise_floor_deg) {
  if (!(noise_floor_deg >= 0.0)) throw InputError("noise floor must be >= 0");
  const auto v = link.geometry.vertices();
  const auto s = cumulative_lengths(v);

  LinkCosts c;
  c.euc_m = s.back();
  c.first.euc_m = 0.5 * c.euc_m;
  c.second.euc_m = c.euc_m - c.first.euc_m;

  if (link.angular_override_deg) {
    c.ang_deg = *link.angular_override_deg;
    c.first.ang_deg = 0.5 * c.ang_deg;
    c.second.ang_deg = c.ang_deg - c.first.ang_deg;
    return c;
  }

  // Interior vertex i belongs to the first half when it lies strictly before
  // the midpoint; a vertex on the midpoint goes to the second half.
  const double half = c.first.euc_m;
  const double eps = kMidpointTolerance * c.euc_m;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double t = interior_turn(v, i, noise_floor_deg);
    if (s[i] < half - eps) {
      c.first.ang_deg += t;
    } else {
      c.second.ang_deg += t;
    }
  }
  c.ang_deg = c.first.ang_deg + c.second.ang_deg;
  return c;
}

}  // namespace volnet
