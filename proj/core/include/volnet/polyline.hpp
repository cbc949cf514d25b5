#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace volnet {

// Point or direction in a projected metric frame, z is elevation in meters.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double k, const Vec3& a) { return {k * a.x, k * a.y, k * a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline bool is_finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

// Ordered chain of at least two finite vertices with no two consecutive
// vertices coincident. Construction throws InputError otherwise.
class Polyline3 {
 public:
  explicit Polyline3(std::vector<Vec3> vertices);

  std::span<const Vec3> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vec3& front() const { return vertices_.front(); }
  const Vec3& back() const { return vertices_.back(); }
  const Vec3& operator[](std::size_t i) const { return vertices_[i]; }

  // Direction of the first segment, in vertex order.
  Vec3 initial_direction() const { return vertices_[1] - vertices_[0]; }
  // Direction of the last segment, in vertex order.
  Vec3 terminal_direction() const { return vertices_[size() - 1] - vertices_[size() - 2]; }

  Polyline3 reversed() const;

  friend bool operator==(const Polyline3&, const Polyline3&) = default;

 private:
  std::vector<Vec3> vertices_;
};

}  // namespace volnet
