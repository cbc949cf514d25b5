#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "volnet/network.hpp"

namespace volnet::test {

// Small deterministic generator (splitmix64) so fixtures do not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  int integer(int lo, int hi);
  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

Link make_link(std::string id, std::vector<Vec3> vertices, std::set<std::string> tags = {},
               std::optional<double> angular_override = std::nullopt, double weight = 1.0);

// n collinear links of `spacing` meters along +x.
std::vector<Link> chain_links(int n, double spacing = 10.0);

// Origin arm "O" and destination arm "D" joined by route A (one straight 10 m
// link with a 90 degree turn at each end) and route B (14 m, entering and
// leaving in line with the arms; its angular change is overridden to 0 so it
// counts as straight).
std::vector<Link> y_network_links();

// Square grid of n x n nodes with `spacing` between them, links named
// "h<i>_<j>" (along x) and "v<i>_<j>" (along y). z is constant.
std::vector<Link> grid_links(int n, double spacing, double z = 0.0, double x0 = 0.0, double y0 = 0.0,
                             const std::string& prefix = "");

// 12 links: the 3 x 3 grid (10 m spacing) with its centre node moved to
// (13, 8, 1), so that no two links are alike.
std::vector<Link> irregular_grid_links();

// Two 3 x 3 grids with 10 m spacing: floor 0 at z = 0 (x, y in {0, 10, 20}),
// floor 1 at z = 5 (x in {35, 45, 55}). A stair "stair" climbs from
// (20,10,0) to (35,10,5) with two 45 degree bends; a lift "lift"
// (angular override 0) rises at (20,0) and a connector "lift_link" joins its
// top to (35,0,5).
std::vector<Link> two_floor_links();
// The same layout with every z set to 0 and the lift removed (the connector
// then starts at (20,0,0)).
std::vector<Link> two_floor_flat_links();

// Ring of n identical straight links (regular polygon).
std::vector<Link> ring_links(int n, double side = 10.0);

// Hub with `arms` spokes, each spoke continuing into a chain of `tail`
// further links.
std::vector<Link> star_links(int arms, int tail, double length = 10.0);

// Random small 3D network: up to `max_links` links between random nodes,
// polylines with up to two interior vertices, random weights, occasional
// parallel links, dead ends and self-loops.
std::vector<Link> random_links(Rng& rng, int max_links);

// Synthetic multi-level network: `floors` jittered grids of n x n nodes
// (20 m spacing, 5 m floor height) joined by stairs and lifts (2n per floor
// gap, 320 with the defaults, which give exactly 10,000 links).
std::vector<Link> multilevel_links(std::uint64_t seed = 7, int floors = 3, int n = 40);

// Rigid rotation by `angle_deg` about `axis` (through the origin) followed by
// a translation.
std::vector<Link> transform_links(const std::vector<Link>& links, const Vec3& axis, double angle_deg,
                                  const Vec3& translation);

std::vector<Link> links_of(const Network& net);

}  // namespace volnet::test
