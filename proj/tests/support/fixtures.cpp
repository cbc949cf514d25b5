#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace volnet::test {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

Link make_link(std::string id, std::vector<Vec3> vertices, std::set<std::string> tags,
               std::optional<double> angular_override, double weight) {
  return Link{std::move(id), Polyline3(std::move(vertices)), std::move(tags), angular_override, weight};
}

std::vector<Link> chain_links(int n, double spacing) {
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) {
    links.push_back(make_link("c" + std::to_string(i), {{i * spacing, 0, 0}, {(i + 1) * spacing, 0, 0}}));
  }
  return links;
}

std::vector<Link> y_network_links() {
  return {
      make_link("O", {{-10, 0, 0}, {0, 0, 0}}),
      make_link("A", {{0, 0, 0}, {0, 10, 0}}),
      make_link("B", {{0, 0, 0}, {1, 0, 0}, {1, 5, 0}, {-1, 5, 0}, {-1, 10, 0}, {0, 10, 0}}, {}, 0.0),
      make_link("D", {{0, 10, 0}, {10, 10, 0}}),
  };
}

std::vector<Link> grid_links(int n, double spacing, double z, double x0, double y0, const std::string& prefix) {
  std::vector<Link> links;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      links.push_back(make_link(prefix + "h" + std::to_string(i) + "_" + std::to_string(j),
                                {{x0 + i * spacing, y0 + j * spacing, z}, {x0 + (i + 1) * spacing, y0 + j * spacing, z}}));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      links.push_back(make_link(prefix + "v" + std::to_string(i) + "_" + std::to_string(j),
                                {{x0 + i * spacing, y0 + j * spacing, z}, {x0 + i * spacing, y0 + (j + 1) * spacing, z}}));
    }
  }
  return links;
}

namespace {

std::vector<Link> two_floor(bool flat) {
  const double top = flat ? 0.0 : 5.0;
  auto links = grid_links(3, 10.0, 0.0, 0.0, 0.0, "f0_");
  auto upper = grid_links(3, 10.0, top, 35.0, 0.0, "f1_");
  links.insert(links.end(), upper.begin(), upper.end());
  links.push_back(make_link("stair", {{20, 10, 0}, {25, 10, 0}, {30, 10, top}, {35, 10, top}}, {"stair"}));
  if (!flat) links.push_back(make_link("lift", {{20, 0, 0}, {20, 0, 5}}, {"lift"}, 0.0));
  links.push_back(make_link("lift_link", {{20, 0, top}, {35, 0, top}}));
  return links;
}

}  // namespace

std::vector<Link> two_floor_links() { return two_floor(false); }
std::vector<Link> two_floor_flat_links() { return two_floor(true); }

std::vector<Link> irregular_grid_links() {
  std::vector<Link> links;
  for (const Link& l : grid_links(3, 10.0)) {
    std::vector<Vec3> v(l.geometry.vertices().begin(), l.geometry.vertices().end());
    for (Vec3& p : v) {
      if (p == Vec3{10, 10, 0}) p = {13, 8, 1};
    }
    links.push_back(make_link(l.id, std::move(v)));
  }
  return links;
}

std::vector<Link> ring_links(int n, double side) {
  const double radius = side / (2.0 * std::sin(std::numbers::pi / n));
  std::vector<Vec3> corners;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    corners.push_back({radius * std::cos(t), radius * std::sin(t), 0.0});
  }
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) {
    links.push_back(make_link("r" + std::to_string(i), {corners[i], corners[(i + 1) % n]}));
  }
  return links;
}

std::vector<Link> star_links(int arms, int tail, double length) {
  std::vector<Link> links;
  for (int a = 0; a < arms; ++a) {
    const double t = 2.0 * std::numbers::pi * a / arms;
    const Vec3 dir{std::cos(t), std::sin(t), 0.0};
    for (int k = 0; k <= tail; ++k) {
      links.push_back(make_link("s" + std::to_string(a) + "_" + std::to_string(k),
                                {(k * length) * dir, ((k + 1) * length) * dir}));
    }
  }
  return links;
}

std::vector<Link> random_links(Rng& rng, int max_links) {
  // Enough nodes to keep the number of link-simple routes small for the
  // exhaustive oracle.
  const int link_count = rng.integer(2, max_links);
  const int node_count = rng.integer(std::max(3, link_count / 2 + 1), link_count / 2 + 4);
  std::vector<Vec3> nodes;
  for (int i = 0; i < node_count; ++i) {
    nodes.push_back({rng.uniform(0, 30), rng.uniform(0, 30), rng.chance(0.5) ? 0.0 : rng.uniform(0, 8)});
  }
  std::vector<Link> links;
  for (int l = 0; l < link_count; ++l) {
    const int a = rng.integer(0, node_count - 1);
    int b = rng.integer(0, node_count - 1);
    const bool self_loop = a == b && rng.chance(0.3);
    if (a == b && !self_loop) b = (a + 1) % node_count;
    std::vector<Vec3> vertices{nodes[a]};
    const int interior = self_loop ? 2 : rng.integer(0, 2);
    for (int k = 1; k <= interior; ++k) {
      const double t = static_cast<double>(k) / (interior + 1);
      Vec3 p = nodes[a] + t * (nodes[b] - nodes[a]);
      p = p + Vec3{rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-1, 1)};
      vertices.push_back(p);
    }
    vertices.push_back(nodes[b]);
    std::optional<double> override_deg;
    if (rng.chance(0.1)) override_deg = rng.uniform(0, 90);
    links.push_back(make_link("L" + std::to_string(l), std::move(vertices), {}, override_deg, rng.uniform(0.5, 3.0)));
  }
  return links;
}

std::vector<Link> multilevel_links(std::uint64_t seed, int floors, int n) {
  constexpr double kSpacing = 20.0;
  constexpr double kFloorHeight = 5.0;
  Rng rng(seed);
  // Jittered node positions per floor.
  std::vector<Vec3> pos(static_cast<std::size_t>(floors) * n * n);
  auto at = [&](int f, int i, int j) -> Vec3& { return pos[(static_cast<std::size_t>(f) * n + j) * n + i]; };
  for (int f = 0; f < floors; ++f) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        at(f, i, j) = {i * kSpacing + rng.uniform(-3, 3), j * kSpacing + rng.uniform(-3, 3), f * kFloorHeight};
      }
    }
  }
  std::vector<Link> links;
  auto street = [&](const std::string& id, const Vec3& a, const Vec3& b) {
    std::vector<Vec3> v{a};
    if (rng.chance(0.3)) v.push_back(0.5 * (a + b) + Vec3{rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0});
    v.push_back(b);
    links.push_back(make_link(id, std::move(v)));
  };
  for (int f = 0; f < floors; ++f) {
    const std::string p = "f" + std::to_string(f) + "_";
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i + 1 < n; ++i) {
        street(p + "h" + std::to_string(i) + "_" + std::to_string(j), at(f, i, j), at(f, i + 1, j));
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j + 1 < n; ++j) {
        street(p + "v" + std::to_string(i) + "_" + std::to_string(j), at(f, i, j), at(f, i, j + 1));
      }
    }
  }
  // Vertical connections, spread over a diagonal pattern; three 40 x 40
  // floors get 320 per floor gap, 10,000 links in total.
  const std::size_t per_gap = floors == 3 && n == 40 ? 320 : static_cast<std::size_t>(2 * n);
  for (int f = 0; f + 1 < floors; ++f) {
    std::size_t made = 0;
    for (int j = 0; j < n && made < per_gap; ++j) {
      for (int i = 0; i + 1 < n && made < per_gap; ++i) {
        if ((i + j + f) % 8 == 0) {
          const Vec3 a = at(f, i, j);
          const Vec3 b = at(f + 1, i, j);
          links.push_back(make_link("lift" + std::to_string(f) + "_" + std::to_string(i) + "_" + std::to_string(j),
                                    {a, b}, {"lift"}, 0.0));
          ++made;
        } else if ((i + 2 * j + f) % 8 == 4) {
          // Stair rising towards the next node along x.
          const Vec3 a = at(f, i, j);
          const Vec3 b = at(f + 1, i + 1, j);
          const Vec3 d = b - a;
          links.push_back(make_link("stair" + std::to_string(f) + "_" + std::to_string(i) + "_" + std::to_string(j),
                                    {a, a + Vec3{0.25 * d.x, 0.25 * d.y, 0.0},
                                     a + Vec3{0.75 * d.x, 0.75 * d.y, d.z}, b},
                                    {"stair"}));
          ++made;
        }
      }
    }
    if (made != per_gap) throw std::logic_error("multilevel fixture could not place its vertical links");
  }
  return links;
}

namespace {

Vec3 rotate(const Vec3& v, const Vec3& unit_axis, double angle_rad) {
  // Rodrigues' rotation formula.
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  return c * v + s * cross(unit_axis, v) + ((1.0 - c) * dot(unit_axis, v)) * unit_axis;
}

}  // namespace

std::vector<Link> transform_links(const std::vector<Link>& links, const Vec3& axis, double angle_deg,
                                  const Vec3& translation) {
  const Vec3 unit = (1.0 / norm(axis)) * axis;
  const double angle = angle_deg * std::numbers::pi / 180.0;
  std::vector<Link> out;
  for (const Link& link : links) {
    std::vector<Vec3> v;
    for (const Vec3& p : link.geometry.vertices()) v.push_back(rotate(p, unit, angle) + translation);
    out.push_back(Link{link.id, Polyline3(std::move(v)), link.tags, link.angular_override_deg, link.weight});
  }
  return out;
}

std::vector<Link> links_of(const Network& net) { return {net.links().begin(), net.links().end()}; }

}  // namespace volnet::test
