#include "volnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <functional>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "volnet/errors.hpp"

namespace volnet {

Polyline3::Polyline3(std::vector<Vec3> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw InputError("polyline needs at least two vertices");
  }
  for (const auto& v : vertices_) {
    if (!is_finite(v)) {
      throw InputError("polyline vertex is not finite");
    }
  }
  bool all_same = true;
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i] != vertices_[0]) all_same = false;
  }
  if (all_same) {
    throw InputError("zero-length geometry");
  }
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i] == vertices_[i - 1]) {
      throw InputError("polyline has coincident consecutive vertices at index " + std::to_string(i));
    }
  }
}

Polyline3 Polyline3::reversed() const {
  std::vector<Vec3> v(vertices_.rbegin(), vertices_.rend());
  return Polyline3(std::move(v));
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins so the representative is order-independent.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const Vec3& p, double size) {
  return {static_cast<std::int64_t>(std::floor(p.x / size)), static_cast<std::int64_t>(std::floor(p.y / size)),
          static_cast<std::int64_t>(std::floor(p.z / size))};
}

// Drops interior vertices lying within the tolerance of the previously kept
// vertex. Endpoints are never moved.
Polyline3 collapse_near_vertices(const Polyline3& line, double tolerance) {
  const auto v = line.vertices();
  std::vector<Vec3> kept{v.front()};
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (distance(v[i], kept.back()) > tolerance) kept.push_back(v[i]);
  }
  if (kept.size() > 1 && distance(v.back(), kept.back()) <= tolerance) kept.pop_back();
  kept.push_back(v.back());
  if (kept.size() == v.size()) return line;
  return Polyline3(std::move(kept));
}

}  // namespace

Network build_network(std::vector<Link> link_records, double snap_tolerance_m) {
  if (!(snap_tolerance_m > 0.0) || !std::isfinite(snap_tolerance_m)) {
    throw InputError("snap tolerance must be positive");
  }
  std::sort(link_records.begin(), link_records.end(), [](const Link& a, const Link& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < link_records.size(); ++i) {
    if (link_records[i].id == link_records[i - 1].id) {
      throw InputError("duplicate link id '" + link_records[i].id + "'");
    }
  }
  for (auto& link : link_records) {
    if (link.id.empty()) throw InputError("link with empty id");
    if (link.angular_override_deg && !(*link.angular_override_deg >= 0.0)) {
      throw InputError("link '" + link.id + "': angular override must be >= 0");
    }
    if (!(link.weight >= 0.0) || !std::isfinite(link.weight)) {
      throw InputError("link '" + link.id + "': weight must be a finite value >= 0");
    }
    link.geometry = collapse_near_vertices(link.geometry, snap_tolerance_m);
  }

  const std::size_t endpoint_count = link_records.size() * 2;
  auto endpoint = [&](std::size_t e) -> const Vec3& {
    const auto& g = link_records[e / 2].geometry;
    return (e % 2 == 0) ? g.front() : g.back();
  };

  DisjointSets sets(endpoint_count);
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  grid.reserve(endpoint_count);
  for (std::size_t e = 0; e < endpoint_count; ++e) {
    grid[cell_of(endpoint(e), snap_tolerance_m)].push_back(e);
  }
  for (std::size_t e = 0; e < endpoint_count; ++e) {
    const CellKey c = cell_of(endpoint(e), snap_tolerance_m);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (std::size_t other : it->second) {
            if (other > e && distance(endpoint(e), endpoint(other)) <= snap_tolerance_m) sets.unite(e, other);
          }
        }
      }
    }
  }

  Network net;
  net.snap_tolerance_ = snap_tolerance_m;
  net.ends_.resize(link_records.size());
  std::vector<NodeIndex> node_of_root(endpoint_count, static_cast<NodeIndex>(-1));
  std::vector<std::size_t> members;
  for (std::size_t e = 0; e < endpoint_count; ++e) {
    const std::size_t root = sets.find(e);
    if (node_of_root[root] == static_cast<NodeIndex>(-1)) {
      node_of_root[root] = static_cast<NodeIndex>(net.nodes_.size());
      Node node;
      node.id = node_of_root[root];
      net.nodes_.push_back(node);
      members.push_back(0);
    }
    const NodeIndex n = node_of_root[root];
    Node& node = net.nodes_[n];
    const Vec3& p = endpoint(e);
    node.position = node.position + p;
    members[n] += 1;
    node.degree += 1;
    node.incident_links.push_back(static_cast<LinkIndex>(e / 2));
    net.ends_[e / 2][e % 2] = n;
  }
  for (std::size_t n = 0; n < net.nodes_.size(); ++n) {
    Node& node = net.nodes_[n];
    node.position = (1.0 / static_cast<double>(members[n])) * node.position;
    auto& inc = node.incident_links;
    inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
  }
  net.links_ = std::move(link_records);
  return net;
}

std::optional<LinkIndex> Network::find(std::string_view id) const {
  auto it = std::lower_bound(links_.begin(), links_.end(), id,
                             [](const Link& l, std::string_view key) { return l.id < key; });
  if (it == links_.end() || it->id != id) return std::nullopt;
  return static_cast<LinkIndex>(it - links_.begin());
}

LinkIndex Network::index_of(std::string_view id) const {
  auto found = find(id);
  if (!found) throw InputError("unknown link id '" + std::string(id) + "'");
  return *found;
}

ValidationReport validate_network(const Network& net, const ValidationOptions& options) {
  ValidationReport report;
  const std::size_t n = net.link_count();

  DisjointSets components(n);
  for (const Node& node : net.nodes()) {
    for (std::size_t i = 1; i < node.incident_links.size(); ++i) {
      components.unite(node.incident_links[0], node.incident_links[i]);
    }
  }
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t i = 0; i < n; ++i) sizes[components.find(i)] += 1;
  for (const auto& [root, size] : sizes) report.component_sizes.push_back(size);
  std::sort(report.component_sizes.begin(), report.component_sizes.end(), std::greater<>());

  for (LinkIndex i = 0; i < n; ++i) {
    if (net.is_self_loop(i)) {
      report.self_loops.push_back(i);
      continue;
    }
    if (net.node(net.tail_node(i)).degree == 1 || net.node(net.head_node(i)).degree == 1) {
      report.dangling_links.push_back(i);
    }
  }

  // Identical geometry in either vertex order.
  std::map<std::vector<double>, LinkIndex> seen;
  for (LinkIndex i = 0; i < n; ++i) {
    const auto& g = net.link(i).geometry;
    const auto fwd = g.vertices();
    bool use_reverse = std::lexicographical_compare(
        fwd.rbegin(), fwd.rend(), fwd.begin(), fwd.end(),
        [](const Vec3& a, const Vec3& b) { return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z); });
    std::vector<double> key;
    key.reserve(fwd.size() * 3);
    auto push = [&](const Vec3& v) {
      key.push_back(v.x);
      key.push_back(v.y);
      key.push_back(v.z);
    };
    if (use_reverse) {
      for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) push(*it);
    } else {
      for (const auto& v : fwd) push(v);
    }
    auto [it, inserted] = seen.emplace(std::move(key), i);
    if (!inserted) report.duplicate_geometries.emplace_back(it->second, i);
  }

  for (LinkIndex i = 0; i < n; ++i) {
    const Link& link = net.link(i);
    bool exempt = std::any_of(options.vertical_tags.begin(), options.vertical_tags.end(),
                              [&](const std::string& t) { return link.has_tag(t); });
    if (exempt) continue;
    const auto v = link.geometry.vertices();
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
      const double dz = v[s + 1].z - v[s].z;
      const double horizontal = std::hypot(v[s + 1].x - v[s].x, v[s + 1].y - v[s].y);
      if (std::abs(dz) > options.vertical_jump_threshold_m && horizontal <= net.snap_tolerance()) {
        report.vertical_jumps.push_back({i, s, dz});
      }
    }
  }
  return report;
}

void print_report(std::ostream& out, const Network& net, const ValidationReport& report) {
  out << "links: " << net.link_count() << ", nodes: " << net.node_count() << "\n";
  out << "components: " << report.component_sizes.size();
  if (report.component_sizes.size() > 1) {
    out << " (sizes:";
    for (auto s : report.component_sizes) out << ' ' << s;
    out << ')';
  }
  out << "\n";
  for (auto i : report.dangling_links) out << "dangling link: " << net.link(i).id << "\n";
  for (auto i : report.self_loops) out << "self-loop link (excluded from routing): " << net.link(i).id << "\n";
  for (auto [a, b] : report.duplicate_geometries) {
    out << "duplicate geometry: " << net.link(a).id << " and " << net.link(b).id << "\n";
  }
  for (const auto& j : report.vertical_jumps) {
    out << "vertical jump: " << net.link(j.link).id << " segment " << j.segment << " dz=" << j.dz << "\n";
  }
}

bool TagFilter::matches(const Link& link) const {
  bool included = include.empty() ||
                  std::any_of(include.begin(), include.end(), [&](const std::string& t) { return link.has_tag(t); });
  bool excluded = std::any_of(exclude.begin(), exclude.end(), [&](const std::string& t) { return link.has_tag(t); });
  return (included && !excluded) != negate;
}

Network filter_network(const Network& net, const TagFilter& filter) {
  std::vector<Link> kept;
  for (const Link& link : net.links()) {
    if (filter.matches(link)) kept.push_back(link);
  }
  if (kept.empty()) throw InputError("tag filter leaves an empty network");
  return build_network(std::move(kept), net.snap_tolerance());
}

}  // namespace volnet
