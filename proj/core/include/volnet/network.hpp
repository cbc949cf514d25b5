#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volnet/polyline.hpp"

namespace volnet {

using LinkIndex = std::uint32_t;
using NodeIndex = std::uint32_t;

inline constexpr double kDefaultSnapTolerance = 0.05;

// A link spans junction to junction and carries its full curvilinear 3D
// geometry. Lifts and similar transitions that impose no body rotation set
// angular_override_deg.
struct Link {
  std::string id;
  Polyline3 geometry;
  std::set<std::string> tags;
  std::optional<double> angular_override_deg;
  double weight = 1.0;

  bool has_tag(std::string_view tag) const { return tags.find(std::string(tag)) != tags.end(); }
};

struct Node {
  NodeIndex id = 0;
  Vec3 position;
  // Sorted, unique.
  std::vector<LinkIndex> incident_links;
  // Number of link ends attached here; a self-loop contributes two.
  std::uint32_t degree = 0;
};

// Immutable link-node graph. Links are stored sorted by id, so comparing
// link indices is equivalent to comparing ids lexicographically.
class Network {
 public:
  std::span<const Link> links() const { return links_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t link_count() const { return links_.size(); }
  std::size_t node_count() const { return nodes_.size(); }
  double snap_tolerance() const { return snap_tolerance_; }

  const Link& link(LinkIndex i) const { return links_[i]; }
  const Node& node(NodeIndex i) const { return nodes_[i]; }
  std::optional<LinkIndex> find(std::string_view id) const;
  // Throws InputError for an unknown id.
  LinkIndex index_of(std::string_view id) const;

  // Node at the first vertex / last vertex of the link.
  NodeIndex tail_node(LinkIndex i) const { return ends_[i][0]; }
  NodeIndex head_node(LinkIndex i) const { return ends_[i][1]; }
  bool is_self_loop(LinkIndex i) const { return ends_[i][0] == ends_[i][1]; }

 private:
  friend Network build_network(std::vector<Link> link_records, double snap_tolerance_m);

  std::vector<Link> links_;
  std::vector<Node> nodes_;
  std::vector<std::array<NodeIndex, 2>> ends_;
  double snap_tolerance_ = kDefaultSnapTolerance;
};

// Clusters link endpoints closer than the tolerance into nodes (union-find).
// Links connect only where endpoints coincide; crossings at midspan stay
// unconnected. Throws InputError on duplicate ids or tolerance <= 0.
Network build_network(std::vector<Link> link_records, double snap_tolerance_m = kDefaultSnapTolerance);

struct ValidationOptions {
  double vertical_jump_threshold_m = 2.0;
  // Links carrying any of these tags are expected to jump vertically.
  std::set<std::string> vertical_tags{"lift", "elevator"};
};

struct VerticalJump {
  LinkIndex link = 0;
  std::size_t segment = 0;
  double dz = 0.0;
};

struct ValidationReport {
  // Link counts per connected component, largest first.
  std::vector<std::size_t> component_sizes;
  std::vector<LinkIndex> dangling_links;
  std::vector<std::pair<LinkIndex, LinkIndex>> duplicate_geometries;
  std::vector<VerticalJump> vertical_jumps;
  std::vector<LinkIndex> self_loops;

  bool has_warnings() const {
    return component_sizes.size() > 1 || !dangling_links.empty() || !duplicate_geometries.empty() ||
           !vertical_jumps.empty() || !self_loops.empty();
  }
};

ValidationReport validate_network(const Network& net, const ValidationOptions& options = {});
void print_report(std::ostream& out, const Network& net, const ValidationReport& report);

// Link selector: a link matches when it carries any include tag (or include
// is empty) and none of the exclude tags. `negate` flips the result, so
// f and f.complement() partition any link set.
struct TagFilter {
  std::set<std::string> include;
  std::set<std::string> exclude;
  bool negate = false;

  bool matches(const Link& link) const;
  TagFilter complement() const {
    TagFilter f = *this;
    f.negate = !f.negate;
    return f;
  }
};

// Throws InputError when no link matches.
Network filter_network(const Network& net, const TagFilter& filter);

}  // namespace volnet
