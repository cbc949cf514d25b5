#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "volnet/detail/radix_queue.hpp"
#include "volnet/geometry.hpp"
#include "volnet/metric.hpp"
#include "volnet/network.hpp"

namespace volnet {

enum class Direction : std::uint8_t { forward = 0, backward = 1 };

using StateIndex = std::uint32_t;
inline constexpr StateIndex kNoState = std::numeric_limits<StateIndex>::max();

// A link traversed along (forward) or against (backward) its vertex order.
struct DirectedLink {
  LinkIndex link = 0;
  Direction dir = Direction::forward;

  StateIndex state() const { return link * 2 + static_cast<StateIndex>(dir); }
  static DirectedLink from_state(StateIndex s) { return {s / 2, static_cast<Direction>(s % 2)}; }
  DirectedLink reversed() const {
    return {link, dir == Direction::forward ? Direction::backward : Direction::forward};
  }
  friend bool operator==(const DirectedLink&, const DirectedLink&) = default;
};

// Path costs are compared as sums of per-component costs rounded to this
// quantum, which makes equal-cost ties exact and rotation-stable. Reported
// costs remain unrounded doubles.
using QuantizedCost = std::int64_t;
inline constexpr double kCostQuantum = 1e-7;
inline QuantizedCost quantize_cost(double cost) { return std::llround(cost / kCostQuantum); }

inline constexpr double kUnboundedRadius = std::numeric_limits<double>::infinity();

enum class RadiusMode {
  // Minimal Euclidean center-to-center network distance.
  network,
  // Straight 3D distance between link midpoints (connectivity still required).
  crowflight,
};

struct RoutingOptions {
  double noise_floor_deg = kDefaultNoiseFloorDeg;
  RadiusMode radius_mode = RadiusMode::network;
};

// The dual graph: states are directed links, transitions are junction
// passages. The cost of u -> v is the far half of u, the junction turn and
// the near half of v, so a label is the cost to reach a link's center.
// U-turns exist only at dead ends. Self-loop links have no transitions.
// Holds a reference to the network, which must outlive it.
class TraversalGraph {
 public:
  struct Transition {
    StateIndex target = 0;
    double turn_deg = 0.0;
    double cost = 0.0;
    QuantizedCost qcost = 0;
  };

  TraversalGraph(const Network& net, const Metric& metric, double noise_floor_deg = kDefaultNoiseFloorDeg);

  const Network& network() const { return *net_; }
  const Metric& metric() const { return metric_; }
  std::size_t state_count() const { return 2 * net_->link_count(); }
  std::size_t transition_count() const { return transitions_.size(); }

  std::span<const Transition> transitions(StateIndex s) const {
    return {transitions_.data() + offsets_[s], transitions_.data() + offsets_[s + 1]};
  }
  const LinkCosts& costs(LinkIndex l) const { return costs_[l]; }
  const Vec3& midpoint(LinkIndex l) const { return midpoints_[l]; }
  bool routable(LinkIndex l) const { return !net_->is_self_loop(l); }

 private:
  const Network* net_;
  Metric metric_;
  std::vector<LinkCosts> costs_;
  std::vector<Vec3> midpoints_;
  std::vector<std::size_t> offsets_;
  std::vector<Transition> transitions_;
};

TraversalGraph build_dual_graph(const Network& net, const Metric& metric,
                                double noise_floor_deg = kDefaultNoiseFloorDeg);

// Reusable single-origin Dijkstra over a traversal graph. Both directions of
// the origin link start at cost 0. Labels are ordered by quantized cost, then
// link count, then the lexicographic sequence of link ids. One instance per
// worker thread.
class GeodesicSearch {
 public:
  explicit GeodesicSearch(const TraversalGraph& graph);

  struct Limits {
    // Stop before settling any state whose quantized cost exceeds this.
    QuantizedCost max_qcost = std::numeric_limits<QuantizedCost>::max();
    // When nonempty, stop once every listed link's best arrival is final.
    std::span<const LinkIndex> targets;
    // Skip lexicographic tie resolution (distances only).
    bool distances_only = false;
  };

  void run(LinkIndex origin, const Limits& limits);
  void run(LinkIndex origin) { run(origin, Limits{}); }

  const TraversalGraph& graph() const { return *graph_; }
  LinkIndex origin() const { return origin_; }
  bool settled(StateIndex s) const { return labels_[s].settled == epoch_; }
  QuantizedCost qcost(StateIndex s) const { return labels_[s].qcost; }
  double cost(StateIndex s) const { return labels_[s].cost; }
  std::uint32_t hops(StateIndex s) const { return labels_[s].hops; }
  StateIndex predecessor(StateIndex s) const { return labels_[s].pred; }
  // States in the order they were finalized.
  std::span<const StateIndex> settle_order() const { return order_; }

  // The winning settled arrival state of a link, if any.
  std::optional<StateIndex> best_arrival(LinkIndex link) const;
  // Link sequence from the origin to the given settled state.
  std::vector<LinkIndex> path_to(StateIndex s) const;

 private:
  // Everything known about one state, kept together for cache locality.
  // A label is valid for the current run only when seen == epoch_.
  struct Label {
    QuantizedCost qcost = 0;
    double cost = 0.0;
    std::uint32_t hops = 0;
    StateIndex pred = kNoState;
    std::uint32_t seen = 0;
    std::uint32_t settled = 0;
  };

  // Fallback queue key packing (quantized cost, hop count, state) so that
  // one unsigned comparison orders entries; quantized costs are nonnegative.
  __extension__ using WideKey = unsigned __int128;
  struct QueueEntry {
    QuantizedCost qcost;
    std::uint32_t hops;
    StateIndex state;
  };

  // Lexicographic comparison of the link sequences ending at a and b, which
  // must have equal hop counts. Negative when a's sequence is smaller.
  int compare_paths(StateIndex a, StateIndex b) const;
  bool better_arrival(StateIndex a, StateIndex b) const;
  void push(const QueueEntry& e);
  QueueEntry pop();
  bool queue_empty() const { return packed_ ? radix_.empty() : heap_.empty(); }
  void clear_queue();

  const TraversalGraph* graph_;
  LinkIndex origin_ = 0;
  std::uint32_t epoch_ = 0;
  std::vector<Label> labels_;
  std::vector<StateIndex> order_;
  // (qcost, hops) packed into 64 bits when every simple path's cost fits;
  // otherwise a min 4-ary heap of wide keys.
  bool packed_ = false;
  unsigned hop_bits_ = 0;
  detail::RadixQueue radix_;
  std::vector<WideKey> heap_;
  std::vector<std::uint32_t> target_mark_;
  mutable std::vector<LinkIndex> scratch_a_;
  mutable std::vector<LinkIndex> scratch_b_;
};

// Links within a finite radius of an origin, reusable per worker. Network
// mode searches the node graph with Euclidean half-link costs quantized as in
// the traversal graph (turns are free under the Euclidean metric, so this
// equals the directed-link search at a fraction of the states); crowflight
// mode compares link midpoints and does not check connectivity.
class ReachQuery {
 public:
  ReachQuery(const TraversalGraph& euclidean_graph, RadiusMode mode);

  // Sorted, includes the origin. Requires a finite radius.
  std::span<const LinkIndex> find(LinkIndex origin, double radius_m);

 private:
  void mark(LinkIndex l);

  const TraversalGraph* graph_;
  RadiusMode mode_;
  // Quantized Euclidean cost of each link half (first, second).
  std::vector<std::pair<QuantizedCost, QuantizedCost>> half_q_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> node_seen_;
  std::vector<std::uint32_t> node_settled_;
  std::vector<QuantizedCost> node_q_;
  std::vector<std::uint32_t> link_mark_;
  detail::RadixQueue queue_;
  std::vector<LinkIndex> result_;
};

struct GeodesicEntry {
  bool reachable = false;
  // Geodesic cost in metric units (infinite when disconnected).
  double cost = std::numeric_limits<double>::infinity();
  // Minimal Euclidean center-to-center network distance in meters.
  double network_distance_m = std::numeric_limits<double>::infinity();
  std::optional<DirectedLink> arrival;
  std::optional<DirectedLink> predecessor;
  std::uint32_t hops = 0;
};

struct GeodesicTree {
  LinkIndex origin = 0;
  Metric metric = Metric::euclidean();
  double radius_m = kUnboundedRadius;
  // Indexed by link.
  std::vector<GeodesicEntry> entries;
  // Predecessor per state, kNoState for roots and unreached states.
  std::vector<StateIndex> state_predecessor;

  // Link sequence from the origin to dest; empty when dest is disconnected.
  std::vector<LinkIndex> path_to(LinkIndex dest) const;
};

// Throws InputError for a self-loop origin or out-of-range origin.
GeodesicTree geodesic_tree(const Network& net, LinkIndex origin, const Metric& metric, double radius_m,
                           const RoutingOptions& options = {});
GeodesicTree geodesic_tree(const Network& net, std::string_view origin_id, const Metric& metric, double radius_m,
                           const RoutingOptions& options = {});

// Links within the radius of origin, always including origin. Sorted.
std::vector<LinkIndex> reachable_set(const Network& net, LinkIndex origin, double radius_m,
                                     const RoutingOptions& options = {});

// Euclidean distance bound for radius checks, kept on the quantized scale so
// lengths such as 10 m after a rotation still compare exactly.
QuantizedCost radius_limit(double radius_m);

}  // namespace volnet
