#include "volnet/routing.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <iterator>
#include <string>

#include "volnet/errors.hpp"

namespace volnet {

namespace {

// Direction of travel when leaving a state at its head node.
Vec3 exit_direction(const Link& link, Direction dir) {
  return dir == Direction::forward ? link.geometry.terminal_direction()
                                   : -1.0 * link.geometry.initial_direction();
}

// Direction of travel when entering a state at its tail node.
Vec3 entry_direction(const Link& link, Direction dir) {
  return dir == Direction::forward ? link.geometry.initial_direction()
                                   : -1.0 * link.geometry.terminal_direction();
}

NodeIndex head_of(const Network& net, DirectedLink d) {
  return d.dir == Direction::forward ? net.head_node(d.link) : net.tail_node(d.link);
}

// Half traversed from the link center to the exit end.
const HalfCosts& far_half(const LinkCosts& c, Direction dir) {
  return dir == Direction::forward ? c.second : c.first;
}

// Half traversed from the entry end to the link center.
const HalfCosts& near_half(const LinkCosts& c, Direction dir) {
  return dir == Direction::forward ? c.first : c.second;
}

}  // namespace

TraversalGraph::TraversalGraph(const Network& net, const Metric& metric, double noise_floor_deg)
    : net_(&net), metric_(metric) {
  const std::size_t n = net.link_count();
  costs_.reserve(n);
  midpoints_.reserve(n);
  for (const Link& link : net.links()) {
    costs_.push_back(link_costs(link, noise_floor_deg));
    midpoints_.push_back(arc_midpoint(link.geometry));
  }

  offsets_.assign(2 * n + 1, 0);
  for (StateIndex s = 0; s < 2 * n; ++s) {
    offsets_[s] = transitions_.size();
    const DirectedLink from = DirectedLink::from_state(s);
    if (net.is_self_loop(from.link)) continue;
    const Link& from_link = net.link(from.link);
    const NodeIndex junction = head_of(net, from);
    const Node& node = net.node(junction);
    const Vec3 out_dir = exit_direction(from_link, from.dir);
    const double far_cost = hybrid_link_cost(metric, far_half(costs_[from.link], from.dir));
    const QuantizedCost far_q = quantize_cost(far_cost);

    for (LinkIndex other : node.incident_links) {
      if (net.is_self_loop(other)) continue;
      DirectedLink to{other, net.tail_node(other) == junction ? Direction::forward : Direction::backward};
      if (other == from.link) {
        // U-turn, only at a dead end.
        if (node.degree != 1) continue;
        to = from.reversed();
      }
      const double turn = turn_angle_3d(out_dir, entry_direction(net.link(other), to.dir));
      const double node_cost = hybrid_node_cost(metric, turn);
      const double near_cost = hybrid_link_cost(metric, near_half(costs_[other], to.dir));
      Transition t;
      t.target = to.state();
      t.turn_deg = turn;
      t.cost = far_cost + node_cost + near_cost;
      t.qcost = far_q + quantize_cost(node_cost) + quantize_cost(near_cost);
      transitions_.push_back(t);
    }
  }
  offsets_[2 * n] = transitions_.size();
}

TraversalGraph build_dual_graph(const Network& net, const Metric& metric, double noise_floor_deg) {
  return TraversalGraph(net, metric, noise_floor_deg);
}

GeodesicSearch::GeodesicSearch(const TraversalGraph& graph)
    : graph_(&graph),
      labels_(graph.state_count()),
      target_mark_(graph.network().link_count(), 0) {
  // A settled label follows a simple path in the state graph, so its hop
  // count is at most the state count and its cost at most that many times
  // the largest transition cost.
  const std::uint64_t states = graph.state_count() + 1;
  QuantizedCost max_step = 0;
  for (StateIndex s = 0; s < graph.state_count(); ++s) {
    for (const auto& t : graph.transitions(s)) max_step = std::max(max_step, t.qcost);
  }
  hop_bits_ = static_cast<unsigned>(std::bit_width(states));
  const unsigned cost_bits =
      static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(max_step))) + hop_bits_;
  packed_ = hop_bits_ + cost_bits <= 64;
}

void GeodesicSearch::clear_queue() {
  radix_.clear();
  heap_.clear();
}

void GeodesicSearch::push(const QueueEntry& e) {
  if (packed_) {
    radix_.push((static_cast<std::uint64_t>(e.qcost) << hop_bits_) | e.hops, e.state);
    return;
  }
  const WideKey key = (static_cast<WideKey>(static_cast<std::uint64_t>(e.qcost)) << 64) |
                      (static_cast<WideKey>(e.hops) << 32) | e.state;
  std::size_t i = heap_.size();
  heap_.push_back(key);
  while (i > 0) {
    const std::size_t parent = (i - 1) / 4;
    if (!(key < heap_[parent])) break;
    heap_[i] = heap_[parent];
    i = parent;
  }
  heap_[i] = key;
}

GeodesicSearch::QueueEntry GeodesicSearch::pop() {
  if (packed_) {
    const auto [key, state] = radix_.pop();
    return {static_cast<QuantizedCost>(key >> hop_bits_),
            static_cast<std::uint32_t>(key & ((std::uint64_t{1} << hop_bits_) - 1)), state};
  }
  const WideKey top = heap_.front();
  const WideKey last = heap_.back();
  heap_.pop_back();
  const std::size_t n = heap_.size();
  std::size_t i = 0;
  while (n > 0) {
    const std::size_t first = 4 * i + 1;
    if (first >= n) break;
    std::size_t best = first;
    const std::size_t end = std::min(first + 4, n);
    for (std::size_t c = first + 1; c < end; ++c) {
      if (heap_[c] < heap_[best]) best = c;
    }
    if (!(heap_[best] < last)) break;
    heap_[i] = heap_[best];
    i = best;
  }
  if (n > 0) heap_[i] = last;
  return {static_cast<QuantizedCost>(static_cast<std::uint64_t>(top >> 64)), static_cast<std::uint32_t>(top >> 32),
          static_cast<StateIndex>(top)};
}

void GeodesicSearch::run(LinkIndex origin, const Limits& limits) {
  origin_ = origin;
  if (++epoch_ == 0) {
    std::fill(labels_.begin(), labels_.end(), Label{});
    std::fill(target_mark_.begin(), target_mark_.end(), 0);
    epoch_ = 1;
  }
  order_.clear();
  clear_queue();

  std::size_t target_count = 0;
  for (LinkIndex t : limits.targets) {
    if (target_mark_[t] != epoch_) {
      target_mark_[t] = epoch_;
      ++target_count;
    }
  }
  std::size_t targets_found = 0;
  QuantizedCost last_first_q = 0;
  std::uint32_t last_first_h = 0;

  for (Direction dir : {Direction::forward, Direction::backward}) {
    const StateIndex s = DirectedLink{origin, dir}.state();
    labels_[s] = Label{0, 0.0, 1, kNoState, epoch_, 0};
    push({0, 1, s});
  }

  while (!queue_empty()) {
    const auto [e_qcost, e_hops, s] = pop();
    Label& label = labels_[s];
    if (label.settled == epoch_ || e_qcost != label.qcost || e_hops != label.hops) continue;
    if (e_qcost > limits.max_qcost) break;
    if (target_count > 0 && targets_found == target_count &&
        (e_qcost > last_first_q || (e_qcost == last_first_q && e_hops > last_first_h))) {
      break;
    }
    label.settled = epoch_;
    order_.push_back(s);

    const LinkIndex link = s / 2;
    if (target_count > 0 && target_mark_[link] == epoch_ && labels_[s ^ 1u].settled != epoch_) {
      ++targets_found;
      last_first_q = e_qcost;
      last_first_h = e_hops;
    }

    const QuantizedCost base_q = label.qcost;
    const double base_cost = label.cost;
    const std::uint32_t nh = label.hops + 1;
    for (const auto& t : graph_->transitions(s)) {
      const StateIndex v = t.target;
      Label& next = labels_[v];
      const QuantizedCost nq = base_q + t.qcost;
      if (next.seen != epoch_) {
        next.seen = epoch_;
      } else if (next.settled == epoch_) {
        continue;
      } else if (nq > next.qcost || (nq == next.qcost && nh > next.hops)) {
        continue;
      } else if (nq == next.qcost && nh == next.hops) {
        if (!limits.distances_only && compare_paths(s, next.pred) < 0) {
          next.pred = s;
          next.cost = base_cost + t.cost;
        }
        continue;
      }
      next.qcost = nq;
      next.hops = nh;
      next.cost = base_cost + t.cost;
      next.pred = s;
      push({nq, nh, v});
    }
  }
}

int GeodesicSearch::compare_paths(StateIndex a, StateIndex b) const {
  scratch_a_.clear();
  scratch_b_.clear();
  while (a != b) {
    scratch_a_.push_back(a / 2);
    scratch_b_.push_back(b / 2);
    a = labels_[a].pred;
    b = labels_[b].pred;
  }
  for (std::size_t i = scratch_a_.size(); i-- > 0;) {
    if (scratch_a_[i] != scratch_b_[i]) return scratch_a_[i] < scratch_b_[i] ? -1 : 1;
  }
  return 0;
}

bool GeodesicSearch::better_arrival(StateIndex a, StateIndex b) const {
  if (labels_[a].qcost != labels_[b].qcost) return labels_[a].qcost < labels_[b].qcost;
  if (labels_[a].hops != labels_[b].hops) return labels_[a].hops < labels_[b].hops;
  return compare_paths(a, b) <= 0;
}

std::optional<StateIndex> GeodesicSearch::best_arrival(LinkIndex link) const {
  const StateIndex f = link * 2;
  const StateIndex b = f + 1;
  const bool has_f = settled(f);
  const bool has_b = settled(b);
  if (has_f && has_b) return better_arrival(f, b) ? f : b;
  if (has_f) return f;
  if (has_b) return b;
  return std::nullopt;
}

std::vector<LinkIndex> GeodesicSearch::path_to(StateIndex s) const {
  std::vector<LinkIndex> path;
  for (; s != kNoState; s = labels_[s].pred) path.push_back(s / 2);
  std::reverse(path.begin(), path.end());
  return path;
}

QuantizedCost radius_limit(double radius_m) {
  if (!(radius_m > 0.0)) throw InputError("radius must be positive");
  if (std::isinf(radius_m)) return std::numeric_limits<QuantizedCost>::max();
  return quantize_cost(radius_m);
}

ReachQuery::ReachQuery(const TraversalGraph& euclidean_graph, RadiusMode mode)
    : graph_(&euclidean_graph),
      mode_(mode),
      node_seen_(euclidean_graph.network().node_count(), 0),
      node_settled_(euclidean_graph.network().node_count(), 0),
      node_q_(euclidean_graph.network().node_count(), 0),
      link_mark_(euclidean_graph.network().link_count(), 0) {
  const Metric& metric = euclidean_graph.metric();
  half_q_.reserve(euclidean_graph.network().link_count());
  for (LinkIndex l = 0; l < euclidean_graph.network().link_count(); ++l) {
    const LinkCosts& c = euclidean_graph.costs(l);
    half_q_.emplace_back(quantize_cost(hybrid_link_cost(metric, c.first)),
                         quantize_cost(hybrid_link_cost(metric, c.second)));
  }
}

void ReachQuery::mark(LinkIndex l) {
  if (link_mark_[l] != epoch_) {
    link_mark_[l] = epoch_;
    result_.push_back(l);
  }
}

std::span<const LinkIndex> ReachQuery::find(LinkIndex origin, double radius_m) {
  const QuantizedCost limit = radius_limit(radius_m);
  const Network& net = graph_->network();
  if (++epoch_ == 0) {
    std::fill(node_seen_.begin(), node_seen_.end(), 0);
    std::fill(node_settled_.begin(), node_settled_.end(), 0);
    std::fill(link_mark_.begin(), link_mark_.end(), 0);
    epoch_ = 1;
  }
  result_.clear();
  mark(origin);

  if (mode_ == RadiusMode::network) {
    // Node distances from the origin center; a link is in reach when the
    // center is reachable through either end node within the limit.
    queue_.clear();
    auto relax = [&](NodeIndex node, QuantizedCost q) {
      if (q > limit) return;
      if (node_seen_[node] != epoch_ || q < node_q_[node]) {
        node_seen_[node] = epoch_;
        node_q_[node] = q;
        queue_.push(static_cast<std::uint64_t>(q), node);
      }
    };
    if (graph_->routable(origin)) {
      relax(net.tail_node(origin), half_q_[origin].first);
      relax(net.head_node(origin), half_q_[origin].second);
    }
    while (!queue_.empty()) {
      const auto [key, node] = queue_.pop();
      const auto q = static_cast<QuantizedCost>(key);
      if (node_settled_[node] == epoch_ || q != node_q_[node]) continue;
      node_settled_[node] = epoch_;
      for (LinkIndex y : net.node(node).incident_links) {
        if (!graph_->routable(y)) continue;
        const bool from_tail = net.tail_node(y) == node;
        const QuantizedCost near = from_tail ? half_q_[y].first : half_q_[y].second;
        const QuantizedCost far = from_tail ? half_q_[y].second : half_q_[y].first;
        if (q + near <= limit) mark(y);
        relax(from_tail ? net.head_node(y) : net.tail_node(y), q + near + far);
      }
    }
  } else {
    const Vec3& center = graph_->midpoint(origin);
    for (LinkIndex l = 0; l < net.link_count(); ++l) {
      if (l == origin || !graph_->routable(l)) continue;
      if (quantize_cost(distance(center, graph_->midpoint(l))) <= limit) mark(l);
    }
  }

  // Sorting a small set is cheaper than scanning all marks.
  if (result_.size() * 16 < net.link_count()) {
    std::sort(result_.begin(), result_.end());
  } else {
    result_.clear();
    for (LinkIndex l = 0; l < net.link_count(); ++l) {
      if (link_mark_[l] == epoch_) result_.push_back(l);
    }
  }
  return result_;
}

std::vector<LinkIndex> GeodesicTree::path_to(LinkIndex dest) const {
  std::vector<LinkIndex> path;
  const auto& entry = entries.at(dest);
  if (!entry.arrival) return path;
  for (StateIndex s = entry.arrival->state(); s != kNoState; s = state_predecessor[s]) path.push_back(s / 2);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

void check_origin(const Network& net, LinkIndex origin) {
  if (origin >= net.link_count()) throw InputError("unknown origin link index " + std::to_string(origin));
  if (net.is_self_loop(origin)) {
    throw InputError("origin link '" + net.link(origin).id + "' is a self-loop and cannot be routed from");
  }
}

}  // namespace

GeodesicTree geodesic_tree(const Network& net, LinkIndex origin, const Metric& metric, double radius_m,
                           const RoutingOptions& options) {
  check_origin(net, origin);
  const QuantizedCost limit = radius_limit(radius_m);

  TraversalGraph graph(net, metric, options.noise_floor_deg);
  GeodesicSearch search(graph);
  search.run(origin);

  TraversalGraph euclidean(net, Metric::euclidean(), options.noise_floor_deg);
  GeodesicSearch distances(euclidean);
  GeodesicSearch::Limits dist_limits;
  dist_limits.distances_only = true;
  distances.run(origin, dist_limits);

  GeodesicTree tree;
  tree.origin = origin;
  tree.metric = metric;
  tree.radius_m = radius_m;
  tree.entries.resize(net.link_count());
  tree.state_predecessor.assign(graph.state_count(), kNoState);
  for (StateIndex s : search.settle_order()) tree.state_predecessor[s] = search.predecessor(s);

  for (LinkIndex l = 0; l < net.link_count(); ++l) {
    GeodesicEntry& entry = tree.entries[l];
    const auto arrival = search.best_arrival(l);
    if (!arrival) continue;
    entry.cost = search.cost(*arrival);
    entry.hops = search.hops(*arrival);
    entry.arrival = DirectedLink::from_state(*arrival);
    if (search.predecessor(*arrival) != kNoState) {
      entry.predecessor = DirectedLink::from_state(search.predecessor(*arrival));
    }
    const auto nearest = distances.best_arrival(l);
    entry.network_distance_m = nearest ? distances.cost(*nearest) : entry.network_distance_m;
    if (l == origin) {
      entry.reachable = true;
    } else if (options.radius_mode == RadiusMode::network) {
      entry.reachable = nearest && distances.qcost(*nearest) <= limit;
    } else {
      entry.reachable = quantize_cost(distance(graph.midpoint(origin), graph.midpoint(l))) <= limit;
    }
  }
  return tree;
}

GeodesicTree geodesic_tree(const Network& net, std::string_view origin_id, const Metric& metric, double radius_m,
                           const RoutingOptions& options) {
  return geodesic_tree(net, net.index_of(origin_id), metric, radius_m, options);
}

std::vector<LinkIndex> reachable_set(const Network& net, LinkIndex origin, double radius_m,
                                     const RoutingOptions& options) {
  check_origin(net, origin);
  TraversalGraph euclidean(net, Metric::euclidean(), options.noise_floor_deg);
  if (std::isinf(radius_m) && radius_m > 0) {
    GeodesicSearch search(euclidean);
    GeodesicSearch::Limits limits;
    limits.distances_only = true;
    search.run(origin, limits);
    std::vector<LinkIndex> out;
    for (StateIndex s : search.settle_order()) out.push_back(s / 2);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  ReachQuery query(euclidean, options.radius_mode);
  const auto found = query.find(origin, radius_m);
  std::vector<LinkIndex> out(found.begin(), found.end());
  if (options.radius_mode == RadiusMode::crowflight) {
    // Keep only links connected to the origin.
    const auto connected = reachable_set(net, origin, kUnboundedRadius, options);
    std::vector<LinkIndex> kept;
    std::set_intersection(out.begin(), out.end(), connected.begin(), connected.end(), std::back_inserter(kept));
    out = std::move(kept);
  }
  return out;
}

}  // namespace volnet
