#include "volnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "volnet/errors.hpp"
#include "volnet/parallel.hpp"
#include "volnet/stats.hpp"

namespace volnet {

namespace {

// Origins are processed in fixed blocks; per-origin betweenness
// contributions are summed in origin order so the result does not depend on
// scheduling.
constexpr std::size_t kOriginBlock = 128;

struct Worker {
  explicit Worker(const TraversalGraph& metric_graph, const TraversalGraph* euclidean_graph, RadiusMode mode)
      : search(metric_graph),
        own(metric_graph.state_count(), 0.0),
        below(metric_graph.state_count(), 0.0) {
    if (euclidean_graph != nullptr) reach.emplace(*euclidean_graph, mode);
  }

  GeodesicSearch search;
  std::optional<ReachQuery> reach;
  std::vector<double> own;
  std::vector<double> below;
  std::vector<LinkIndex> dests;
  std::vector<StateIndex> arrivals;
};

struct Contribution {
  std::vector<double> value;
  std::vector<LinkIndex> touched;

  void add(LinkIndex l, double v) {
    if (value[l] == 0.0 && v != 0.0) touched.push_back(l);
    value[l] += v;
  }
};

void analyze_origin(const Network& net, LinkIndex origin, double radius_m, Worker& w, ClosenessRow& row,
                    Contribution& contrib) {
  const Link& origin_link = net.link(origin);
  row.link_id = origin_link.id;
  row.reach_count = 1;
  row.reach_weight = origin_link.weight;
  if (net.is_self_loop(origin)) return;

  GeodesicSearch& search = w.search;
  w.dests.clear();
  w.arrivals.clear();
  if (w.reach) {
    const auto candidates = w.reach->find(origin, radius_m);
    GeodesicSearch::Limits limits;
    limits.targets = candidates;
    search.run(origin, limits);
    for (LinkIndex y : candidates) w.dests.push_back(y);
  } else {
    search.run(origin);
    for (LinkIndex y = 0; y < net.link_count(); ++y) {
      if (search.settled(2 * y) || search.settled(2 * y + 1)) w.dests.push_back(y);
    }
  }

  // Closeness, summed in link order.
  std::size_t kept = 0;
  double total = 0.0;
  double weight = 0.0;
  std::uint32_t count = 0;
  for (LinkIndex y : w.dests) {
    const auto arrival = search.best_arrival(y);
    if (!arrival) continue;
    w.dests[kept++] = y;
    w.arrivals.push_back(*arrival);
    ++count;
    weight += net.link(y).weight;
    if (y != origin) total += search.cost(*arrival);
  }
  w.dests.resize(kept);
  row.reach_count = count;
  row.reach_weight = weight;
  row.total_geodesic_cost = total;
  row.defined = count > 1;
  if (row.defined) {
    row.mean_geodesic_cost = total / static_cast<double>(count - 1);
    row.inverse_mean = row.mean_geodesic_cost > 0.0 ? 1.0 / row.mean_geodesic_cost : 0.0;
  }

  // Betweenness: every pair is routed from its lower-id link.
  const double w_origin = origin_link.weight;
  double end_weight = 0.0;
  for (std::size_t i = 0; i < w.dests.size(); ++i) {
    const LinkIndex y = w.dests[i];
    if (y <= origin) continue;
    const double wy = net.link(y).weight;
    w.own[w.arrivals[i]] += wy;
    end_weight += wy;
  }
  if (end_weight == 0.0) {
    for (std::size_t i = 0; i < w.dests.size(); ++i) w.own[w.arrivals[i]] = 0.0;
    return;
  }
  const auto order = search.settle_order();
  for (std::size_t i = order.size(); i-- > 0;) {
    const StateIndex s = order[i];
    const StateIndex p = search.predecessor(s);
    if (p != kNoState) {
      if (w.below[s] != 0.0) contrib.add(s / 2, w_origin * w.below[s]);
      w.below[p] += w.own[s] + w.below[s];
    }
  }
  for (StateIndex s : order) {
    w.own[s] = 0.0;
    w.below[s] = 0.0;
  }
  contrib.add(origin, 0.5 * w_origin * end_weight);
  for (LinkIndex y : w.dests) {
    if (y > origin) contrib.add(y, 0.5 * w_origin * net.link(y).weight);
  }
}

}  // namespace

CentralityTable analyze(const Network& net, const Metric& metric, double radius_m, const CentralityOptions& options) {
  radius_limit(radius_m);
  const std::size_t n = net.link_count();
  const unsigned threads = resolve_thread_count(options.threads);

  TraversalGraph graph(net, metric, options.routing.noise_floor_deg);
  std::unique_ptr<TraversalGraph> euclidean;
  if (!std::isinf(radius_m)) {
    euclidean = std::make_unique<TraversalGraph>(net, Metric::euclidean(), options.routing.noise_floor_deg);
  }

  std::vector<std::unique_ptr<Worker>> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.push_back(std::make_unique<Worker>(graph, euclidean.get(), options.routing.radius_mode));
  }

  CentralityTable table;
  table.metric = metric;
  table.radius_m = radius_m;
  table.closeness.resize(n);
  table.betweenness.resize(n);
  for (LinkIndex l = 0; l < n; ++l) table.betweenness[l].link_id = net.link(l).id;

  std::vector<Contribution> slots(std::min(kOriginBlock, n));
  for (auto& slot : slots) slot.value.assign(n, 0.0);

  for (std::size_t begin = 0; begin < n; begin += kOriginBlock) {
    const std::size_t count = std::min(kOriginBlock, n - begin);
    parallel_for(count, threads, [&](std::size_t i, unsigned worker) {
      const auto origin = static_cast<LinkIndex>(begin + i);
      analyze_origin(net, origin, radius_m, *workers[worker], table.closeness[origin], slots[i]);
    });
    for (std::size_t i = 0; i < count; ++i) {
      Contribution& slot = slots[i];
      for (LinkIndex l : slot.touched) {
        table.betweenness[l].value += slot.value[l];
        slot.value[l] = 0.0;
      }
      slot.touched.clear();
    }
  }
  return table;
}

std::vector<ClosenessRow> closeness(const Network& net, const Metric& metric, double radius_m,
                                    const CentralityOptions& options) {
  return analyze(net, metric, radius_m, options).closeness;
}

std::vector<BetweennessRow> betweenness(const Network& net, const Metric& metric, double radius_m,
                                        const CentralityOptions& options) {
  return analyze(net, metric, radius_m, options).betweenness;
}

std::vector<std::uint32_t> connectivity(const Network& net) {
  std::vector<std::uint32_t> out(net.link_count(), 0);
  std::vector<LinkIndex> neighbours;
  for (LinkIndex l = 0; l < net.link_count(); ++l) {
    neighbours.clear();
    for (NodeIndex node : {net.tail_node(l), net.head_node(l)}) {
      for (LinkIndex other : net.node(node).incident_links) {
        if (other != l) neighbours.push_back(other);
      }
    }
    std::sort(neighbours.begin(), neighbours.end());
    out[l] = static_cast<std::uint32_t>(std::unique(neighbours.begin(), neighbours.end()) - neighbours.begin());
  }
  return out;
}

double intelligibility(const Network& net, const Metric& metric, const CentralityOptions& options) {
  if (net.link_count() < 3) throw AnalysisError("intelligibility needs at least 3 links");
  const auto conn = connectivity(net);
  const auto rows = closeness(net, metric, kUnboundedRadius, options);
  std::vector<double> x;
  std::vector<double> y;
  for (LinkIndex l = 0; l < net.link_count(); ++l) {
    if (!rows[l].defined) continue;
    x.push_back(static_cast<double>(conn[l]));
    y.push_back(rows[l].inverse_mean);
  }
  if (x.size() < 3) throw AnalysisError("intelligibility needs at least 3 links with defined closeness");
  const double r = pearson_r(x, y);
  return r * r;
}

}  // namespace volnet
