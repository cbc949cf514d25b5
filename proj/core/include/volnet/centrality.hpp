#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "volnet/metric.hpp"
#include "volnet/network.hpp"
#include "volnet/routing.hpp"

namespace volnet {

struct CentralityOptions {
  RoutingOptions routing;
  // 0 = VOLNET_THREADS or hardware concurrency.
  unsigned threads = 0;
};

// Closeness of one link over the links within radius. Lower mean cost means
// more central; inverse_mean gives the integration-style orientation.
struct ClosenessRow {
  std::string link_id;
  double mean_geodesic_cost = 0.0;
  double total_geodesic_cost = 0.0;
  // Includes the link itself.
  std::uint32_t reach_count = 1;
  double reach_weight = 0.0;
  double inverse_mean = 0.0;
  // False when nothing else is in reach or the link is a self-loop.
  bool defined = false;
};

// Accumulated origin-destination weight routed through a link. Each pair
// adds w(y)*w(z) to every strictly intermediate link and half of it to each
// end link.
struct BetweennessRow {
  std::string link_id;
  double value = 0.0;
};

struct CentralityTable {
  Metric metric = Metric::euclidean();
  double radius_m = kUnboundedRadius;
  // All indexed by link.
  std::vector<ClosenessRow> closeness;
  std::vector<BetweennessRow> betweenness;
};

// Closeness and betweenness from a single pass over all origins. Output is
// independent of the thread count, bit for bit.
CentralityTable analyze(const Network& net, const Metric& metric, double radius_m,
                        const CentralityOptions& options = {});

std::vector<ClosenessRow> closeness(const Network& net, const Metric& metric, double radius_m,
                                    const CentralityOptions& options = {});
std::vector<BetweennessRow> betweenness(const Network& net, const Metric& metric, double radius_m,
                                        const CentralityOptions& options = {});

// Number of distinct other links sharing a node with each link.
std::vector<std::uint32_t> connectivity(const Network& net);

// Squared Pearson correlation between connectivity and the inverse mean of
// unbounded-radius closeness under `metric`. Links with undefined closeness
// are left out. Throws AnalysisError when fewer than 3 links remain or
// either series has zero variance.
double intelligibility(const Network& net, const Metric& metric, const CentralityOptions& options = {});

}  // namespace volnet
