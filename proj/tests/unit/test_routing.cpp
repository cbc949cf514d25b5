#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "volnet/errors.hpp"
#include "volnet/routing.hpp"

namespace volnet {
namespace {

using test::make_link;

std::vector<Metric> all_metrics() {
  return {Metric::topological(), Metric::angular(),        Metric::euclidean(),
          Metric::hybrid(1.0 / 3), Metric::hybrid(0.5), Metric::hybrid(2.0 / 3)};
}

TEST(DualGraph, TwoLinkChain) {
  const Network net = build_network(test::chain_links(2));
  const TraversalGraph g(net, Metric::angular());
  const StateIndex a_fwd = DirectedLink{0, Direction::forward}.state();
  const StateIndex a_bwd = DirectedLink{0, Direction::backward}.state();
  const StateIndex b_fwd = DirectedLink{1, Direction::forward}.state();
  const StateIndex b_bwd = DirectedLink{1, Direction::backward}.state();
  ASSERT_EQ(g.transitions(a_fwd).size(), 1u);
  EXPECT_EQ(g.transitions(a_fwd)[0].target, b_fwd);
  EXPECT_EQ(g.transitions(a_fwd)[0].turn_deg, 0.0);
  ASSERT_EQ(g.transitions(b_bwd).size(), 1u);
  EXPECT_EQ(g.transitions(b_bwd)[0].target, a_bwd);
  // Dead ends carry a 180 degree U-turn.
  ASSERT_EQ(g.transitions(a_bwd).size(), 1u);
  EXPECT_EQ(g.transitions(a_bwd)[0].target, a_fwd);
  EXPECT_NEAR(g.transitions(a_bwd)[0].turn_deg, 180.0, 1e-9);
  EXPECT_EQ(g.transition_count(), 4u);
}

TEST(DualGraph, DegreeThreeNode) {
  const Network net = build_network(test::star_links(3, 0));
  const TraversalGraph g(net, Metric::euclidean());
  for (LinkIndex l = 0; l < 3; ++l) {
    // Spokes point outwards, so travelling backward arrives at the hub.
    EXPECT_EQ(g.transitions(DirectedLink{l, Direction::backward}.state()).size(), 2u);
  }
}

TEST(DualGraph, NoUTurnAtJunctions) {
  const Network net = build_network(test::grid_links(3, 10.0));
  const TraversalGraph g(net, Metric::angular());
  for (StateIndex s = 0; s < g.state_count(); ++s) {
    for (const auto& t : g.transitions(s)) {
      if (t.target / 2 == s / 2) {
        const DirectedLink d = DirectedLink::from_state(s);
        const NodeIndex head = d.dir == Direction::forward ? net.head_node(d.link) : net.tail_node(d.link);
        EXPECT_EQ(net.node(head).degree, 1u);
      }
    }
  }
}

TEST(DualGraph, SelfLoopsHaveNoTransitions) {
  const Network net = build_network({make_link("a", {{0, 0, 0}, {10, 0, 0}}),
                                     make_link("loop", {{10, 0, 0}, {15, 5, 0}, {10, 0, 0}}),
                                     make_link("b", {{10, 0, 0}, {20, 0, 0}})});
  const TraversalGraph g(net, Metric::angular());
  const LinkIndex loop = net.index_of("loop");
  EXPECT_TRUE(g.transitions(2 * loop).empty());
  EXPECT_TRUE(g.transitions(2 * loop + 1).empty());
  for (StateIndex s = 0; s < g.state_count(); ++s) {
    for (const auto& t : g.transitions(s)) EXPECT_NE(t.target / 2, loop);
  }
}

TEST(Geodesic, ChainEuclideanAndAngular) {
  const Network net = build_network(test::chain_links(3, 1.0));
  const auto e = geodesic_tree(net, "c0", Metric::euclidean(), kUnboundedRadius);
  EXPECT_NEAR(e.entries[2].cost, 2.0, 1e-9);
  EXPECT_EQ(e.path_to(2), (std::vector<LinkIndex>{0, 1, 2}));
  const auto a = geodesic_tree(net, "c0", Metric::angular(), kUnboundedRadius);
  EXPECT_EQ(a.entries[2].cost, 0.0);
  EXPECT_EQ(a.entries[2].hops, 3u);
}

TEST(Geodesic, YNetworkRouteChoice) {
  const Network net = build_network(test::y_network_links());
  const LinkIndex d = net.index_of("D");
  const LinkIndex route_a = net.index_of("A");
  const LinkIndex route_b = net.index_of("B");
  const auto ang = geodesic_tree(net, "O", Metric::angular(), kUnboundedRadius);
  const auto euc = geodesic_tree(net, "O", Metric::euclidean(), kUnboundedRadius);
  EXPECT_EQ(ang.path_to(d)[1], route_b);
  EXPECT_NEAR(ang.entries[d].cost, 0.0, 1e-9);
  EXPECT_EQ(euc.path_to(d)[1], route_a);
  EXPECT_NEAR(euc.entries[d].cost, 5.0 + 10.0 + 5.0, 1e-9);

  // The enumeration oracle makes the same choice.
  const std::vector<Metric> metrics{Metric::angular(), Metric::euclidean()};
  const auto routes = oracle::enumerate_routes(net, net.index_of("O"), metrics);
  EXPECT_EQ(routes.best[0][d]->links, ang.path_to(d));
  EXPECT_EQ(routes.best[1][d]->links, euc.path_to(d));
  // Route A alone costs 180 degrees of turning.
  TagFilter no_b;
  no_b.exclude = {"b"};
  std::vector<Link> links = test::y_network_links();
  links[2].tags = {"b"};
  const Network without_b = filter_network(build_network(links), no_b);
  const auto forced = geodesic_tree(without_b, "O", Metric::angular(), kUnboundedRadius);
  EXPECT_NEAR(forced.entries[without_b.index_of("D")].cost, 180.0, 1e-9);
}

TEST(Geodesic, Errors) {
  const Network net = build_network({make_link("a", {{0, 0, 0}, {10, 0, 0}}),
                                     make_link("loop", {{10, 0, 0}, {15, 5, 0}, {10, 0, 0}})});
  EXPECT_THROW(geodesic_tree(net, "zz", Metric::angular(), kUnboundedRadius), InputError);
  EXPECT_THROW(geodesic_tree(net, "loop", Metric::angular(), kUnboundedRadius), InputError);
  EXPECT_THROW(geodesic_tree(net, "a", Metric::angular(), 0.0), InputError);
  EXPECT_THROW(geodesic_tree(net, "a", Metric::angular(), -5.0), InputError);
  EXPECT_THROW(reachable_set(net, 7, 10.0), InputError);
}

TEST(Reach, Examples) {
  const Network chain = build_network(test::chain_links(5, 1.0));
  EXPECT_EQ(reachable_set(chain, 1, 1.0), (std::vector<LinkIndex>{0, 1, 2}));
  EXPECT_EQ(reachable_set(chain, 1, 0.4), (std::vector<LinkIndex>{1}));
  EXPECT_EQ(reachable_set(chain, 1, kUnboundedRadius).size(), 5u);

  auto links = test::chain_links(3, 1.0);
  links.push_back(make_link("far", {{50, 0, 0}, {51, 0, 0}}));
  const Network split = build_network(links);
  EXPECT_EQ(reachable_set(split, 0, kUnboundedRadius), (std::vector<LinkIndex>{0, 1, 2}));
}

TEST(Reach, CrowflightUsesStraightDistanceButNeedsConnection) {
  // A U-shaped corridor: the far arm is close in a straight line but 40 m
  // away along the network.
  const Network net = build_network({
      make_link("a", {{0, 0, 0}, {0, 10, 0}}),
      make_link("b", {{0, 10, 0}, {20, 10, 0}}),
      make_link("c", {{20, 10, 0}, {20, 0, 0}}),
      make_link("island", {{5, 0, 0}, {6, 0, 0}}),
  });
  RoutingOptions crow;
  crow.radius_mode = RadiusMode::crowflight;
  const LinkIndex a = net.index_of("a");
  const LinkIndex c = net.index_of("c");
  const auto network_reach = reachable_set(net, a, 21.0);
  EXPECT_TRUE(std::find(network_reach.begin(), network_reach.end(), c) == network_reach.end());
  const auto crow_reach = reachable_set(net, a, 21.0, crow);
  EXPECT_TRUE(std::find(crow_reach.begin(), crow_reach.end(), c) != crow_reach.end());
  EXPECT_TRUE(std::find(crow_reach.begin(), crow_reach.end(), net.index_of("island")) == crow_reach.end());
}

TEST(Reach, MonotoneInRadius) {
  test::Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = build_network(test::random_links(rng, 12));
    for (LinkIndex o = 0; o < net.link_count(); ++o) {
      if (net.is_self_loop(o)) continue;
      std::vector<LinkIndex> previous;
      for (double r : {1.0, 5.0, 10.0, 20.0, 40.0, kUnboundedRadius}) {
        const auto now = reachable_set(net, o, r);
        EXPECT_TRUE(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
        previous = now;
      }
    }
  }
}

// The node-level reach search must agree exactly with a radius-limited
// Euclidean search over directed links.
TEST(Reach, NodeSearchMatchesDirectedLinkSearch) {
  test::Rng rng(53);
  std::vector<Network> nets;
  for (int trial = 0; trial < 60; ++trial) nets.push_back(build_network(test::random_links(rng, 14)));
  nets.push_back(build_network(test::multilevel_links(11, 2, 12)));
  nets.push_back(build_network(test::two_floor_links()));
  for (const Network& net : nets) {
    const TraversalGraph euclidean(net, Metric::euclidean());
    ReachQuery query(euclidean, RadiusMode::network);
    GeodesicSearch search(euclidean);
    for (LinkIndex o = 0; o < net.link_count(); ++o) {
      if (net.is_self_loop(o)) continue;
      for (double r : {0.5, 3.0, 10.0, 25.0, 60.0}) {
        GeodesicSearch::Limits limits;
        limits.max_qcost = radius_limit(r);
        limits.distances_only = true;
        search.run(o, limits);
        std::vector<LinkIndex> expected;
        for (StateIndex s : search.settle_order()) expected.push_back(s / 2);
        std::sort(expected.begin(), expected.end());
        expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
        const auto found = query.find(o, r);
        EXPECT_EQ(std::vector<LinkIndex>(found.begin(), found.end()), expected) << "origin " << o << " R " << r;
      }
    }
  }
}

TEST(Geodesic, SymmetricCosts) {
  test::Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = build_network(test::random_links(rng, 10));
    for (const Metric& m : all_metrics()) {
      std::vector<GeodesicTree> trees;
      for (LinkIndex o = 0; o < net.link_count(); ++o) {
        trees.push_back(net.is_self_loop(o) ? GeodesicTree{} : geodesic_tree(net, o, m, kUnboundedRadius));
      }
      for (LinkIndex x = 0; x < net.link_count(); ++x) {
        for (LinkIndex y = 0; y < net.link_count(); ++y) {
          if (net.is_self_loop(x) || net.is_self_loop(y)) continue;
          const double xy = trees[x].entries[y].cost;
          const double yx = trees[y].entries[x].cost;
          if (std::isinf(xy)) {
            EXPECT_TRUE(std::isinf(yx));
          } else {
            EXPECT_NEAR(xy, yx, 1e-9) << m.label();
          }
        }
      }
    }
  }
}

TEST(Geodesic, HybridEndpointsEqualPureMetricsExactly) {
  test::Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = build_network(test::random_links(rng, 12));
    for (LinkIndex o = 0; o < net.link_count(); ++o) {
      if (net.is_self_loop(o)) continue;
      const auto h1 = geodesic_tree(net, o, Metric::hybrid(1.0), kUnboundedRadius);
      const auto an = geodesic_tree(net, o, Metric::angular(), kUnboundedRadius);
      const auto h0 = geodesic_tree(net, o, Metric::hybrid(0.0), kUnboundedRadius);
      const auto eu = geodesic_tree(net, o, Metric::euclidean(), kUnboundedRadius);
      for (LinkIndex y = 0; y < net.link_count(); ++y) {
        EXPECT_EQ(h1.entries[y].cost, an.entries[y].cost);
        EXPECT_EQ(h0.entries[y].cost, eu.entries[y].cost);
        EXPECT_EQ(h1.path_to(y), an.path_to(y));
        EXPECT_EQ(h0.path_to(y), eu.path_to(y));
      }
    }
  }
}

TEST(Geodesic, PrefixConsistency) {
  test::Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = build_network(test::random_links(rng, 12));
    for (const Metric& m : all_metrics()) {
      for (LinkIndex o = 0; o < net.link_count(); ++o) {
        if (net.is_self_loop(o)) continue;
        const auto tree = geodesic_tree(net, o, m, kUnboundedRadius);
        for (LinkIndex y = 0; y < net.link_count(); ++y) {
          for (LinkIndex mid : tree.path_to(y)) EXPECT_LE(tree.entries[mid].cost, tree.entries[y].cost + 1e-9);
        }
      }
    }
  }
}

TEST(Geodesic, MatchesEnumerationOracle) {
  test::Rng rng(59);
  const auto metrics = all_metrics();
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = build_network(test::random_links(rng, 12));
    for (LinkIndex o = 0; o < net.link_count(); ++o) {
      if (net.is_self_loop(o)) continue;
      const auto routes = oracle::enumerate_routes(net, o, metrics);
      for (std::size_t k = 0; k < metrics.size(); ++k) {
        const auto tree = geodesic_tree(net, o, metrics[k], kUnboundedRadius);
        for (LinkIndex y = 0; y < net.link_count(); ++y) {
          const auto& expected = routes.best[k][y];
          if (!expected) {
            EXPECT_FALSE(tree.entries[y].arrival.has_value());
            continue;
          }
          EXPECT_NEAR(tree.entries[y].cost, expected->cost, 1e-9) << metrics[k].label();
          EXPECT_EQ(tree.path_to(y), expected->links) << metrics[k].label();
          EXPECT_NEAR(tree.entries[y].network_distance_m, routes.distance_m[y], 1e-9);
        }
      }
    }
  }
}

}  // namespace
}  // namespace volnet
