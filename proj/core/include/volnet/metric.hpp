#pragma once

#include <string>
#include <string_view>

#include "volnet/geometry.hpp"

namespace volnet {

enum class MetricKind { topological, angular, euclidean, hybrid };

// Cost definition for an analysis. The hybrid weight `a` blends cumulative
// angular change (degrees) with distance walked (meters): a = 1 is pure
// angular, a = 0 pure Euclidean. Units are deliberately left mixed.
class Metric {
 public:
  static Metric topological() { return Metric(MetricKind::topological, 0.0); }
  static Metric angular() { return Metric(MetricKind::angular, 1.0); }
  static Metric euclidean() { return Metric(MetricKind::euclidean, 0.0); }
  // Throws InputError unless 0 <= a <= 1.
  static Metric hybrid(double a);

  // Accepts "topological", "angular", "euclidean", "hybrid:<r_ang>:<r_euc>"
  // and "hybrid:<a>".
  static Metric parse(std::string_view text);

  MetricKind kind() const { return kind_; }
  double a() const { return a_; }

  // Stable name used in file names and tables, e.g. "hybrid-0.5".
  std::string label() const;

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  Metric(MetricKind kind, double a) : kind_(kind), a_(a) {}

  MetricKind kind_;
  double a_;
};

// "r_ang:r_euc" maps to r_ang / (r_ang + r_euc); a plain decimal in [0, 1]
// is returned unchanged. Throws InputError on malformed input or "0:0".
double parse_ratio(std::string_view text);

// Cost of traversing a whole link.
double hybrid_link_cost(const Metric& m, const LinkCosts& c);
// Cost of traversing half a link (topological counts 0.5).
double hybrid_link_cost(const Metric& m, const HalfCosts& c);
// Cost of a junction turn, turn_deg in [0, 180].
double hybrid_node_cost(const Metric& m, double turn_deg);

}  // namespace volnet
