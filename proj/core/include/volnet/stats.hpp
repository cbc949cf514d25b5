#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volnet/centrality.hpp"
#include "volnet/metric.hpp"
#include "volnet/network.hpp"

namespace volnet {

// Relative spread below which a series counts as constant.
inline constexpr double kZeroVarianceTolerance = 1e-12;

// Pearson correlation coefficient. Throws AnalysisError for fewer than two
// pairs, mismatched lengths or a series that is constant up to
// kZeroVarianceTolerance.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Two-sided p-value of a Pearson r over n pairs (t-test, n - 2 dof).
double pearson_p_value(double r, std::size_t n);

// "**" for p <= 0.01, "*" for p <= 0.05, otherwise empty.
std::string significance_stars(double p);

struct CorrelationResult {
  double r = 0.0;
  double r2 = 0.0;
  double p_value = 1.0;
  std::size_t n_used = 0;
  std::size_t n_dropped = 0;
};

// Observed flow per link id for one period (or a period average).
struct ObservationSet {
  std::string period_label;
  std::map<std::string, double> flows;
};

// Pearson r of ln(observed) against ln(value) over paired samples. Pairs
// with a nonpositive or non-finite entry are dropped and counted. Throws
// AnalysisError with fewer than 3 usable pairs or zero variance.
CorrelationResult loglog_r2(std::span<const double> observed, std::span<const double> values);

// Pairs each observation with values[link index]. Throws InputError for an
// observed id that is not in the network.
CorrelationResult loglog_r2(const ObservationSet& obs, const Network& net, std::span<const double> values);

enum class Measure { closeness, betweenness };

std::string_view to_string(Measure m);
// "closeness" or "betweenness"; throws InputError otherwise.
Measure parse_measure(std::string_view text);

// Per-link series for a measure: mean geodesic cost for closeness (0 when
// undefined, which the log transform drops), the betweenness value otherwise.
std::vector<double> measure_values(const CentralityTable& table, Measure m);

struct SweepCell {
  Measure measure = Measure::betweenness;
  Metric metric = Metric::euclidean();
  double radius_m = 0.0;
  bool ok = false;
  std::string error;
  // n_used and n_dropped are filled even when the cell failed.
  CorrelationResult result;
  bool best_radius = false;
};

struct SweepResult {
  // Ordered by measure, then metric, then radius, as given.
  std::vector<SweepCell> cells;
};

// Correlates observed flows with every measure x metric x radius cell. Cell
// failures are recorded in the cell; the sweep itself does not throw for
// them. The best radius per (measure, metric) is the highest r2, ties going
// to the smaller radius.
SweepResult sweep(const Network& net, const ObservationSet& obs, std::span<const Measure> measures,
                  std::span<const Metric> metrics, std::span<const double> radii,
                  const CentralityOptions& options = {});

struct CorrelationMatrix {
  Measure measure = Measure::betweenness;
  double radius_m = 0.0;
  std::vector<Metric> metrics;
  // Row-major, metrics.size() squared. Diagonal r2 is exactly 1.
  std::vector<CorrelationResult> cells;

  const CorrelationResult& at(std::size_t i, std::size_t j) const { return cells[i * metrics.size() + j]; }
};

// Log-log r2 between the per-link series of each pair of metrics. Throws
// AnalysisError when any series cannot be correlated.
CorrelationMatrix cross_correlation_matrix(const Network& net, Measure measure, std::span<const Metric> metrics,
                                           double radius_m, const CentralityOptions& options = {});

}  // namespace volnet
