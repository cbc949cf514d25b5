#include "volnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "volnet/errors.hpp"

namespace volnet {

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw AnalysisError("correlated series differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw AnalysisError("correlation needs at least two pairs");
  // Constant up to rounding: values that differ only in the last few bits
  // (e.g. equal costs accumulated in a different order) carry no variance.
  auto constant = [](std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo <= kZeroVarianceTolerance * std::max({1.0, std::abs(*lo), std::abs(*hi)});
  };
  if (constant(x) || constant(y)) throw AnalysisError("zero variance series");

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw AnalysisError("zero variance series");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) throw AnalysisError("p-value needs at least three pairs");
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = std::abs(r) * std::sqrt(dof / (1.0 - r2));
  const boost::math::students_t dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

std::string significance_stars(double p) {
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "";
}

namespace {

struct LogPairs {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t dropped = 0;
};

bool loggable(double v) { return std::isfinite(v) && v > 0.0; }

void add_pair(LogPairs& pairs, double a, double b) {
  if (loggable(a) && loggable(b)) {
    pairs.x.push_back(std::log(a));
    pairs.y.push_back(std::log(b));
  } else {
    ++pairs.dropped;
  }
}

CorrelationResult correlate(const LogPairs& pairs) {
  if (pairs.x.size() < 3) {
    throw AnalysisError("fewer than 3 usable pairs after dropping nonpositive values (" +
                        std::to_string(pairs.x.size()) + " left)");
  }
  CorrelationResult out;
  out.n_used = pairs.x.size();
  out.n_dropped = pairs.dropped;
  out.r = pearson_r(pairs.x, pairs.y);
  out.r2 = out.r * out.r;
  out.p_value = pearson_p_value(out.r, out.n_used);
  return out;
}

LogPairs observation_pairs(const ObservationSet& obs, const Network& net, std::span<const double> values) {
  if (values.size() != net.link_count()) throw AnalysisError("value series does not match the network");
  LogPairs pairs;
  for (const auto& [id, flow] : obs.flows) {
    add_pair(pairs, flow, values[net.index_of(id)]);
  }
  return pairs;
}

}  // namespace

CorrelationResult loglog_r2(std::span<const double> observed, std::span<const double> values) {
  if (observed.size() != values.size()) throw AnalysisError("correlated series differ in length");
  LogPairs pairs;
  for (std::size_t i = 0; i < observed.size(); ++i) add_pair(pairs, observed[i], values[i]);
  return correlate(pairs);
}

CorrelationResult loglog_r2(const ObservationSet& obs, const Network& net, std::span<const double> values) {
  return correlate(observation_pairs(obs, net, values));
}

std::string_view to_string(Measure m) { return m == Measure::closeness ? "closeness" : "betweenness"; }

Measure parse_measure(std::string_view text) {
  if (text == "closeness") return Measure::closeness;
  if (text == "betweenness") return Measure::betweenness;
  throw InputError("unknown measure '" + std::string(text) + "'");
}

std::vector<double> measure_values(const CentralityTable& table, Measure m) {
  std::vector<double> out;
  if (m == Measure::closeness) {
    out.reserve(table.closeness.size());
    for (const auto& row : table.closeness) out.push_back(row.defined ? row.mean_geodesic_cost : 0.0);
  } else {
    out.reserve(table.betweenness.size());
    for (const auto& row : table.betweenness) out.push_back(row.value);
  }
  return out;
}

SweepResult sweep(const Network& net, const ObservationSet& obs, std::span<const Measure> measures,
                  std::span<const Metric> metrics, std::span<const double> radii, const CentralityOptions& options) {
  if (measures.empty() || metrics.empty() || radii.empty()) throw InputError("sweep grid is empty");
  for (const auto& [id, flow] : obs.flows) net.index_of(id);

  // Centrality tables by (metric, radius), computed once for all measures.
  std::vector<std::optional<CentralityTable>> tables(metrics.size() * radii.size());
  std::vector<std::string> table_errors(tables.size());
  for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const std::size_t k = mi * radii.size() + ri;
      try {
        tables[k] = analyze(net, metrics[mi], radii[ri], options);
      } catch (const std::exception& e) {
        table_errors[k] = e.what();
      }
    }
  }

  SweepResult result;
  for (Measure measure : measures) {
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      const std::size_t row_begin = result.cells.size();
      for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        SweepCell cell;
        cell.measure = measure;
        cell.metric = metrics[mi];
        cell.radius_m = radii[ri];
        const auto& table = tables[mi * radii.size() + ri];
        if (!table) {
          cell.error = table_errors[mi * radii.size() + ri];
          cell.result.n_dropped = obs.flows.size();
        } else {
          const LogPairs pairs = observation_pairs(obs, net, measure_values(*table, measure));
          cell.result.n_used = pairs.x.size();
          cell.result.n_dropped = pairs.dropped;
          try {
            cell.result = correlate(pairs);
            cell.ok = true;
          } catch (const AnalysisError& e) {
            cell.error = e.what();
          }
        }
        result.cells.push_back(std::move(cell));
      }
      SweepCell* best = nullptr;
      for (std::size_t i = row_begin; i < result.cells.size(); ++i) {
        SweepCell& c = result.cells[i];
        if (!c.ok) continue;
        if (best == nullptr || c.result.r2 > best->result.r2 ||
            (c.result.r2 == best->result.r2 && c.radius_m < best->radius_m)) {
          best = &c;
        }
      }
      if (best != nullptr) best->best_radius = true;
    }
  }
  return result;
}

CorrelationMatrix cross_correlation_matrix(const Network& net, Measure measure, std::span<const Metric> metrics,
                                           double radius_m, const CentralityOptions& options) {
  if (metrics.empty()) throw InputError("no metrics to correlate");
  std::vector<std::vector<double>> series;
  series.reserve(metrics.size());
  for (const Metric& m : metrics) series.push_back(measure_values(analyze(net, m, radius_m, options), measure));

  const std::size_t k = metrics.size();
  CorrelationMatrix out;
  out.measure = measure;
  out.radius_m = radius_m;
  out.metrics.assign(metrics.begin(), metrics.end());
  out.cells.resize(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      CorrelationResult c = loglog_r2(series[i], series[j]);
      if (i == j) {
        c.r = 1.0;
        c.r2 = 1.0;
        c.p_value = 0.0;
      }
      out.cells[i * k + j] = c;
      out.cells[j * k + i] = c;
    }
  }
  return out;
}

}  // namespace volnet
