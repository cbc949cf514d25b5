#include "volnet/metric.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "volnet/errors.hpp"

namespace volnet {

namespace {

bool parse_non_negative_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_decimal(std::string_view s, double& out) {
  if (s.empty()) return false;
  std::string copy(s);
  char* end = nullptr;
  out = std::strtod(copy.c_str(), &end);
  return end == copy.c_str() + copy.size() && std::isfinite(out);
}

}  // namespace

Metric Metric::hybrid(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw InputError("hybrid weight must lie in [0, 1]");
  return Metric(MetricKind::hybrid, a);
}

Metric Metric::parse(std::string_view text) {
  if (text == "topological") return topological();
  if (text == "angular") return angular();
  if (text == "euclidean") return euclidean();
  constexpr std::string_view prefix = "hybrid:";
  if (text.substr(0, prefix.size()) == prefix) return hybrid(parse_ratio(text.substr(prefix.size())));
  throw InputError("unknown metric '" + std::string(text) + "'");
}

std::string Metric::label() const {
  switch (kind_) {
    case MetricKind::topological:
      return "topological";
    case MetricKind::angular:
      return "angular";
    case MetricKind::euclidean:
      return "euclidean";
    case MetricKind::hybrid: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "hybrid-%.9g", a_);
      return buf;
    }
  }
  return "unknown";
}

double parse_ratio(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    double a = 0.0;
    if (!parse_decimal(text, a) || a < 0.0 || a > 1.0) {
      throw InputError("malformed ratio '" + std::string(text) + "'");
    }
    return a;
  }
  long long ang = 0;
  long long euc = 0;
  if (!parse_non_negative_int(text.substr(0, colon), ang) || !parse_non_negative_int(text.substr(colon + 1), euc)) {
    throw InputError("malformed ratio '" + std::string(text) + "'");
  }
  if (ang == 0 && euc == 0) throw InputError("ratio 0:0 is undefined");
  return static_cast<double>(ang) / static_cast<double>(ang + euc);
}

double hybrid_link_cost(const Metric& m, const LinkCosts& c) {
  switch (m.kind()) {
    case MetricKind::topological:
      return 1.0;
    case MetricKind::angular:
      return c.ang_deg;
    case MetricKind::euclidean:
      return c.euc_m;
    case MetricKind::hybrid:
      return m.a() * c.ang_deg + (1.0 - m.a()) * c.euc_m;
  }
  return 0.0;
}

double hybrid_link_cost(const Metric& m, const HalfCosts& c) {
  switch (m.kind()) {
    case MetricKind::topological:
      return 0.5;
    case MetricKind::angular:
      return c.ang_deg;
    case MetricKind::euclidean:
      return c.euc_m;
    case MetricKind::hybrid:
      return m.a() * c.ang_deg + (1.0 - m.a()) * c.euc_m;
  }
  return 0.0;
}

double hybrid_node_cost(const Metric& m, double turn_deg) {
  if (!(turn_deg >= 0.0 && turn_deg <= 180.0)) throw InputError("junction turn must lie in [0, 180] degrees");
  switch (m.kind()) {
    case MetricKind::topological:
    case MetricKind::euclidean:
      return 0.0;
    case MetricKind::angular:
      return turn_deg;
    case MetricKind::hybrid:
      return m.a() * turn_deg;
  }
  return 0.0;
}

}  // namespace volnet
