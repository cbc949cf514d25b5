#include "volnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "volnet/errors.hpp"
#include "volnet/geometry.hpp"

namespace volnet {

namespace {

using nlohmann::json;

// Exact consecutive duplicates are common in exported GIS data.
std::vector<Vec3> drop_repeated(std::vector<Vec3> v) {
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Minimal RFC 4180 field splitting (quotes, doubled quotes).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

double parse_double(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError(where + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) throw InputError(where + ": '" + text + "' is not a finite number");
  return v;
}

long long parse_integer(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw InputError(where + ": '" + text + "' is not an integer");
  }
  if (used != text.size()) throw InputError(where + ": '" + text + "' is not an integer");
  return v;
}

std::map<std::string, std::size_t> header_columns(const std::vector<std::string>& header) {
  std::map<std::string, std::size_t> cols;
  for (std::size_t i = 0; i < header.size(); ++i) cols[header[i]] = i;
  return cols;
}

}  // namespace

NetworkFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".geojson" || ext == ".json") return NetworkFormat::geojson;
  if (ext == ".csv") return NetworkFormat::csv;
  throw InputError("cannot infer network format from '" + path.string() + "'");
}

std::vector<Link> read_links_geojson(std::istream& in, std::ostream* warnings) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("GeoJSON parse error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw InputError("GeoJSON root must be a FeatureCollection with a features array");
  }

  std::vector<Link> links;
  bool warned_2d = false;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string where = "feature " + std::to_string(i);
    const json& f = features[i];
    if (!f.is_object()) throw InputError(where + ": not an object");
    const json props = f.contains("properties") && f["properties"].is_object() ? f["properties"] : json::object();

    std::string id;
    if (!props.contains("id")) throw InputError(where + ": missing 'id' property");
    if (props["id"].is_string()) {
      id = props["id"].get<std::string>();
    } else if (props["id"].is_number_integer()) {
      id = std::to_string(props["id"].get<long long>());
    } else {
      throw InputError(where + ": 'id' must be a string");
    }
    if (id.empty()) throw InputError(where + ": empty 'id'");

    if (!f.contains("geometry") || !f["geometry"].is_object() ||
        f["geometry"].value("type", "") != "LineString") {
      throw InputError(where + " (" + id + "): geometry must be a LineString");
    }
    const json& coords = f["geometry"]["coordinates"];
    if (!coords.is_array()) throw InputError(where + " (" + id + "): coordinates must be an array");
    std::vector<Vec3> vertices;
    for (const json& pos : coords) {
      if (!pos.is_array() || pos.size() < 2 || pos.size() > 3) {
        throw InputError(where + " (" + id + "): positions must have 2 or 3 numbers");
      }
      for (const json& c : pos) {
        if (!c.is_number()) throw InputError(where + " (" + id + "): non-numeric coordinate");
      }
      Vec3 v{pos[0].get<double>(), pos[1].get<double>(), 0.0};
      if (pos.size() == 3) {
        v.z = pos[2].get<double>();
      } else if (!warned_2d) {
        warned_2d = true;
        if (warnings) *warnings << "warning: 2D coordinates read with z = 0 (from " << where << ")\n";
      }
      vertices.push_back(v);
    }
    std::optional<Polyline3> geometry;
    try {
      geometry.emplace(drop_repeated(std::move(vertices)));
    } catch (const InputError& e) {
      throw InputError(where + " (" + id + "): " + e.what());
    }

    Link link{id, *geometry, {}, std::nullopt, 1.0};
    if (props.contains("tags") && !props["tags"].is_null()) {
      if (!props["tags"].is_array()) throw InputError(where + " (" + id + "): 'tags' must be an array");
      for (const json& t : props["tags"]) {
        if (!t.is_string()) throw InputError(where + " (" + id + "): tags must be strings");
        link.tags.insert(t.get<std::string>());
      }
    }
    if (props.contains("angular_override_deg") && !props["angular_override_deg"].is_null()) {
      if (!props["angular_override_deg"].is_number()) {
        throw InputError(where + " (" + id + "): 'angular_override_deg' must be a number");
      }
      link.angular_override_deg = props["angular_override_deg"].get<double>();
    }
    if (props.contains("weight") && !props["weight"].is_null()) {
      if (!props["weight"].is_number()) throw InputError(where + " (" + id + "): 'weight' must be a number");
      link.weight = props["weight"].get<double>();
    }
    links.push_back(std::move(link));
  }
  return links;
}

std::vector<Link> read_links_csv(std::istream& in, std::ostream* warnings) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV network is empty");
  const auto cols = header_columns(split_csv_line(line));
  for (const char* required : {"link_id", "seq", "x", "y"}) {
    if (!cols.count(required)) throw InputError(std::string("CSV network header lacks '") + required + "'");
  }
  const bool has_z = cols.count("z") > 0;
  if (!has_z && warnings) *warnings << "warning: CSV network has no z column, reading z = 0\n";

  std::map<std::string, std::vector<std::pair<long long, Vec3>>> rows;
  std::vector<std::string> order;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto f = split_csv_line(line);
    auto field = [&](const char* name) -> const std::string& {
      const std::size_t c = cols.at(name);
      if (c >= f.size()) throw InputError(where + ": missing '" + name + "'");
      return f[c];
    };
    const std::string& id = field("link_id");
    if (id.empty()) throw InputError(where + ": empty link_id");
    Vec3 v{parse_double(field("x"), where), parse_double(field("y"), where),
           has_z ? parse_double(field("z"), where) : 0.0};
    auto& chain = rows[id];
    if (chain.empty()) order.push_back(id);
    chain.emplace_back(parse_integer(field("seq"), where), v);
  }

  std::vector<Link> links;
  for (const auto& id : order) {
    auto& chain = rows[id];
    std::stable_sort(chain.begin(), chain.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < chain.size(); ++i) {
      if (chain[i].first == chain[i - 1].first) throw InputError("link '" + id + "': repeated seq value");
    }
    std::vector<Vec3> vertices;
    for (const auto& [seq, v] : chain) vertices.push_back(v);
    try {
      links.push_back(Link{id, Polyline3(drop_repeated(std::move(vertices))), {}, std::nullopt, 1.0});
    } catch (const InputError& e) {
      throw InputError("link '" + id + "': " + e.what());
    }
  }
  return links;
}

Network load_network(const std::filesystem::path& path, NetworkFormat format, double snap_tolerance_m,
                     std::ostream* diagnostics) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open network file '" + path.string() + "'");
  auto links = format == NetworkFormat::geojson ? read_links_geojson(in, diagnostics) : read_links_csv(in, diagnostics);
  if (links.empty()) throw InputError("network file '" + path.string() + "' has no links");
  Network net = build_network(std::move(links), snap_tolerance_m);
  if (diagnostics) print_report(*diagnostics, net, validate_network(net));
  return net;
}

Network load_network(const std::filesystem::path& path, double snap_tolerance_m, std::ostream* diagnostics) {
  return load_network(path, format_from_path(path), snap_tolerance_m, diagnostics);
}

void write_geojson(const Network& net, std::ostream& out) {
  json features = json::array();
  for (const Link& link : net.links()) {
    json coords = json::array();
    for (const Vec3& v : link.geometry.vertices()) coords.push_back({v.x, v.y, v.z});
    json props = {{"id", link.id}, {"tags", link.tags}, {"weight", link.weight}};
    if (link.angular_override_deg) props["angular_override_deg"] = *link.angular_override_deg;
    features.push_back({{"type", "Feature"},
                        {"properties", std::move(props)},
                        {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}}});
  }
  json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  out << doc.dump() << "\n";
}

ObservationSet read_observations_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("observation file is empty");
  const auto cols = header_columns(split_csv_line(line));
  if (!cols.count("link_id") || !cols.count("flow")) throw InputError("observation header needs link_id,flow");
  const bool has_period = cols.count("period") > 0;

  std::map<std::string, std::pair<double, std::size_t>> sums;
  std::set<std::string> periods;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = "observations line " + std::to_string(line_no);
    const auto f = split_csv_line(line);
    if (f.size() <= std::max(cols.at("link_id"), cols.at("flow"))) throw InputError(where + ": too few fields");
    const double flow = parse_double(f[cols.at("flow")], where);
    if (flow < 0.0) throw InputError(where + ": negative flow");
    auto& s = sums[f[cols.at("link_id")]];
    s.first += flow;
    s.second += 1;
    if (has_period && cols.at("period") < f.size()) periods.insert(f[cols.at("period")]);
  }
  ObservationSet obs;
  for (const auto& [id, s] : sums) obs.flows[id] = s.first / static_cast<double>(s.second);
  if (periods.size() == 1) {
    obs.period_label = *periods.begin();
  } else if (periods.size() > 1) {
    obs.period_label = "mean of " + std::to_string(periods.size()) + " periods";
  }
  return obs;
}

ObservationSet load_observations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open observation file '" + path.string() + "'");
  return read_observations_csv(in);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string format_radius(double radius_m) { return std::isinf(radius_m) ? "inf" : format_number(radius_m); }

void write_links_csv(std::ostream& out, const Network& net, const CentralityTable& table, double noise_floor_deg) {
  const auto conn = connectivity(net);
  out << "link_id,euc_m,ang_deg,connectivity,reach_count,reach_weight,total_cost,mean_cost,inverse_mean,"
         "closeness_defined,betweenness\n";
  for (LinkIndex l = 0; l < net.link_count(); ++l) {
    const LinkCosts c = link_costs(net.link(l), noise_floor_deg);
    const ClosenessRow& row = table.closeness[l];
    out << csv_field(net.link(l).id) << ',' << format_number(c.euc_m) << ',' << format_number(c.ang_deg) << ','
        << conn[l] << ',' << row.reach_count << ',' << format_number(row.reach_weight) << ','
        << format_number(row.total_geodesic_cost) << ',' << format_number(row.mean_geodesic_cost) << ','
        << format_number(row.inverse_mean) << ',' << (row.defined ? 1 : 0) << ','
        << format_number(table.betweenness[l].value) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "measure,metric,radius,r2,p_value,stars,n_used,n_dropped,best_radius,status\n";
  for (const SweepCell& c : result.cells) {
    out << to_string(c.measure) << ',' << c.metric.label() << ',' << format_radius(c.radius_m) << ',';
    if (c.ok) {
      out << format_number(c.result.r2) << ',' << format_number(c.result.p_value) << ','
          << significance_stars(c.result.p_value);
    } else {
      out << ",,";
    }
    out << ',' << c.result.n_used << ',' << c.result.n_dropped << ',' << (c.best_radius ? 1 : 0) << ','
        << (c.ok ? std::string("ok") : csv_field("error: " + c.error)) << '\n';
  }
}

void write_xcorr_csv(std::ostream& out, const CorrelationMatrix& m) {
  out << "metric";
  for (const Metric& metric : m.metrics) out << ',' << metric.label();
  out << '\n';
  for (std::size_t i = 0; i < m.metrics.size(); ++i) {
    out << m.metrics[i].label();
    for (std::size_t j = 0; j < m.metrics.size(); ++j) out << ',' << format_number(m.at(i, j).r2);
    out << '\n';
  }
}

void write_xcorr_detail_csv(std::ostream& out, const CorrelationMatrix& m) {
  out << "metric_a,metric_b,r2,p_value,stars,n_used,n_dropped\n";
  for (std::size_t i = 0; i < m.metrics.size(); ++i) {
    for (std::size_t j = i + 1; j < m.metrics.size(); ++j) {
      const auto& c = m.at(i, j);
      out << m.metrics[i].label() << ',' << m.metrics[j].label() << ',' << format_number(c.r2) << ','
          << format_number(c.p_value) << ',' << significance_stars(c.p_value) << ',' << c.n_used << ','
          << c.n_dropped << '\n';
    }
  }
}

}  // namespace volnet
