#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "volnet/centrality.hpp"
#include "volnet/network.hpp"
#include "volnet/stats.hpp"

namespace volnet {

enum class NetworkFormat { geojson, csv };

// ".geojson"/".json" or ".csv"; throws InputError for anything else.
NetworkFormat format_from_path(const std::filesystem::path& path);

// FeatureCollection of LineString features. Properties: id (string,
// required), tags (array of strings), angular_override_deg, weight. Two
// element positions get z = 0 and one warning.
std::vector<Link> read_links_geojson(std::istream& in, std::ostream* warnings = nullptr);

// Rows `link_id,seq,x,y,z` after a header; vertices ordered by seq. A
// header without z reads a flat network with one warning.
std::vector<Link> read_links_csv(std::istream& in, std::ostream* warnings = nullptr);

// Reads, builds and validates. Warnings and the validation report go to
// `diagnostics` when given.
Network load_network(const std::filesystem::path& path, NetworkFormat format,
                     double snap_tolerance_m = kDefaultSnapTolerance, std::ostream* diagnostics = nullptr);
Network load_network(const std::filesystem::path& path, double snap_tolerance_m = kDefaultSnapTolerance,
                     std::ostream* diagnostics = nullptr);

// Coordinates are written with round-trip precision.
void write_geojson(const Network& net, std::ostream& out);

// `link_id,flow[,period]`. Several rows for one link are averaged.
ObservationSet read_observations_csv(std::istream& in);
ObservationSet load_observations(const std::filesystem::path& path);

// Decimal point, 9 significant digits.
std::string format_number(double v);
std::string format_radius(double radius_m);

void write_links_csv(std::ostream& out, const Network& net, const CentralityTable& table,
                     double noise_floor_deg = kDefaultNoiseFloorDeg);
void write_sweep_csv(std::ostream& out, const SweepResult& result);
// Square r2 matrix, Table-2 layout.
void write_xcorr_csv(std::ostream& out, const CorrelationMatrix& matrix);
// One row per metric pair with p-value and stars.
void write_xcorr_detail_csv(std::ostream& out, const CorrelationMatrix& matrix);

}  // namespace volnet
