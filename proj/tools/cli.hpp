#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "volnet/io.hpp"
#include "volnet/metric.hpp"
#include "volnet/network.hpp"
#include "volnet/routing.hpp"
#include "volnet/stats.hpp"

namespace volnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitAnalysisError = 3;

enum class Command { validate, analyze, sweep, xcorr };

struct RunConfig {
  Command command = Command::analyze;
  std::filesystem::path network_path;
  // Inferred from the extension when empty.
  std::optional<NetworkFormat> format;
  std::optional<std::filesystem::path> observations_path;
  std::vector<Metric> metrics;
  std::vector<double> radii;
  RadiusMode radius_mode = RadiusMode::network;
  std::vector<Measure> measures;
  TagFilter tag_filter;
  double noise_floor_deg = kDefaultNoiseFloorDeg;
  double snap_tolerance_m = kDefaultSnapTolerance;
  std::filesystem::path output_dir = ".";
  // 0 = VOLNET_THREADS or hardware concurrency.
  unsigned threads = 0;
};

// "inf" or a positive number of meters.
double parse_radius(std::string_view text);

// Output file name of a per-link table.
std::string links_file_name(const Metric& metric, double radius_m);

// Executes a parsed configuration. Output files are written only when the
// whole command succeeds. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv-style arguments (without the program name) and runs.
int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volnet::cli
