#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>

#include "volnet/centrality.hpp"
#include "volnet/errors.hpp"

namespace volnet::cli {

namespace fs = std::filesystem;

namespace {

// Output files staged next to their destination and renamed together once
// every table has been produced; removed if anything fails before that.
class StagedOutputs {
 public:
  explicit StagedOutputs(fs::path dir) : dir_(std::move(dir)) {}
  StagedOutputs(const StagedOutputs&) = delete;
  StagedOutputs& operator=(const StagedOutputs&) = delete;
  ~StagedOutputs() {
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path final_path = dir_ / name;
    const fs::path tmp = dir_ / (name + ".partial");
    files_.emplace_back(tmp, final_path);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    body(out);
    out.close();
    if (!out) throw InputError("failed writing '" + tmp.string() + "'");
  }

  void commit(std::ostream& log) {
    for (const auto& [tmp, final_path] : files_) {
      fs::rename(tmp, final_path);
      log << "wrote " << final_path.string() << "\n";
    }
    files_.clear();
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> files_;
};

Network load(const RunConfig& config, std::ostream& diagnostics) {
  Network net = config.format ? load_network(config.network_path, *config.format, config.snap_tolerance_m, &diagnostics)
                              : load_network(config.network_path, config.snap_tolerance_m, &diagnostics);
  const TagFilter& f = config.tag_filter;
  if (!f.include.empty() || !f.exclude.empty() || f.negate) {
    net = filter_network(net, f);
    diagnostics << "tag filter kept " << net.link_count() << " links\n";
  }
  return net;
}

CentralityOptions centrality_options(const RunConfig& config) {
  CentralityOptions options;
  options.routing.noise_floor_deg = config.noise_floor_deg;
  options.routing.radius_mode = config.radius_mode;
  options.threads = config.threads;
  return options;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback) {
  return given.empty() ? fallback : given;
}

std::vector<Metric> default_metrics() {
  return {Metric::angular(), Metric::euclidean(), Metric::hybrid(1.0 / 3.0), Metric::hybrid(0.5),
          Metric::hybrid(2.0 / 3.0)};
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw InputError("output directory '" + dir.string() + "' is not usable");
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.command == Command::validate) {
    const Network net = load(config, out);
    return kExitOk;
  }

  const Network net = load(config, err);
  const CentralityOptions options = centrality_options(config);
  prepare_output_dir(config.output_dir);
  StagedOutputs outputs(config.output_dir);

  switch (config.command) {
    case Command::analyze: {
      const auto metrics = or_default(config.metrics, {Metric::angular()});
      const auto radii = or_default(config.radii, {kUnboundedRadius});
      for (const Metric& metric : metrics) {
        for (double radius : radii) {
          const CentralityTable table = analyze(net, metric, radius, options);
          outputs.write(links_file_name(metric, radius),
                        [&](std::ostream& o) { write_links_csv(o, net, table, config.noise_floor_deg); });
        }
      }
      break;
    }
    case Command::sweep: {
      if (!config.observations_path) throw InputError("sweep needs --obs");
      const ObservationSet obs = load_observations(*config.observations_path);
      const auto measures = or_default(config.measures, {Measure::betweenness, Measure::closeness});
      const auto metrics = or_default(config.metrics, default_metrics());
      const auto radii = or_default(config.radii, {400.0, 500.0, 600.0});
      const SweepResult result = sweep(net, obs, measures, metrics, radii, options);
      for (const SweepCell& c : result.cells) {
        if (!c.ok) {
          err << "cell " << to_string(c.measure) << " " << c.metric.label() << " R" << format_radius(c.radius_m)
              << ": " << c.error << "\n";
        }
      }
      outputs.write("sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, result); });
      break;
    }
    case Command::xcorr: {
      if (config.radii.size() > 1) throw InputError("xcorr takes a single --radius");
      if (config.measures.size() > 1) throw InputError("xcorr takes a single --measure");
      const Measure measure = config.measures.empty() ? Measure::betweenness : config.measures.front();
      const double radius = config.radii.empty() ? 500.0 : config.radii.front();
      const auto metrics = or_default(config.metrics, default_metrics());
      const CorrelationMatrix matrix = cross_correlation_matrix(net, measure, metrics, radius, options);
      outputs.write("xcorr.csv", [&](std::ostream& o) { write_xcorr_csv(o, matrix); });
      outputs.write("xcorr_pairs.csv", [&](std::ostream& o) { write_xcorr_detail_csv(o, matrix); });
      break;
    }
    case Command::validate:
      break;
  }
  outputs.commit(err);
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

double parse_radius(std::string_view text) {
  if (text == "inf" || text == "unbounded") return kUnboundedRadius;
  std::string copy(text);
  char* end = nullptr;
  const double r = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(r) || r <= 0.0) {
    throw InputError("radius must be a positive number of meters or 'inf', got '" + copy + "'");
  }
  return r;
}

std::string links_file_name(const Metric& metric, double radius_m) {
  return "links_" + metric.label() + "_" + format_radius(radius_m) + ".csv";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return execute(config, out, err);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const AnalysisError& e) {
    err << "analysis error: " << e.what() << "\n";
    return kExitAnalysisError;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"volnet: volumetric pedestrian network centrality"};
  app.require_subcommand(1);

  std::string network;
  std::string format;
  std::string obs;
  std::vector<std::string> metrics;
  std::vector<std::string> radii;
  std::string radius_mode = "network";
  std::vector<std::string> measures;
  std::vector<std::string> include_tags;
  std::vector<std::string> exclude_tags;
  bool negate_tags = false;
  RunConfig config;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--network", network, "Network file (.geojson or .csv)")->required();
    sub->add_option("--format", format, "geojson or csv (default: from extension)");
    sub->add_option("--snap-tolerance", config.snap_tolerance_m, "Endpoint snapping distance in meters");
    sub->add_option("--include-tags", include_tags, "Keep links with any of these tags")->delimiter(',');
    sub->add_option("--exclude-tags", exclude_tags, "Drop links with any of these tags")->delimiter(',');
    sub->add_flag("--negate-tags", negate_tags, "Invert the tag filter");
  };
  auto add_analysis = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--metric", metrics, "topological, angular, euclidean, hybrid:<ang>:<euc> or hybrid:<a>")
        ->delimiter(',');
    sub->add_option("--radius", radii, "Radius in meters or 'inf'")->delimiter(',');
    sub->add_option("--radius-mode", radius_mode, "network or crowflight");
    sub->add_option("--measure", measures, "betweenness and/or closeness")->delimiter(',');
    sub->add_option("--noise-floor", config.noise_floor_deg, "Interior turns below this many degrees are ignored");
    sub->add_option("--out", config.output_dir, "Output directory");
    sub->add_option("--threads", config.threads, "Worker threads (0 = auto)");
  };

  CLI::App* validate = app.add_subcommand("validate", "Load a network and print the validation report");
  add_common(validate);
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Per-link centrality tables");
  add_analysis(analyze_cmd);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Correlate observed flows over measure x metric x radius");
  add_analysis(sweep_cmd);
  sweep_cmd->add_option("--obs", obs, "Observation CSV (link_id,flow[,period])")->required();
  CLI::App* xcorr_cmd = app.add_subcommand("xcorr", "Cross-metric correlation matrix");
  add_analysis(xcorr_cmd);

  std::vector<std::string> argv_store{"volnet"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*validate) config.command = Command::validate;
    if (*analyze_cmd) config.command = Command::analyze;
    if (*sweep_cmd) config.command = Command::sweep;
    if (*xcorr_cmd) config.command = Command::xcorr;
    config.network_path = network;
    if (format == "geojson") {
      config.format = NetworkFormat::geojson;
    } else if (format == "csv") {
      config.format = NetworkFormat::csv;
    } else if (!format.empty()) {
      throw InputError("unknown format '" + format + "'");
    }
    if (!obs.empty()) config.observations_path = obs;
    for (const auto& m : metrics) config.metrics.push_back(Metric::parse(m));
    for (const auto& r : radii) config.radii.push_back(parse_radius(r));
    if (radius_mode == "network") {
      config.radius_mode = RadiusMode::network;
    } else if (radius_mode == "crowflight") {
      config.radius_mode = RadiusMode::crowflight;
    } else {
      throw InputError("unknown radius mode '" + radius_mode + "'");
    }
    for (const auto& m : measures) config.measures.push_back(parse_measure(m));
    config.tag_filter.include.insert(include_tags.begin(), include_tags.end());
    config.tag_filter.exclude.insert(exclude_tags.begin(), exclude_tags.end());
    config.tag_filter.negate = negate_tags;
    if (!(config.snap_tolerance_m >= 0.0)) throw InputError("snap tolerance must be nonnegative");
    if (!(config.noise_floor_deg >= 0.0)) throw InputError("noise floor must be nonnegative");
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  return run(config, out, err);
}

}  // namespace volnet::cli
