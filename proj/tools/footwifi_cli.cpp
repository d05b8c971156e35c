// footwifi: simulate datasets, run the filters, evaluate and export plot data.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "footwifi/config.hpp"
#include "footwifi/dataset.hpp"
#include "footwifi/metrics.hpp"
#include "footwifi/pipeline.hpp"
#include "footwifi/plot_data.hpp"
#include "footwifi/simulator.hpp"

namespace fs = std::filesystem;
using namespace footwifi;

namespace {

constexpr const char* kSeedEnv = "FOOTWIFI_SEED";

KeyValueList gather(const std::string& config_file, const std::vector<std::string>& sets) {
  KeyValueList kv;
  if (!config_file.empty()) kv = KeyValueList::load(config_file);
  for (const auto& s : sets) kv.add_assignment(s);
  return kv;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::vector<Position> truth_positions(const Dataset& data) {
  std::vector<Position> out;
  for (const auto& t : *data.truth) out.push_back(t.position);
  return out;
}

int cmd_simulate(const std::string& config_file, const std::vector<std::string>& sets,
                 const fs::path& out_dir) {
  ScenarioConfig sc;
  sc.apply(gather(config_file, sets));
  if (const char* env = std::getenv(kSeedEnv)) sc.seed = std::stoull(env);

  const auto polyline = sim::rectangle(sc.origin, sc.width, sc.height);
  const auto truth = sim::generate_path(polyline, sc.laps, sc.step_length, sc.cadence);
  const auto env = sc.environment();

  Dataset data;
  data.steps = sim::corrupt_steps(truth, sc.imu, sc.seed);
  data.scans = sim::simulate_rss(truth, env, sc.scan_period, sc.seed + 1, sc.scan_offset);
  std::vector<TruthSample> samples;
  for (std::size_t k = 0; k < truth.positions.size(); ++k) {
    samples.push_back({truth.times[k], truth.positions[k]});
  }
  data.truth = std::move(samples);
  save_dataset(data, out_dir);

  // Run config for this dataset: start pose and one window per re-visit lap.
  RunConfig rc;
  rc.start = truth.positions.front();
  rc.start_heading = truth.headings.front();
  rc.windows = sc.revisit_windows(truth.positions.size());
  std::ostringstream run_cfg;
  run_cfg << std::setprecision(17);
  run_cfg << "# generated by footwifi simulate (seed " << sc.seed << ")\n"
          << "start_x=" << rc.start.x << "\nstart_y=" << rc.start.y
          << "\nstart_heading=" << rc.start_heading.theta << "\nwindows=";
  for (std::size_t i = 0; i < rc.windows.size(); ++i) {
    run_cfg << (i ? "," : "") << format_window(rc.windows[i]);
  }
  run_cfg << '\n';
  write_file(out_dir / "run.cfg", run_cfg.str());

  std::ostringstream aps;
  aps << std::setprecision(17);
  for (const auto& ap : env.aps) {
    aps << "ap = " << ap.id << ' ' << ap.position.x << ' ' << ap.position.y << ' '
        << ap.tx_power_dbm << ' ' << ap.path_loss_exponent << ' ' << ap.shadowing_sigma << ' '
        << ap.detection_floor << '\n';
  }
  write_file(out_dir / "environment.cfg", aps.str());

  std::cout << "wrote " << data.steps.size() << " steps, " << data.scans.size()
            << " scans, " << truth.positions.size() << " truth records to " << out_dir << '\n';
  return 0;
}

int cmd_run(const fs::path& dataset_dir, const std::string& config_file,
            const std::vector<std::string>& sets, const std::string& method_name,
            const fs::path& out) {
  RunConfig rc;
  rc.apply(gather(config_file, sets));
  if (const char* env = std::getenv(kSeedEnv)) rc.filter.rng_seed = std::stoull(env);

  const auto data = load_dataset(dataset_dir);
  for (const auto& w : data.warnings) std::cerr << "warning: " << w << '\n';

  const auto report = run_pipeline(data, rc, parse_method(method_name));
  write_file(out, report_to_json(report));
  std::cout << to_string(report.method) << ": " << report.trajectory.size() - 1
            << " epochs, seed " << report.seed << ", engine " << report.engine_seconds
            << " s -> " << out << '\n';
  return 0;
}

int cmd_eval(const std::vector<std::string>& report_files, const fs::path& dataset_dir,
             const std::vector<std::string>& window_args) {
  const auto data = load_dataset(dataset_dir);
  if (!data.truth) throw std::runtime_error("dataset has no truth.jsonl");
  const auto truth = truth_positions(data);

  std::cout << std::left << std::setw(10) << "method" << std::setw(14) << "window"
            << "mean_error_m\n";
  std::cout << std::fixed << std::setprecision(3);
  for (const auto& file : report_files) {
    const auto report = report_from_json(read_file(file));
    std::vector<EpochWindow> windows;
    for (const auto& w : window_args) windows.push_back(parse_window(w));
    if (windows.empty()) windows = report.windows;
    windows.insert(windows.begin(), EpochWindow{0, report.trajectory.size()});
    const auto means = compute_metrics(report.trajectory, truth, windows);
    for (std::size_t i = 0; i < windows.size(); ++i) {
      std::cout << std::setw(10) << to_string(report.method) << std::setw(14)
                << (i == 0 ? std::string("all") : format_window(windows[i])) << means[i]
                << '\n';
    }
  }
  return 0;
}

int cmd_plot_data(const std::vector<std::string>& report_files, const fs::path& out_dir,
                  const std::string& map_dataset, const std::string& map_ap,
                  double resolution, const std::string& config_file,
                  const std::vector<std::string>& sets) {
  std::vector<RunReport> reports;
  for (const auto& f : report_files) reports.push_back(report_from_json(read_file(f)));
  auto written = emit_plot_data(reports, out_dir);

  if (!map_dataset.empty()) {
    if (map_ap.empty()) throw std::invalid_argument("--ap is required with --gp-map");
    RunConfig rc;
    rc.apply(gather(config_file, sets));
    const auto data = load_dataset(map_dataset);
    const auto positions = data.truth ? truth_positions(data)
                                      : dead_reckon(rc.start, rc.start_heading, data.steps);
    const auto train = map_training_set(data, positions, map_ap);
    if (train.empty()) throw std::runtime_error("no readings of " + map_ap + " in dataset");
    double mean = 0.0;
    for (const auto& s : train) mean += s.rss_dbm;
    mean /= static_cast<double>(train.size());
    const auto file = out_dir / ("gp_map_" + map_ap + ".csv");
    emit_gp_map(train, rc.gp, ConstantMean{mean}, grid_around(train, 15.0, resolution), file);
    written.push_back(file);
  }
  for (const auto& f : written) std::cout << f.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"footwifi: foot-mounted IMU + WiFi loop-closure particle filter"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> sets;

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  fs::path sim_out;
  simulate->add_option("--config", config_file, "Scenario key=value file");
  simulate->add_option("--set", sets, "Override a scenario key (key=value)");
  simulate->add_option("--out", sim_out, "Dataset directory to write")->required();

  auto* run = app.add_subcommand("run", "Run one method over a dataset");
  fs::path run_dataset;
  fs::path run_out;
  std::string method = "proposed";
  run->add_option("--dataset", run_dataset, "Dataset directory")->required();
  run->add_option("--config", config_file, "Run key=value file");
  run->add_option("--set", sets, "Override a run key (key=value)");
  run->add_option("--method", method, "raw | proposed | gp")
      ->check(CLI::IsMember({"raw", "proposed", "gp"}));
  run->add_option("--out", run_out, "Report file (JSON)")->required();

  auto* eval = app.add_subcommand("eval", "Mean error tables from reports and ground truth");
  std::vector<std::string> eval_reports;
  fs::path eval_dataset;
  std::vector<std::string> eval_windows;
  eval->add_option("--report", eval_reports, "Report file(s)")->required();
  eval->add_option("--dataset", eval_dataset, "Dataset directory with truth.jsonl")->required();
  eval->add_option("--window", eval_windows, "Epoch window begin:end (default: from report)");

  auto* plot = app.add_subcommand("plot-data", "Write CSVs for plotting");
  std::vector<std::string> plot_reports;
  fs::path plot_out;
  std::string map_dataset;
  std::string map_ap;
  double resolution = 1.0;
  plot->add_option("--report", plot_reports, "Report file(s)");
  plot->add_option("--out", plot_out, "Output directory")->required();
  plot->add_option("--gp-map", map_dataset, "Dataset to build a GP RSS map from");
  plot->add_option("--ap", map_ap, "AP id for the GP map");
  plot->add_option("--resolution", resolution, "GP map grid spacing in meters");
  plot->add_option("--config", config_file, "Run key=value file (GP hyperparameters)");
  plot->add_option("--set", sets, "Override a run key (key=value)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config_file, sets, sim_out);
    if (run->parsed()) return cmd_run(run_dataset, config_file, sets, method, run_out);
    if (eval->parsed()) return cmd_eval(eval_reports, eval_dataset, eval_windows);
    if (plot->parsed()) {
      return cmd_plot_data(plot_reports, plot_out, map_dataset, map_ap, resolution, config_file,
                           sets);
    }
  } catch (const std::exception& e) {
    std::cerr << "footwifi: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
