#include "footwifi/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "footwifi/gp_baseline.hpp"
#include "footwifi/metrics.hpp"
#include "footwifi/particle_filter.hpp"
#include "footwifi/sync.hpp"
#include "json.hpp"

namespace footwifi {

namespace {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-AP running mean of everything heard so far; the GP baseline's
// constant prior mean, since AP positions are unknown.
class RunningApMeans {
 public:
  explicit RunningApMeans(double fallback) : fallback_(fallback) {}

  std::map<ApId, GpMeanModel> models_for(const RssVector& scan) const {
    std::map<ApId, GpMeanModel> out;
    for (const auto& [ap, rss] : scan.readings) {
      auto it = sums_.find(ap);
      const double c = it == sums_.end() ? fallback_ : it->second.first / it->second.second;
      out.emplace(ap, ConstantMean{c});
    }
    return out;
  }

  void add(const RssVector& scan) {
    for (const auto& [ap, rss] : scan.readings) {
      auto& [sum, count] = sums_[ap];
      sum += rss;
      count += 1.0;
    }
  }

 private:
  double fallback_;
  std::map<ApId, std::pair<double, double>> sums_;
};

ojson positions_json(const std::vector<Position>& ps) {
  ojson arr = ojson::array();
  for (const auto& p : ps) arr.push_back(ojson::array({p.x, p.y}));
  return arr;
}

std::vector<Position> positions_from(const ojson& arr) {
  std::vector<Position> out;
  out.reserve(arr.size());
  for (const auto& p : arr) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::raw:
      return "raw";
    case Method::proposed:
      return "proposed";
    case Method::gp:
      return "gp";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "raw") return Method::raw;
  if (name == "proposed") return Method::proposed;
  if (name == "gp") return Method::gp;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected raw, proposed or gp)");
}

std::vector<Position> dead_reckon(Position start, Heading heading,
                                  std::span<const StepMeasurement> steps) {
  std::vector<Position> out;
  out.reserve(steps.size() + 1);
  out.push_back(start);
  double theta = heading.theta;
  Position p = start;
  for (const auto& s : steps) {
    theta += s.delta_theta;
    p.x += s.delta_l * std::cos(theta);
    p.y += s.delta_l * std::sin(theta);
    out.push_back(p);
  }
  return out;
}

RunReport run_pipeline(const Dataset& data, const RunConfig& config, Method method) {
  RunReport report;
  report.method = method;
  report.seed = config.filter.rng_seed;
  report.config_text = config.to_text();
  report.windows = config.windows;

  const auto epochs = align_observations(data.steps, data.scans);
  report.epoch_seconds.reserve(epochs.size());

  const auto engine_start = Clock::now();
  if (method == Method::raw) {
    report.trajectory.push_back(config.start);
    // Same integration as dead_reckon(), split per epoch for timing.
    double theta = config.start_heading.theta;
    Position p = config.start;
    for (const auto& e : epochs) {
      const auto t0 = Clock::now();
      theta += e.step.delta_theta;
      p.x += e.step.delta_l * std::cos(theta);
      p.y += e.step.delta_l * std::sin(theta);
      report.trajectory.push_back(p);
      report.epoch_seconds.push_back(seconds_since(t0));
    }
    report.best_trajectory = report.trajectory;
  } else {
    auto ens = Ensemble::initialize(config.start, config.start_heading, config.filter);
    report.trajectory.push_back(config.start);
    RunningApMeans ap_means(config.gp_default_mean_dbm);
    for (const auto& e : epochs) {
      const auto t0 = Clock::now();
      if (method == Method::proposed) {
        if (ens.step(e) > 0) ++report.closure_epochs;
      } else {
        ens.propagate(e);
        if (e.rss && !e.rss->empty()) {
          gp_update_weights(ens, *e.rss, config.gp, ap_means.models_for(*e.rss));
          ap_means.add(*e.rss);
          ++report.closure_epochs;
        }
        ens.maybe_resample();
      }
      report.trajectory.push_back(ens.estimate().first);
      report.epoch_seconds.push_back(seconds_since(t0));
    }
    report.best_trajectory = ens.estimate().second->trajectory;
    report.resample_count = ens.resample_count();
    report.degeneracy_events = ens.degeneracy_events();
  }
  report.engine_seconds = seconds_since(engine_start);

  if (data.truth) {
    std::vector<Position> truth;
    truth.reserve(data.truth->size());
    for (const auto& t : *data.truth) truth.push_back(t.position);
    report.errors = epoch_errors(report.trajectory, truth);
    for (const auto& w : report.windows) {
      report.window_mean_errors.push_back(window_mean(*report.errors, w));
    }
  }
  return report;
}

std::string report_to_json(const RunReport& r) {
  ojson j;
  j["method"] = std::string(to_string(r.method));
  j["seed"] = r.seed;
  j["config"] = r.config_text;
  j["trajectory"] = positions_json(r.trajectory);
  j["best_trajectory"] = positions_json(r.best_trajectory);
  j["errors"] = r.errors ? ojson(*r.errors) : ojson(nullptr);
  ojson windows = ojson::array();
  for (std::size_t i = 0; i < r.windows.size(); ++i) {
    ojson w;
    w["begin"] = r.windows[i].begin;
    w["end"] = r.windows[i].end;
    w["mean_error"] =
        i < r.window_mean_errors.size() ? ojson(r.window_mean_errors[i]) : ojson(nullptr);
    windows.push_back(std::move(w));
  }
  j["windows"] = std::move(windows);
  j["closure_epochs"] = r.closure_epochs;
  j["resample_count"] = r.resample_count;
  j["degeneracy_events"] = r.degeneracy_events;
  j["engine_seconds"] = r.engine_seconds;
  j["epoch_seconds"] = r.epoch_seconds;
  return j.dump(1);
}

RunReport report_from_json(const std::string& text) {
  RunReport r;
  try {
    const auto j = ojson::parse(text);
    r.method = parse_method(j.at("method").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_text = j.at("config").get<std::string>();
    r.trajectory = positions_from(j.at("trajectory"));
    r.best_trajectory = positions_from(j.at("best_trajectory"));
    if (!j.at("errors").is_null()) r.errors = j.at("errors").get<std::vector<double>>();
    for (const auto& w : j.at("windows")) {
      r.windows.push_back({w.at("begin").get<std::size_t>(), w.at("end").get<std::size_t>()});
      if (!w.at("mean_error").is_null()) {
        r.window_mean_errors.push_back(w.at("mean_error").get<double>());
      }
    }
    r.closure_epochs = j.at("closure_epochs").get<std::size_t>();
    r.resample_count = j.at("resample_count").get<std::size_t>();
    r.degeneracy_events = j.at("degeneracy_events").get<std::size_t>();
    r.engine_seconds = j.at("engine_seconds").get<double>();
    r.epoch_seconds = j.at("epoch_seconds").get<std::vector<double>>();
  } catch (const ojson::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
  return r;
}

bool same_results(const RunReport& a, const RunReport& b) {
  return a.method == b.method && a.seed == b.seed && a.config_text == b.config_text &&
         a.trajectory == b.trajectory && a.best_trajectory == b.best_trajectory &&
         a.errors == b.errors && a.windows == b.windows &&
         a.window_mean_errors == b.window_mean_errors && a.closure_epochs == b.closure_epochs &&
         a.resample_count == b.resample_count && a.degeneracy_events == b.degeneracy_events;
}

}  // namespace footwifi
