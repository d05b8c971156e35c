#include "footwifi/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace footwifi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

using Setter = std::function<void(const std::string&, const std::string&)>;

void dispatch(const std::map<std::string, Setter>& table, const KeyValueList& kv,
              const char* what) {
  for (const auto& [key, value] : kv.entries) {
    auto it = table.find(key);
    if (it == table.end()) {
      throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
    }
    it->second(key, value);
  }
}

template <typename T>
Setter real(T& field) {
  return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
}

template <typename T>
Setter integer(T& field) {
  return [&field](const std::string& k, const std::string& v) {
    field = static_cast<T>(to_u64(k, v));
  };
}

}  // namespace

EpochWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("window must look like begin:end, got '" + text + "'");
  }
  EpochWindow w{to_u64("window", trim(text.substr(0, colon))),
                to_u64("window", trim(text.substr(colon + 1)))};
  if (w.end <= w.begin) throw std::invalid_argument("window end must exceed begin: " + text);
  return w;
}

std::string format_window(const EpochWindow& w) {
  return std::to_string(w.begin) + ":" + std::to_string(w.end);
}

KeyValueList KeyValueList::parse(const std::string& text, const std::string& origin) {
  KeyValueList out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected key=value, got '" + line + "'");
    }
    out.entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

KeyValueList KeyValueList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void KeyValueList::add_assignment(const std::string& assignment) {
  auto parsed = parse(assignment, "--set");
  if (parsed.entries.size() != 1) {
    throw std::invalid_argument("expected a single key=value, got '" + assignment + "'");
  }
  entries.push_back(std::move(parsed.entries.front()));
}

void RunConfig::apply(const KeyValueList& kv) {
  const std::map<std::string, Setter> table{
      {"n_particles", integer(filter.n_particles)},
      {"sigma_step", real(filter.sigma_step)},
      {"sigma_heading", real(filter.sigma_heading)},
      {"d_rss_thres", real(filter.d_rss_thres)},
      {"d_pos_thres", real(filter.d_pos_thres)},
      {"min_gap_time", real(filter.min_gap_time)},
      {"min_gap_dist", real(filter.min_gap_dist)},
      {"penalty_factor", real(filter.penalty_factor)},
      {"missing_fill_dbm", real(filter.missing_fill_dbm)},
      {"rng_seed", integer(filter.rng_seed)},
      {"ess_fraction", real(filter.ess_fraction)},
      {"threads", integer(filter.threads)},
      {"signal_variance", real(gp.signal_variance)},
      {"length_scale", real(gp.length_scale)},
      {"noise_variance", real(gp.noise_variance)},
      {"training_radius", real(gp.training_radius)},
      {"gp_default_mean_dbm", real(gp_default_mean_dbm)},
      {"start_x", real(start.x)},
      {"start_y", real(start.y)},
      {"start_heading", real(start_heading.theta)},
      {"windows",
       [this](const std::string&, const std::string& v) {
         windows.clear();
         std::istringstream in(v);
         std::string part;
         while (std::getline(in, part, ',')) {
           part = trim(part);
           if (!part.empty()) windows.push_back(parse_window(part));
         }
       }},
  };
  dispatch(table, kv, "run config");
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  out << "n_particles=" << filter.n_particles << '\n'
      << "sigma_step=" << fmt_double(filter.sigma_step) << '\n'
      << "sigma_heading=" << fmt_double(filter.sigma_heading) << '\n'
      << "d_rss_thres=" << fmt_double(filter.d_rss_thres) << '\n'
      << "d_pos_thres=" << fmt_double(filter.d_pos_thres) << '\n'
      << "min_gap_time=" << fmt_double(filter.min_gap_time) << '\n'
      << "min_gap_dist=" << fmt_double(filter.min_gap_dist) << '\n'
      << "penalty_factor=" << fmt_double(filter.penalty_factor) << '\n'
      << "missing_fill_dbm=" << fmt_double(filter.missing_fill_dbm) << '\n'
      << "rng_seed=" << filter.rng_seed << '\n'
      << "ess_fraction=" << fmt_double(filter.ess_fraction) << '\n'
      << "signal_variance=" << fmt_double(gp.signal_variance) << '\n'
      << "length_scale=" << fmt_double(gp.length_scale) << '\n'
      << "noise_variance=" << fmt_double(gp.noise_variance) << '\n'
      << "training_radius=" << fmt_double(gp.training_radius) << '\n'
      << "gp_default_mean_dbm=" << fmt_double(gp_default_mean_dbm) << '\n'
      << "start_x=" << fmt_double(start.x) << '\n'
      << "start_y=" << fmt_double(start.y) << '\n'
      << "start_heading=" << fmt_double(start_heading.theta) << '\n'
      << "windows=";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out << (i ? "," : "") << format_window(windows[i]);
  }
  out << '\n';
  return out.str();
}

void ScenarioConfig::apply(const KeyValueList& kv) {
  const std::map<std::string, Setter> table{
      {"origin_x", real(origin.x)},
      {"origin_y", real(origin.y)},
      {"width", real(width)},
      {"height", real(height)},
      {"laps", integer(laps)},
      {"step_length", real(step_length)},
      {"cadence", real(cadence)},
      {"scan_period", real(scan_period)},
      {"scan_offset", real(scan_offset)},
      {"step_noise_sigma", real(imu.step_noise_sigma)},
      {"heading_noise_sigma", real(imu.heading_noise_sigma)},
      {"heading_bias_per_step", real(imu.heading_bias_per_step)},
      {"n_aps", integer(n_aps)},
      {"shadowing_sigma", real(shadowing_sigma)},
      {"tx_power_dbm", real(tx_power_dbm)},
      {"path_loss_exponent", real(path_loss_exponent)},
      {"detection_floor", real(detection_floor)},
      {"ap_margin", real(ap_margin)},
      {"seed", integer(seed)},
      {"layout_seed", integer(layout_seed)},
      // ap = ID x y [tx_power_dbm path_loss_exponent shadowing_sigma detection_floor]
      {"ap",
       [this](const std::string& k, const std::string& v) {
         std::istringstream in(v);
         std::vector<std::string> f;
         for (std::string tok; in >> tok;) f.push_back(tok);
         if (f.size() != 3 && f.size() != 7) {
           throw std::invalid_argument("ap expects 3 or 7 fields, got '" + v + "'");
         }
         sim::AccessPoint ap;
         ap.id = f[0];
         ap.position = {to_double(k, f[1]), to_double(k, f[2])};
         ap.tx_power_dbm = tx_power_dbm;
         ap.path_loss_exponent = path_loss_exponent;
         ap.shadowing_sigma = shadowing_sigma;
         ap.detection_floor = detection_floor;
         if (f.size() == 7) {
           ap.tx_power_dbm = to_double(k, f[3]);
           ap.path_loss_exponent = to_double(k, f[4]);
           ap.shadowing_sigma = to_double(k, f[5]);
           ap.detection_floor = to_double(k, f[6]);
         }
         explicit_aps.push_back(std::move(ap));
       }},
  };
  dispatch(table, kv, "scenario config");
}

sim::Environment ScenarioConfig::environment() const {
  if (!explicit_aps.empty()) return sim::Environment{explicit_aps};
  auto env = sim::grid_environment(origin, width, height, n_aps, shadowing_sigma,
                                   layout_seed, ap_margin);
  for (auto& ap : env.aps) {
    ap.tx_power_dbm = tx_power_dbm;
    ap.path_loss_exponent = path_loss_exponent;
    ap.detection_floor = detection_floor;
  }
  return env;
}

std::vector<EpochWindow> ScenarioConfig::revisit_windows(std::size_t epochs) const {
  std::vector<EpochWindow> out;
  const double perimeter = 2.0 * (width + height);
  auto lap_start = [&](std::size_t lap) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(lap) * perimeter / step_length)) +
           1;
  };
  for (std::size_t lap = 1; lap < laps; ++lap) {
    const std::size_t begin = lap_start(lap);
    const std::size_t end = std::min(epochs, lap_start(lap + 1));
    if (begin < end) out.push_back({begin, end});
  }
  return out;
}

}  // namespace footwifi
