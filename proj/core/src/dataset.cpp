#include "footwifi/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "footwifi/rss.hpp"
#include "json.hpp"

namespace footwifi {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const fs::path& file, std::size_t line, const std::string& what) {
  throw std::runtime_error(file.filename().string() + ":" + std::to_string(line) + ": " + what);
}

double number(const ojson& rec, const char* key, const fs::path& file, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_number()) {
    fail(file, line, std::string("missing or non-numeric field '") + key + "'");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) fail(file, line, std::string("non-finite field '") + key + "'");
  return v;
}

// Calls fn(record, line_number) for every non-empty line.
template <typename Fn>
void for_each_record(const fs::path& file, Fn&& fn) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ojson rec;
    try {
      rec = ojson::parse(line);
    } catch (const ojson::parse_error& e) {
      fail(file, lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object()) fail(file, lineno, "record is not a JSON object");
    fn(rec, lineno);
  }
}

void write_lines(const fs::path& file, const std::vector<std::string>& lines) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace

std::string encode_step(const StepMeasurement& s) {
  ojson j;
  j["t"] = s.t;
  j["dl"] = s.delta_l;
  j["dtheta"] = s.delta_theta;
  return j.dump();
}

std::string encode_scan(const RssVector& scan) {
  ojson j;
  j["t"] = scan.t;
  j["readings"] = ojson::array();
  for (const auto& [ap, rss] : scan.readings) {
    ojson r;
    r["ap"] = ap;
    r["rss"] = rss;
    j["readings"].push_back(std::move(r));
  }
  return j.dump();
}

std::string encode_truth(const TruthSample& t) {
  ojson j;
  j["t"] = t.t;
  j["x"] = t.position.x;
  j["y"] = t.position.y;
  return j.dump();
}

Dataset load_dataset(const fs::path& dir) {
  Dataset data;

  const fs::path steps_file = dir / kStepsFile;
  for_each_record(steps_file, [&](const ojson& rec, std::size_t line) {
    StepMeasurement s{number(rec, "t", steps_file, line), number(rec, "dl", steps_file, line),
                      number(rec, "dtheta", steps_file, line)};
    if (s.delta_l < 0.0) fail(steps_file, line, "negative step length");
    if (!data.steps.empty() && !(s.t > data.steps.back().t)) {
      fail(steps_file, line, "non-monotone timestamps");
    }
    data.steps.push_back(s);
  });

  const fs::path scans_file = dir / kScansFile;
  for_each_record(scans_file, [&](const ojson& rec, std::size_t line) {
    RssVector scan;
    scan.t = number(rec, "t", scans_file, line);
    auto it = rec.find("readings");
    if (it == rec.end() || !it->is_array()) fail(scans_file, line, "missing 'readings' array");
    for (const auto& r : *it) {
      if (!r.is_object() || !r.contains("ap") || !r["ap"].is_string()) {
        fail(scans_file, line, "reading without string 'ap'");
      }
      const std::string ap = r["ap"].get<std::string>();
      double rss = number(r, "rss", scans_file, line);
      if (rss > kRssCeilDbm) fail(scans_file, line, "rss above 0 dBm for " + ap);
      if (rss < kRssFloorDbm) {
        std::ostringstream msg;
        msg << scans_file.filename().string() << ":" << line << ": rss " << rss << " dBm for "
            << ap << " clamped to " << kRssFloorDbm;
        data.warnings.push_back(msg.str());
        rss = clamp_rss(rss);
      }
      if (!scan.readings.emplace(ap, rss).second) {
        fail(scans_file, line, "duplicate ap id " + ap);
      }
    }
    if (!data.scans.empty() && scan.t < data.scans.back().t) {
      fail(scans_file, line, "non-monotone timestamps");
    }
    data.scans.push_back(std::move(scan));
  });

  const fs::path truth_file = dir / kTruthFile;
  if (fs::exists(truth_file)) {
    std::vector<TruthSample> truth;
    for_each_record(truth_file, [&](const ojson& rec, std::size_t line) {
      TruthSample t{number(rec, "t", truth_file, line),
                    {number(rec, "x", truth_file, line), number(rec, "y", truth_file, line)}};
      if (!truth.empty() && !(t.t > truth.back().t)) {
        fail(truth_file, line, "non-monotone timestamps");
      }
      truth.push_back(t);
    });
    data.truth = std::move(truth);
  }
  return data;
}

void save_dataset(const Dataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> lines;
  lines.reserve(data.steps.size());
  for (const auto& s : data.steps) lines.push_back(encode_step(s));
  write_lines(dir / kStepsFile, lines);

  lines.clear();
  for (const auto& s : data.scans) lines.push_back(encode_scan(s));
  write_lines(dir / kScansFile, lines);

  if (data.truth) {
    lines.clear();
    for (const auto& t : *data.truth) lines.push_back(encode_truth(t));
    write_lines(dir / kTruthFile, lines);
  } else if (fs::exists(dir / kTruthFile)) {
    fs::remove(dir / kTruthFile);
  }
}

}  // namespace footwifi
