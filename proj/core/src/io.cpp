#include "capflow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace capflow::io {

namespace {

using nlohmann::json;

/// Shortest decimal that round-trips; keeps CSV output byte-stable.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

std::string operator_to_json(const OperatorSpec& op) {
  json j;
  if (op.family() == OperatorFamily::PowerCurvature) {
    j["family"] = "power";
    j["gamma"] = op.gamma();
    j["tail_cutoff"] = op.tail_cutoff();
  } else {
    j["family"] = "custom";
    j["alpha"] = op.alpha();
    j["c_plus"] = op.c_plus();
    j["c_minus"] = op.c_minus();
    j["tail_cutoff"] = op.tail_cutoff();
  }
  return j.dump(2);
}

OperatorSpec operator_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("operator json: ") + e.what());
  }
  const std::string family = j.value("family", "");
  if (family == "power") {
    if (!j.contains("gamma")) throw ConfigError("operator json: power family needs gamma");
    return OperatorSpec::power_curvature(j["gamma"].get<double>(),
                                         j.value("tail_cutoff", 10.0));
  }
  if (family == "custom") {
    throw ConfigError("operator json: custom pairs need in-process callables");
  }
  throw ConfigError("operator json: unknown family '" + family + "'");
}

void write_wave_csv(const std::filesystem::path& path, const WaveProfile& wave) {
  auto out = open_out(path);
  out << "x,W,Wx\n";
  const auto n = wave.xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << fmt(wave.xs[i]) << ',' << fmt(wave.ws[i]) << ',';
    if (i > 0 && i + 1 < n) {
      out << fmt(profile_derivative(wave.op, wave.b, wave.xs[i]));
    }
    out << '\n';
  }
}

void write_wave_sidecar(const std::filesystem::path& path, const WaveProfile& wave) {
  json j;
  j["b"] = wave.b;
  j["c"] = wave.c;
  j["holder_exponent"] = wave.holder_exponent;
  j["n_nodes"] = wave.xs.size();
  j["operator"] = json::parse(operator_to_json(wave.op));
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  json index;
  index["b"] = traj.grid.b;
  index["n"] = traj.grid.n;
  index["steps"] = traj.steps;
  index["dt"] = {{"min", traj.dt_min}, {"max", traj.dt_max}};
  if (traj.blowup) {
    index["blowup"] = {{"t", traj.blowup->t}, {"max_abs_u", traj.blowup->max_abs_u}};
  }
  json snaps = json::array();
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%06zu.csv", s);
    auto out = open_out(dir / name);
    out << "x,u\n";
    for (int i = 0; i < traj.grid.total(); ++i) {
      out << fmt(traj.grid.x(i)) << ',' << fmt(traj.snapshots[s].u[i]) << '\n';
    }
    snaps.push_back({{"t", traj.snapshots[s].t},
                     {"file", name},
                     {"lambda_left", traj.lambda_left[s]},
                     {"lambda_right", traj.lambda_right[s]}});
  }
  index["snapshots"] = std::move(snaps);
  auto out = open_out(dir / "index.json");
  out << index.dump(2) << '\n';
}

void write_report(const std::filesystem::path& dir, const RunReport& report) {
  std::filesystem::create_directories(dir);
  json j;
  j["m_estimate"] = report.m_estimate;
  j["t"] = report.envelopes.t;
  j["eta_bar"] = report.envelopes.upper;
  j["eta_under"] = report.envelopes.lower;
  j["gap"] = report.gap;
  j["holder"] = report.holder;
  j["convexity_min"] = report.convexity_min;
  j["lipschitz"] = {{"min", report.lipschitz_min}, {"max", report.lipschitz_max}};
  json viols = json::array();
  for (const auto& v : report.violations) {
    viols.push_back({{"invariant", v.invariant}, {"t", v.t}, {"magnitude", v.magnitude}});
  }
  j["violations"] = std::move(viols);
  {
    auto out = open_out(dir / "report.json");
    out << j.dump(2) << '\n';
  }
  auto out = open_out(dir / "series.csv");
  out << "t,eta_bar,eta_under,gap\n";
  for (std::size_t s = 0; s < report.envelopes.t.size(); ++s) {
    out << fmt(report.envelopes.t[s]) << ',' << fmt(report.envelopes.upper[s]) << ','
        << fmt(report.envelopes.lower[s]) << ',' << fmt(report.gap[s]) << '\n';
  }
}

std::vector<std::pair<double, double>> read_xy_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path.string());
  std::vector<std::pair<double, double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    std::istringstream ss(line);
    std::string xs, us;
    if (!std::getline(ss, xs, ',') || !std::getline(ss, us, ',')) {
      throw ConfigError("bad csv row in " + path.string() + ": " + line);
    }
    rows.emplace_back(std::stod(xs), std::stod(us));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace capflow::io
