#include "capflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "capflow/io.hpp"
#include "capflow/traveling_wave.hpp"

namespace capflow {

namespace {

using nlohmann::json;

BoundaryMode parse_mode(const json& j, std::vector<std::string>& errs) {
  const std::string kind = j.value("boundary", "profile");
  if (kind == "copy") return BoundaryMode::copy_speed();
  if (kind != "profile") {
    errs.push_back("boundary: expected 'profile' or 'copy', got '" + kind + "'");
    return BoundaryMode::profile_adaptive();
  }
  if (j.contains("lambda")) {
    const double lam = j["lambda"].get<double>();
    if (!(lam > 0.0)) {
      errs.push_back("lambda: must be > 0");
      return BoundaryMode::profile_adaptive();
    }
    return BoundaryMode::profile_fixed(lam);
  }
  return BoundaryMode::profile_adaptive();
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  std::vector<std::string> errs;
  RunConfig cfg;

  const double gamma = j.value("gamma", 2.0);
  if (!(gamma > 0.0)) errs.push_back("gamma: must be > 0");
  const double cutoff = j.value("tail_cutoff", 10.0);
  if (!(cutoff > 0.0)) errs.push_back("tail_cutoff: must be > 0");
  if (gamma > 0.0 && cutoff > 0.0) {
    cfg.op = OperatorSpec::power_curvature(gamma, cutoff);
  }

  cfg.b = j.value("b", 1.0);
  if (!(cfg.b > 0.0)) errs.push_back("b: must be > 0");
  cfg.n = j.value("n", 255);
  if (cfg.n < 8) errs.push_back("n: must be >= 8");
  cfg.t_final = j.value("T", 1.0);
  if (!(cfg.t_final > 0.0)) errs.push_back("T: must be > 0");
  cfg.mode = parse_mode(j, errs);
  cfg.snapshot_every = j.value("snapshot_every", 0.0);
  cfg.out_dir = j.value("out", std::string("out"));
  cfg.seed = j.value("seed", std::uint64_t{0});

  if (j.contains("initial")) {
    const json& ji = j["initial"];
    const std::string kind = ji.value("type", "quadratic");
    if (kind == "wave") {
      cfg.initial.kind = InitialData::Kind::Wave;
    } else if (kind == "quadratic") {
      cfg.initial.kind = InitialData::Kind::Quadratic;
      cfg.initial.quad_coeff = ji.value("a", 2.0);
    } else if (kind == "file") {
      cfg.initial.kind = InitialData::Kind::File;
      cfg.initial.file_path = ji.value("path", "");
      if (cfg.initial.file_path.empty()) {
        errs.push_back("initial.path: required for type 'file'");
      } else if (!std::filesystem::exists(cfg.initial.file_path)) {
        errs.push_back("initial.path: no such file: " + cfg.initial.file_path);
      }
    } else {
      errs.push_back("initial.type: expected wave|quadratic|file, got '" + kind + "'");
    }
    cfg.initial.regularize_eps = ji.value("eps", 0.0);
    if (cfg.initial.regularize_eps < 0.0 || cfg.initial.regularize_eps >= 1.0) {
      errs.push_back("initial.eps: must be in [0,1)");
    }
  }

  if (!errs.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

FieldState make_initial(const RunConfig& cfg, const Grid& grid) {
  std::function<double(double)> u0;
  switch (cfg.initial.kind) {
    case InitialData::Kind::Wave: {
      const WaveProfile wave = profile(cfg.op, grid.b, grid.total());
      if (cfg.initial.regularize_eps > 0.0) {
        // continuous interpolant of the sampled wave for the regularizer
        u0 = [wave, &grid](double x) {
          const double s = (x + grid.b) / (2.0 * grid.b) *
                           static_cast<double>(wave.xs.size() - 1);
          const auto i = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(s), 0,
                                                    std::ssize(wave.xs) - 2);
          const double w = s - static_cast<double>(i);
          return (1.0 - w) * wave.ws[i] + w * wave.ws[i + 1];
        };
        break;
      }
      FieldState st{grid, wave.ws, 0.0};
      return st;
    }
    case InitialData::Kind::Quadratic: {
      const double a = cfg.initial.quad_coeff;
      u0 = [a](double x) { return a * x * x; };
      break;
    }
    case InitialData::Kind::File: {
      auto rows = io::read_xy_csv(cfg.initial.file_path);
      if (rows.size() < 2) throw ConfigError("initial file: need at least 2 rows");
      u0 = [rows = std::move(rows)](double x) {
        auto it = std::lower_bound(rows.begin(), rows.end(), x,
                                   [](const auto& r, double v) { return r.first < v; });
        if (it == rows.begin()) return it->second;
        if (it == rows.end()) return (it - 1)->second;
        const auto& [x1, u1] = *it;
        const auto& [x0v, u0v] = *(it - 1);
        const double w = (x - x0v) / (x1 - x0v);
        return (1.0 - w) * u0v + w * u1;
      };
      break;
    }
  }
  if (cfg.initial.regularize_eps > 0.0) {
    return regularize_initial(u0, cfg.initial.regularize_eps, cfg.op, grid);
  }
  FieldState st{grid, std::vector<double>(grid.total(), 0.0), 0.0};
  for (int i = 0; i < grid.total(); ++i) st.u[i] = u0(grid.x(i));
  return st;
}

}  // namespace capflow
