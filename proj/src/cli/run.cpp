#include "eqwalk/cli/run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "eqwalk/analysis.hpp"
#include "eqwalk/errors.hpp"
#include "eqwalk/spectral.hpp"
#include "eqwalk/stats.hpp"
#include "eqwalk/walk.hpp"

namespace eqwalk::cli {

using nlohmann::json;

namespace {

// Calls visit(distribution) for steps 0..steps, using density evolution when
// dephasing is on. Density states are not retained.
void for_each_distribution(const RunConfig& cfg, double phi, int steps,
                           const std::function<void(const Distribution&)>& visit) {
  const WalkParams params(phi, cfg.theta, cfg.dephase_p);
  const SiteWindow window = SiteWindow::for_walk(cfg.initial_site, steps);
  const SpinorState start = SpinorState::localized(cfg.initial_site, cfg.initial_spinor, window);
  if (cfg.dephase_p > 0.0) {
    DensityState rho = DensityState::from_pure(start);
    visit(position_distribution(rho, 0));
    for (int t = 1; t <= steps; ++t) {
      rho = step_density(rho, params);
      visit(position_distribution(rho, t));
    }
    return;
  }
  SpinorState state = start;
  visit(position_distribution(state, 0));
  for (int t = 1; t <= steps; ++t) {
    state = step(state, params);
    visit(position_distribution(state, t));
  }
}

Table widths_table(const std::string& name, const std::vector<double>& widths) {
  Table t{name, {"step", "rms_width"}, {}};
  for (std::size_t s = 0; s < widths.size(); ++s) {
    t.rows.push_back({static_cast<long long>(s), widths[s]});
  }
  return t;
}

std::vector<double> widths_for(const RunConfig& cfg, double phi, int steps) {
  std::vector<double> widths;
  for_each_distribution(cfg, phi, steps,
                        [&](const Distribution& d) { widths.push_back(rms_width(d)); });
  return widths;
}

json fit_json(const ExpFitResult& fit) {
  return json{{"xi", fit.decaying ? json(fit.xi) : json(nullptr)},
              {"amplitude", fit.amplitude},
              {"r_squared", fit.r_squared},
              {"decaying", fit.decaying}};
}

void run_evolve(const RunConfig& cfg, RunResult& out) {
  const int steps = cfg.steps.front();
  Table dist{"distribution", {"step", "site", "probability"}, {}};
  std::vector<double> widths;
  for_each_distribution(cfg, cfg.phi.evaluate(), steps, [&](const Distribution& d) {
    for (std::size_t i = 0; i < d.p.size(); ++i) {
      dist.rows.push_back({static_cast<long long>(d.step),
                           static_cast<long long>(d.window.site(i)), d.p[i]});
    }
    widths.push_back(rms_width(d));
  });
  out.tables.push_back(std::move(dist));
  out.tables.push_back(widths_table("widths", widths));
}

void run_bands(const RunConfig& cfg, RunResult& out) {
  const BandStructure bands = band_structure(cfg.phi.as_rational(), cfg.theta, cfg.grid_points);
  Table t{"bands", {"kappa", "band_index", "quasienergy"}, {}};
  for (std::size_t j = 0; j < bands.kappa_grid.size(); ++j) {
    for (std::size_t b = 0; b < bands.band_count(); ++b) {
      t.rows.push_back({bands.kappa_grid[j], static_cast<long long>(b), bands.eigenphases[j][b]});
    }
  }
  out.tables.push_back(std::move(t));
  out.meta["grid_points"] = cfg.grid_points;
  out.meta["flatness"] = band_flatness(bands);
}

void run_revival(const RunConfig& cfg, RunResult& out) {
  const int steps = cfg.steps.front();
  std::vector<double> series;
  for_each_distribution(cfg, cfg.phi.evaluate(), steps, [&](const Distribution& d) {
    series.push_back(return_probability(d, cfg.initial_site));
  });
  Table t{"revival", {"step", "return_probability"}, {}};
  for (std::size_t s = 0; s < series.size(); ++s) {
    t.rows.push_back({static_cast<long long>(s), series[s]});
  }
  out.tables.push_back(std::move(t));
  out.meta["revival_peaks"] = revival_peaks(series);
}

void run_localize(const RunConfig& cfg, RunResult& out) {
  const int last = *std::max_element(cfg.steps.begin(), cfg.steps.end());
  const int width_t_max = cfg.width_t_max > 0 ? cfg.width_t_max : last;
  const int horizon = std::max(last, width_t_max);
  std::vector<Distribution> picked;
  std::vector<double> widths;
  for_each_distribution(cfg, cfg.phi.evaluate(), horizon, [&](const Distribution& d) {
    for (const int s : cfg.steps) {
      if (s == d.step) picked.push_back(d);
    }
    if (d.step <= width_t_max) widths.push_back(rms_width(d));
  });
  const Distribution avg = time_averaged_distribution(picked);
  Table t{"average", {"site", "probability"}, {}};
  for (std::size_t i = 0; i < avg.p.size(); ++i) {
    t.rows.push_back({static_cast<long long>(avg.window.site(i)), avg.p[i]});
  }
  out.tables.push_back(std::move(t));
  out.tables.push_back(widths_table("widths", widths));
  out.meta["averaged_steps"] = cfg.steps;
  out.meta["fit"] = fit_json(fit_two_sided_exponential(avg));
}

void run_compare(const RunConfig& cfg, RunResult& out) {
  const int steps = cfg.steps.front();
  std::vector<PhiSpec> fields{cfg.phi};
  fields.insert(fields.end(), cfg.compare.begin(), cfg.compare.end());
  std::vector<double> base_velocities;
  if (cfg.phi.kind() == PhiSpec::Kind::Rational) {
    base_velocities = velocity_multiset(cfg.phi.as_rational(), cfg.theta, cfg.grid_points);
  }
  json entries = json::array();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto widths = widths_for(cfg, fields[i].evaluate(), steps);
    out.tables.push_back(widths_table("widths_" + std::to_string(i), widths));
    json entry = fields[i].describe();
    entry["final_width"] = widths.back();
    entry["velocity_delta"] = nullptr;
    if (i > 0 && !base_velocities.empty() && fields[i].kind() == PhiSpec::Kind::Rational) {
      const auto v = velocity_multiset(fields[i].as_rational(), cfg.theta, cfg.grid_points);
      if (v.size() == base_velocities.size()) {
        double delta = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
          delta = std::max(delta, std::abs(v[k] - base_velocities[k]));
        }
        entry["velocity_delta"] = delta;
      }
    }
    entries.push_back(std::move(entry));
  }
  out.meta["fields"] = std::move(entries);
  out.meta["grid_points"] = cfg.grid_points;
}

void run_discriminate(const RunConfig& cfg, RunResult& out) {
  const DiscriminationReport rep = distinguishing_steps(
      cfg.phi.evaluate(), cfg.against->evaluate(), cfg.threshold, cfg.cap, cfg.theta);
  Table t{"tv", {"step", "tv_distance"}, {}};
  for (std::size_t s = 0; s < rep.tv_curve.size(); ++s) {
    t.rows.push_back({static_cast<long long>(s), rep.tv_curve[s]});
  }
  out.tables.push_back(std::move(t));
  out.meta["against"] = cfg.against->describe();
  out.meta["threshold"] = cfg.threshold;
  out.meta["heuristic_steps"] = rep.heuristic_steps;
  out.meta["empirical_steps"] = rep.empirical_steps ? json(*rep.empirical_steps) : json(nullptr);
}

void run_sample(const RunConfig& cfg, RunResult& out) {
  const int steps = cfg.steps.front();
  std::optional<Distribution> final_dist;
  for_each_distribution(cfg, cfg.phi.evaluate(), steps, [&](const Distribution& d) {
    if (d.step == steps) final_dist = d;
  });
  const Sampling& smp = *cfg.sampling;
  const CountsRecord rec = sample_measurements(*final_dist, smp.shots, smp.seed, smp.detect_eff);
  Table t{"sample", {"site", "count", "p_hat", "lower", "upper"}, {}};
  if (rec.retained() > 0) {
    const auto intervals = empirical_distribution(rec, smp.confidence);
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      t.rows.push_back({static_cast<long long>(rec.window.site(i)),
                        static_cast<long long>(rec.counts[i]), intervals[i].p_hat,
                        intervals[i].lower, intervals[i].upper});
    }
  }
  out.tables.push_back(std::move(t));
  out.meta["shots"] = rec.shots;
  out.meta["lost"] = rec.lost;
  out.meta["detect_eff"] = smp.detect_eff;
  out.meta["confidence"] = smp.confidence;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", value);
  return buf;
}

RunResult execute(const RunConfig& cfg) {
  RunResult out;
  out.meta["tool"] = kToolName;
  out.meta["version"] = kToolVersion;
  out.meta["config_hash"] = config_hash(cfg);
  out.meta["mode"] = to_string(cfg.mode);
  json phi = cfg.phi.describe();
  phi["reduced"] = reduce_angle(cfg.phi.evaluate());
  out.meta["phi"] = std::move(phi);
  out.meta["theta"] = cfg.theta;
  out.meta["dephase_p"] = cfg.dephase_p;
  out.meta["initial_site"] = cfg.initial_site;
  if (cfg.sampling) {
    out.meta["seed"] = cfg.sampling->seed;
    out.meta["generator"] = kSamplerGenerator;
  }
  switch (cfg.mode) {
    case Mode::Evolve: run_evolve(cfg, out); break;
    case Mode::Bands: run_bands(cfg, out); break;
    case Mode::Revival: run_revival(cfg, out); break;
    case Mode::Localize: run_localize(cfg, out); break;
    case Mode::Compare: run_compare(cfg, out); break;
    case Mode::Discriminate: run_discriminate(cfg, out); break;
    case Mode::Sample: run_sample(cfg, out); break;
  }
  return out;
}

std::vector<std::string> write_outputs(const RunConfig& cfg, const RunResult& result) {
  std::vector<std::string> written;
  const std::string& base = cfg.output_path;
  const auto parent = std::filesystem::path(base).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw ConfigError("cannot create output directory '" + parent.string() + "': " + ec.message());
  }
  if (cfg.format == OutputFormat::Json) {
    json tables = json::object();
    for (const auto& t : result.tables) {
      json rows = json::array();
      for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& cell : row) std::visit([&](auto v) { r.push_back(v); }, cell);
        rows.push_back(std::move(r));
      }
      tables[t.name] = json{{"columns", t.columns}, {"rows", std::move(rows)}};
    }
    const json doc{{"meta", result.meta}, {"tables", std::move(tables)}};
    written.push_back(base + ".json");
    write_text(written.back(), doc.dump(2) + "\n");
    return written;
  }
  for (const auto& t : result.tables) {
    std::string text;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      text += (c ? "," : "") + t.columns[c];
    }
    text += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) text += ',';
        if (const auto* i = std::get_if<long long>(&row[c])) {
          text += std::to_string(*i);
        } else {
          text += format_real(std::get<double>(row[c]));
        }
      }
      text += '\n';
    }
    written.push_back(base + "." + t.name + ".csv");
    write_text(written.back(), text);
  }
  written.push_back(base + ".meta.json");
  write_text(written.back(), result.meta.dump(2) + "\n");
  return written;
}

int run(const std::string& config_path, const Overrides& overrides, std::string& diagnostic) {
  try {
    const RunConfig cfg = load_config(config_path, overrides);
    write_outputs(cfg, execute(cfg));
    return kExitOk;
  } catch (const ConfigError& e) {
    diagnostic = std::string("config error: ") + e.what();
    return kExitConfig;
  } catch (const std::exception& e) {
    diagnostic = std::string("numerical error: ") + e.what();
    return kExitNumerical;
  }
}

}  // namespace eqwalk::cli
