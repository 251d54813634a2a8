#include "gpme/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "gpme/errors.hpp"
#include "gpme/io.hpp"

namespace gpme {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownKeys = {
    "model",         "m",          "preset",        "front_left",   "front_right",
    "front_support", "front_exponent", "linear_left", "linear_right", "tlp_background", "n",
    "averaging",     "mhm",        "mhm_mode",      "mhm_local",    "integrator",
    "dt_factor",     "dt_power",   "t_end",         "picard_max_iters", "picard_tol",
    "allow_unstable", "snapshots", "probe_x",       "probe_stride", "predictor",
    "noise_floor",   "out_dir",    "cache_dir",     "label",        "resolutions",
    "schemes",       "reference_n"};

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : j.items()) {
    if (!kKnownKeys.count(item.key())) {
      throw ConfigError("unknown config key: " + item.key());
    }
  }
  RunConfig c;
  read_key(j, "model", c.model);
  read_key(j, "m", c.m);
  read_key(j, "preset", c.preset);
  read_key(j, "front_left", c.front_left);
  read_key(j, "front_right", c.front_right);
  read_key(j, "front_support", c.front_support);
  read_key(j, "front_exponent", c.front_exponent);
  read_key(j, "linear_left", c.linear_left);
  read_key(j, "linear_right", c.linear_right);
  read_key(j, "tlp_background", c.tlp_background);
  read_key(j, "n", c.n);
  read_key(j, "averaging", c.averaging);
  read_key(j, "mhm", c.mhm);
  read_key(j, "mhm_mode", c.mhm_mode);
  read_key(j, "mhm_local", c.mhm_local);
  read_key(j, "integrator", c.integrator);
  read_key(j, "dt_factor", c.dt_factor);
  read_key(j, "dt_power", c.dt_power);
  read_key(j, "t_end", c.t_end);
  read_key(j, "picard_max_iters", c.picard_max_iters);
  read_key(j, "picard_tol", c.picard_tol);
  read_key(j, "allow_unstable", c.allow_unstable);
  read_key(j, "snapshots", c.snapshots);
  read_key(j, "probe_x", c.probe_x);
  read_key(j, "probe_stride", c.probe_stride);
  read_key(j, "predictor", c.predictor);
  read_key(j, "noise_floor", c.noise_floor);
  read_key(j, "out_dir", c.out_dir);
  read_key(j, "cache_dir", c.cache_dir);
  read_key(j, "label", c.label);
  read_key(j, "resolutions", c.resolutions);
  read_key(j, "schemes", c.schemes);
  read_key(j, "reference_n", c.reference_n);
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  return {
      {"model", c.model},
      {"m", c.m},
      {"preset", c.preset},
      {"front_left", c.front_left},
      {"front_right", c.front_right},
      {"front_support", c.front_support},
      {"front_exponent", c.front_exponent},
      {"linear_left", c.linear_left},
      {"linear_right", c.linear_right},
      {"tlp_background", c.tlp_background},
      {"n", c.n},
      {"averaging", c.averaging},
      {"mhm", c.mhm},
      {"mhm_mode", c.mhm_mode},
      {"mhm_local", c.mhm_local},
      {"integrator", c.integrator},
      {"dt_factor", c.dt_factor},
      {"dt_power", c.dt_power},
      {"t_end", c.t_end},
      {"picard_max_iters", c.picard_max_iters},
      {"picard_tol", c.picard_tol},
      {"allow_unstable", c.allow_unstable},
      {"snapshots", c.snapshots},
      {"probe_x", c.probe_x},
      {"probe_stride", c.probe_stride},
      {"predictor", c.predictor},
      {"noise_floor", c.noise_floor},
      {"out_dir", c.out_dir},
      {"cache_dir", c.cache_dir},
      {"label", c.label},
      {"resolutions", c.resolutions},
      {"schemes", c.schemes},
      {"reference_n", c.reference_n},
  };
}

std::string scheme_name(const RunConfig& config) {
  if (config.mhm) return "mhm";
  return config.averaging;
}

CoefficientModel make_model(const RunConfig& config) {
  if (config.model == "pme") return CoefficientModel::pme(config.m);
  if (config.model == "superslow") return CoefficientModel::superslow();
  if (config.model == "linear") return CoefficientModel::linear();
  throw ConfigError("unknown model: " + config.model + " (pme | superslow | linear)");
}

ProblemSetup make_setup(const RunConfig& config) {
  const CoefficientModel model = make_model(config);
  if (config.preset == "front") {
    return make_front_problem(
        model, config.n,
        InitialPreset::front(config.front_left, config.front_right, config.front_support,
                             config.front_exponent));
  }
  if (config.preset == "linear") {
    return make_linear_problem(model, config.n, config.linear_left, config.linear_right);
  }
  if (config.preset == "tlp") {
    if (config.model != "pme" || config.m != 3.0) {
      throw ConfigError("the locking problem preset is defined for pme with m = 3");
    }
    return make_tlp_problem(config.n, config.tlp_background);
  }
  throw ConfigError("unknown preset: " + config.preset + " (front | linear | tlp)");
}

SpatialOperatorConfig make_space_config(const RunConfig& config) {
  SpatialOperatorConfig space;
  if (config.averaging == "arithmetic") {
    space.averaging = AveragingRule::Arithmetic;
  } else if (config.averaging == "harmonic") {
    space.averaging = AveragingRule::Harmonic;
  } else {
    throw ConfigError("unknown averaging: " + config.averaging + " (arithmetic | harmonic)");
  }
  space.mhm = config.mhm;
  if (config.mhm_mode == "full") {
    space.mhm_mode = MhmMode::Full;
  } else if (config.mhm_mode == "term1") {
    space.mhm_mode = MhmMode::TermIOnly;
  } else if (config.mhm_mode == "term2") {
    space.mhm_mode = MhmMode::TermIIOnly;
  } else {
    throw ConfigError("unknown mhm_mode: " + config.mhm_mode + " (full | term1 | term2)");
  }
  space.mhm_local = config.mhm_local;
  return space;
}

IntegratorConfig make_time_config(const RunConfig& config, double dx) {
  (void)dx;
  IntegratorConfig time;
  if (config.integrator == "fe") {
    time.scheme = TimeScheme::ForwardEuler;
  } else if (config.integrator == "be") {
    time.scheme = TimeScheme::BackwardEuler;
  } else if (config.integrator == "rk2") {
    time.scheme = TimeScheme::TvdRk2;
  } else {
    throw ConfigError("unknown integrator: " + config.integrator + " (fe | be | rk2)");
  }

  double factor = config.dt_factor;
  if (config.dt_power == "dx2") {
    time.dt_rule.power = DtPower::DxSquared;
    if (factor <= 0.0) factor = default_dt_factor(make_model(config));
  } else if (config.dt_power == "dx") {
    time.dt_rule.power = DtPower::Dx;
    if (factor <= 0.0) factor = 1.0;
  } else {
    throw ConfigError("unknown dt_power: " + config.dt_power + " (dx2 | dx)");
  }
  time.dt_rule.factor = factor;
  time.t_end = config.t_end;
  time.nonlinear.max_iters = config.picard_max_iters;
  time.nonlinear.tol = config.picard_tol;
  time.allow_unstable = config.allow_unstable;
  return time;
}

void validate_config(const RunConfig& config, bool convergence_mode) {
  const ProblemSetup setup = make_setup(config);
  const SpatialOperatorConfig space = make_space_config(config);
  const IntegratorConfig time = make_time_config(config, setup.grid.dx);
  time.validate(space);
  if (config.probe_stride < 1) throw ConfigError("probe_stride must be >= 1");
  if (config.noise_floor < 0.0) throw ConfigError("noise_floor must be >= 0");
  for (double t : config.snapshots) {
    if (t < 0.0 || t > config.t_end + 1e-12) {
      throw ConfigError("snapshot time " + std::to_string(t) + " outside [0, t_end]");
    }
  }
  if (convergence_mode) {
    if (config.resolutions.size() < 1) {
      throw ConfigError("convergence mode needs at least one resolution");
    }
    for (int n : config.resolutions) {
      if (n < 4) throw ConfigError("resolution must be >= 4");
      if (config.reference_n % n != 0) {
        throw ConfigError("resolution " + std::to_string(n) + " does not divide the reference N = " +
                          std::to_string(config.reference_n));
      }
    }
    for (const std::string& s : config.schemes) {
      if (s != "arithmetic" && s != "harmonic" && s != "mhm") {
        throw ConfigError("unknown scheme: " + s + " (arithmetic | harmonic | mhm)");
      }
    }
  }
}

std::string run_id(const RunConfig& config) {
  std::string model_tag = config.model;
  if (config.model == "pme") {
    char buf[24];
    std::snprintf(buf, sizeof buf, "pme%g", config.m);
    model_tag = buf;
  }
  const std::string hash = hash_hex(config_to_json(config).dump()).substr(0, 8);
  return model_tag + "_" + config.preset + "_" + scheme_name(config) + "_" +
         config.integrator + "_n" + std::to_string(config.n) + "_" + hash;
}

namespace {

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

RunOutput execute(const RunConfig& config, const ProblemSetup& setup, bool want_front = false) {
  RunRecorders rec;
  rec.probe_x = config.probe_x;
  rec.stride = config.probe_stride;
  rec.predictor = config.predictor;
  rec.front = want_front;
  rec.snapshot_times = config.snapshots;
  return run_simulation(setup, make_space_config(config), make_time_config(config, setup.grid.dx),
                        rec);
}

}  // namespace

fs::path cmd_run(const RunConfig& config) {
  validate_config(config);
  const ProblemSetup setup = make_setup(config);
  const RunOutput out = execute(config, setup);

  const fs::path dir = fs::path(config.out_dir) / run_id(config);
  fs::create_directories(dir);

  for (std::size_t i = 0; i < out.snapshots.size(); ++i) {
    const std::string name = "snapshot_t" + time_tag(out.snapshots[i].time) + ".csv";
    write_snapshot_csv((dir / name).string(), setup.grid, out.snapshots[i]);
  }
  write_snapshot_csv((dir / ("snapshot_t" + time_tag(config.t_end) + ".csv")).string(),
                     setup.grid, out.final_field);
  write_probe_csv((dir / "probe.csv").string(), out.probe);
  if (config.predictor) {
    write_predictor_csv((dir / "predictor.csv").string(), out.predictor);
  }
  write_json((dir / "oscillations.json").string(),
             oscillation_to_json(detect_oscillations(out.probe, config.noise_floor)));

  nlohmann::json meta = {
      {"config", config_to_json(config)},
      {"config_hash", hash_hex(config_to_json(config).dump())},
      {"run_id", run_id(config)},
      {"steps", out.steps},
      {"probe_node", out.probe.node},
  };
  write_json((dir / "meta.json").string(), meta);
  return dir;
}

namespace {

RunConfig scheme_variant(RunConfig base, const std::string& scheme) {
  if (scheme == "arithmetic") {
    base.averaging = "arithmetic";
    base.mhm = false;
  } else if (scheme == "harmonic") {
    base.averaging = "harmonic";
    base.mhm = false;
  } else if (scheme == "mhm") {
    base.averaging = "harmonic";
    base.mhm = true;
  } else {
    throw ConfigError("unknown scheme: " + scheme);
  }
  return base;
}

}  // namespace

ConvergenceReport convergence_for_scheme(const RunConfig& config, const std::string& scheme) {
  RunConfig base = scheme_variant(config, scheme);
  base.predictor = false;
  base.snapshots.clear();
  validate_config(base, true);

  ConvergenceReport report;
  report.scheme = scheme;

  const bool against_exact = base.preset == "tlp";
  Field reference;
  Grid1D reference_grid;
  if (!against_exact) {
    RunConfig probe_cfg = base;
    probe_cfg.n = base.resolutions.front();
    const ProblemSetup coarse = make_setup(probe_cfg);
    ReferenceOptions opts;
    opts.n = base.reference_n;
    opts.cache_dir = base.cache_dir;
    reference = reference_solution(coarse, base.t_end, opts);
    reference_grid = Grid1D::uniform(base.reference_n);
  }

  for (int n : base.resolutions) {
    RunConfig cfg = base;
    cfg.n = n;
    const ProblemSetup setup = make_setup(cfg);
    RunRecorders rec;  // no probes needed, just the final field
    const RunOutput out = run_simulation(setup, make_space_config(cfg),
                                         make_time_config(cfg, setup.grid.dx), rec);

    ErrorNorms norms;
    if (against_exact) {
      Field exact;
      exact.time = base.t_end;
      exact.values.resize(setup.grid.n_nodes());
      for (int i = 0; i < setup.grid.n_nodes(); ++i) {
        exact.values[i] = tlp_exact(setup.grid.node(i), base.t_end);
      }
      norms = error_norms(out.final_field, setup.grid, exact, setup.grid);
    } else {
      norms = error_norms(out.final_field, setup.grid, reference, reference_grid);
    }
    report.resolutions.push_back(n);
    report.l1.push_back(norms.l1);
    report.l2.push_back(norms.l2);
    report.linf.push_back(norms.linf);
  }

  if (report.resolutions.size() >= 2) {
    report.order_l1 = fit_order(report.resolutions, report.l1);
    report.order_l2 = fit_order(report.resolutions, report.l2);
    report.order_linf = fit_order(report.resolutions, report.linf);
  }
  return report;
}

fs::path cmd_convergence(const RunConfig& config) {
  RunConfig base = config;
  if (base.schemes.empty()) base.schemes = {scheme_name(base)};
  validate_config(scheme_variant(base, base.schemes.front()), true);

  std::string id = "conv_" + base.model;
  if (base.model == "pme") id += time_tag(base.m);
  id += "_" + base.preset + "_" + hash_hex(config_to_json(base).dump()).substr(0, 8);
  const fs::path dir = fs::path(base.out_dir) / id;
  fs::create_directories(dir);

  nlohmann::json index = {{"config", config_to_json(base)}, {"schemes", base.schemes}};
  for (const std::string& scheme : base.schemes) {
    const ConvergenceReport report = convergence_for_scheme(base, scheme);
    write_convergence_csv((dir / ("convergence_" + scheme + ".csv")).string(), report);
    write_json((dir / ("convergence_" + scheme + ".json")).string(),
               convergence_to_json(report));
  }
  write_json((dir / "meta.json").string(), index);
  return dir;
}

fs::path cmd_compare(std::span<const RunConfig> configs, const std::string& out_dir) {
  if (configs.empty()) throw ConfigError("compare needs at least one config");
  const RunConfig& first = configs.front();
  for (const RunConfig& c : configs) {
    validate_config(c);
    if (c.n != first.n || c.t_end != first.t_end || c.preset != first.preset) {
      throw ConfigError("compare requires identical grid, preset and t_end across configs");
    }
    if (c.snapshots != first.snapshots) {
      throw ConfigError("compare requires identical snapshot lists across configs");
    }
  }

  std::vector<std::string> labels;
  std::vector<RunOutput> runs;
  const ProblemSetup setup = make_setup(first);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const RunConfig& c = configs[i];
    std::string label = c.label.empty() ? scheme_name(c) + "_" + c.integrator : c.label;
    if (std::count(labels.begin(), labels.end(), label)) {
      label += "_" + std::to_string(i);
    }
    labels.push_back(label);
    runs.push_back(execute(c, make_setup(c)));
  }

  const fs::path dir = fs::path(out_dir) /
                       ("compare_" + first.preset + "_n" + std::to_string(first.n));
  fs::create_directories(dir);

  // Snapshots share the grid: one column per scheme.
  auto write_overlay = [&](const std::string& name, std::size_t snapshot_index, double t) {
    std::ofstream out((dir / name).string());
    out << "x";
    for (const std::string& label : labels) out << ',' << label;
    out << '\n';
    for (int i = 0; i <= setup.grid.n_intervals; ++i) {
      out << format_float(setup.grid.node(i));
      for (const RunOutput& run : runs) {
        const Field& f = snapshot_index < run.snapshots.size() && t >= 0.0
                             ? run.snapshots[snapshot_index]
                             : run.final_field;
        out << ',' << format_float(f.values[i]);
      }
      out << '\n';
    }
  };
  std::vector<double> snapshot_times = first.snapshots;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()),
                       snapshot_times.end());
  for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
    write_overlay("snapshot_t" + time_tag(snapshot_times[s]) + "_compare.csv", s,
                  snapshot_times[s]);
  }
  write_overlay("snapshot_t" + time_tag(first.t_end) + "_compare.csv", snapshot_times.size(),
                -1.0);

  // Probe series may differ in time sampling (different integrators); merge
  // on the union of times and leave blanks where a scheme has no sample.
  std::map<double, std::vector<double>> merged;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const ProbeSeries& probe = runs[r].probe;
    for (std::size_t i = 0; i < probe.times.size(); ++i) {
      auto& row = merged[probe.times[i]];
      row.resize(runs.size(), std::numeric_limits<double>::quiet_NaN());
      row[r] = probe.values[i];
    }
  }
  {
    std::ofstream out((dir / "probe_compare.csv").string());
    out << "t";
    for (const std::string& label : labels) out << ',' << label;
    out << '\n';
    for (const auto& [t, row] : merged) {
      out << format_float(t);
      for (std::size_t r = 0; r < runs.size(); ++r) {
        out << ',';
        if (r < row.size() && !std::isnan(row[r])) out << format_float(row[r]);
      }
      out << '\n';
    }
  }

  nlohmann::json meta;
  meta["labels"] = labels;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    meta["configs"].push_back(config_to_json(configs[i]));
  }
  write_json((dir / "meta.json").string(), meta);
  return dir;
}

}  // namespace gpme
