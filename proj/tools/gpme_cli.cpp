// Command-line driver for the GPME finite-volume laboratory.
//
// Subcommands:
//   run          one simulation; writes snapshots, probe series, oscillation
//                report and predictor series into <out>/<run-id>/
//   convergence  grid sweep against the fine-grid reference (or the exact
//                locking-problem solution); writes per-scheme reports
//   compare      several schemes on one grid; writes overlay CSVs
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gpme/cli.hpp"
#include "gpme/errors.hpp"

namespace {

struct FlagBuffer {
  std::string config_file;
  nlohmann::json overrides = nlohmann::json::object();
};

// Every flag writes into a JSON override object; the file (when given) fills
// the gaps so that flags always win.
void add_common_flags(CLI::App* cmd, FlagBuffer& buf) {
  cmd->add_option("--config", buf.config_file, "JSON config file (flags override it)");

  auto opt = [&buf, cmd](const std::string& flag, const std::string& key,
                         const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&buf, key](const std::string& v) { buf.overrides[key] = std::stod(v); }, help);
  };
  auto opt_int = [&buf, cmd](const std::string& flag, const std::string& key,
                             const std::string& help) {
    cmd->add_option_function<int>(
        flag, [&buf, key](int v) { buf.overrides[key] = v; }, help);
  };
  auto opt_str = [&buf, cmd](const std::string& flag, const std::string& key,
                             const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&buf, key](const std::string& v) { buf.overrides[key] = v; }, help);
  };
  auto opt_bool = [&buf, cmd](const std::string& flag, const std::string& key,
                              const std::string& help) {
    cmd->add_flag_function(
        flag, [&buf, key](std::int64_t count) { buf.overrides[key] = count > 0; }, help);
  };

  opt_str("--model", "model", "coefficient model: pme | superslow | linear");
  opt("--m", "m", "PME exponent (>= 1)");
  opt_str("--preset", "preset", "initial condition: front | linear | tlp");
  opt("--front-left", "front_left", "front preset left value");
  opt("--front-right", "front_right", "front preset background value");
  opt("--front-support", "front_support", "front preset ramp support");
  opt("--front-exponent", "front_exponent", "front preset ramp exponent");
  opt("--tlp-background", "tlp_background", "locking-problem background value");
  opt_int("--n", "n", "number of grid intervals");
  opt_str("--avg", "averaging", "face average: arithmetic | harmonic");
  opt_bool("--mhm", "mhm", "enable the modified-harmonic correction");
  opt_str("--mhm-mode", "mhm_mode", "correction terms: full | term1 | term2");
  opt_bool("--mhm-local", "mhm_local", "apply the correction only where the predictor is negative");
  opt_str("--integrator", "integrator", "time scheme: fe | be | rk2");
  opt("--dt-factor", "dt_factor", "dt = dx^2/factor (dx2) or dx*factor (dx); 0 = default");
  opt_str("--dt-power", "dt_power", "time-step rule: dx2 | dx");
  opt("--t-end", "t_end", "final time");
  opt_int("--picard-max-iters", "picard_max_iters", "backward Euler Picard iteration cap");
  opt("--picard-tol", "picard_tol", "backward Euler Picard tolerance");
  opt_bool("--allow-unstable", "allow_unstable", "skip the explicit stability guard");
  opt("--probe", "probe_x", "probe location for the time series");
  opt_int("--probe-stride", "probe_stride", "record every k-th step");
  opt("--noise-floor", "noise_floor", "extrema detection noise floor");
  opt_str("--out", "out_dir", "output directory");
  opt_str("--cache", "cache_dir", "reference cache directory");
  opt_str("--label", "label", "column label for compare output");

  cmd->add_option_function<std::vector<double>>(
      "--snapshot",
      [&buf](const std::vector<double>& v) { buf.overrides["snapshots"] = v; },
      "snapshot time (repeatable)");
}

gpme::RunConfig resolve(const FlagBuffer& buf) {
  nlohmann::json merged = nlohmann::json::object();
  if (!buf.config_file.empty()) {
    std::ifstream in(buf.config_file);
    if (!in) throw gpme::ConfigError("cannot open config file " + buf.config_file);
    try {
      merged = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
      throw gpme::ConfigError("config file " + buf.config_file + ": " + err.what());
    }
  }
  for (const auto& item : buf.overrides.items()) merged[item.key()] = item.value();
  return gpme::config_from_json(merged);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D finite-volume laboratory for degenerate nonlinear diffusion"};
  app.require_subcommand(1);

  FlagBuffer run_buf;
  CLI::App* run_cmd = app.add_subcommand("run", "run one configuration");
  add_common_flags(run_cmd, run_buf);
  bool no_predictor = false;
  run_cmd->add_flag("--no-predictor", no_predictor, "skip the predictor series");

  FlagBuffer conv_buf;
  CLI::App* conv_cmd = app.add_subcommand("convergence", "grid-refinement error sweep");
  add_common_flags(conv_cmd, conv_buf);
  conv_cmd->add_option_function<std::vector<int>>(
      "--resolutions",
      [&conv_buf](const std::vector<int>& v) { conv_buf.overrides["resolutions"] = v; },
      "resolutions, e.g. --resolutions 100 200 400 800");
  conv_cmd->add_option_function<std::vector<std::string>>(
      "--schemes",
      [&conv_buf](const std::vector<std::string>& v) { conv_buf.overrides["schemes"] = v; },
      "schemes to sweep: arithmetic harmonic mhm");
  conv_cmd->add_option_function<int>(
      "--reference-n",
      [&conv_buf](int v) { conv_buf.overrides["reference_n"] = v; },
      "reference resolution (default 3200)");

  std::vector<std::string> compare_files;
  std::string compare_out = "out";
  CLI::App* cmp_cmd = app.add_subcommand("compare", "overlay several schemes");
  cmp_cmd->add_option("configs", compare_files, "JSON config files")->required();
  cmp_cmd->add_option("--out", compare_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      gpme::RunConfig config = resolve(run_buf);
      if (no_predictor) config.predictor = false;
      const auto dir = gpme::cmd_run(config);
      std::cout << "wrote " << dir.string() << "\n";
    } else if (conv_cmd->parsed()) {
      const auto dir = gpme::cmd_convergence(resolve(conv_buf));
      std::cout << "wrote " << dir.string() << "\n";
    } else if (cmp_cmd->parsed()) {
      std::vector<gpme::RunConfig> configs;
      for (const std::string& file : compare_files) {
        FlagBuffer buf;
        buf.config_file = file;
        configs.push_back(resolve(buf));
      }
      const auto dir = gpme::cmd_compare(configs, compare_out);
      std::cout << "wrote " << dir.string() << "\n";
    }
  } catch (const gpme::NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return 3;
  } catch (const gpme::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::domain_error& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}
