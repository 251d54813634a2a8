#include "gpme/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gpme {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_snapshot_csv(const std::string& path, const Grid1D& grid, const Field& field) {
  std::ofstream out = open_out(path);
  out << "x,p\n";
  for (int i = 0; i <= grid.n_intervals; ++i) {
    out << format_float(grid.node(i)) << ',' << format_float(field.values[i]) << '\n';
  }
}

void write_probe_csv(const std::string& path, const ProbeSeries& series) {
  std::ofstream out = open_out(path);
  out << "t,p\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_float(series.times[i]) << ',' << format_float(series.values[i]) << '\n';
  }
}

void write_predictor_csv(const std::string& path, const PredictorSeries& series) {
  std::ofstream out = open_out(path);
  out << "t,min_effective_diffusion,n_violating_nodes\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_float(series.times[i]) << ','
        << format_float(series.min_effective_diffusion[i]) << ',' << series.violating_counts[i]
        << '\n';
  }
}

void write_convergence_csv(const std::string& path, const ConvergenceReport& report) {
  std::ofstream out = open_out(path);
  out << "N,l1,l2,linf\n";
  for (std::size_t i = 0; i < report.resolutions.size(); ++i) {
    out << report.resolutions[i] << ',' << format_float(report.l1[i]) << ','
        << format_float(report.l2[i]) << ',' << format_float(report.linf[i]) << '\n';
  }
}

std::pair<std::vector<double>, std::vector<double>> read_xy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("malformed CSV row in " + path);
    xs.push_back(std::stod(line.substr(0, comma)));
    ys.push_back(std::stod(line.substr(comma + 1)));
  }
  return {std::move(xs), std::move(ys)};
}

nlohmann::json oscillation_to_json(const OscillationReport& report) {
  return {
      {"n_maxima", report.n_maxima},
      {"n_minima", report.n_minima},
      {"max_amplitude", report.max_amplitude},
      {"period_estimate", report.period_estimate},
      {"minima_times", report.minima_times},
  };
}

nlohmann::json convergence_to_json(const ConvergenceReport& report) {
  return {
      {"scheme", report.scheme},
      {"resolutions", report.resolutions},
      {"l1", report.l1},
      {"l2", report.l2},
      {"linf", report.linf},
      {"order_l1", report.order_l1},
      {"order_l2", report.order_l2},
      {"order_linf", report.order_linf},
  };
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

}  // namespace gpme
