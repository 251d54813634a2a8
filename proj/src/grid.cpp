#include "gpme/grid.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gpme/errors.hpp"

namespace gpme {

Grid1D Grid1D::uniform(int n_intervals, double x_left, double x_right) {
  if (n_intervals < 4) {
    throw ConfigError("grid needs at least 4 intervals, got " + std::to_string(n_intervals));
  }
  if (!(x_right > x_left)) {
    throw ConfigError("grid requires x_right > x_left");
  }
  Grid1D g;
  g.n_intervals = n_intervals;
  g.x_left = x_left;
  g.x_right = x_right;
  g.dx = (x_right - x_left) / n_intervals;
  return g;
}

int Grid1D::nearest_node(double x) const {
  const double s = (x - x_left) / dx;
  int i = static_cast<int>(std::lround(s));
  if (i < 0) i = 0;
  if (i > n_intervals) i = n_intervals;
  return i;
}

int Grid1D::stride_to(const Grid1D& fine) const {
  const double span = x_right - x_left;
  if (std::abs(fine.x_left - x_left) > 1e-12 * span ||
      std::abs(fine.x_right - x_right) > 1e-12 * span) {
    throw std::invalid_argument("grids cover different domains");
  }
  if (fine.n_intervals < n_intervals || fine.n_intervals % n_intervals != 0) {
    throw std::invalid_argument("grids are not nested: " + std::to_string(fine.n_intervals) +
                                " vs " + std::to_string(n_intervals));
  }
  return fine.n_intervals / n_intervals;
}

InitialPreset InitialPreset::front(double p_left, double p_right, double support,
                                   double exponent) {
  InitialPreset p;
  p.kind = InitialPresetKind::Front;
  p.front_left = p_left;
  p.front_right = p_right;
  p.front_support = support;
  p.front_exponent = exponent;
  return p;
}

InitialPreset InitialPreset::linear() {
  InitialPreset p;
  p.kind = InitialPresetKind::Linear;
  return p;
}

InitialPreset InitialPreset::constant_tlp(double background) {
  InitialPreset p;
  p.kind = InitialPresetKind::ConstantTlp;
  p.tlp_background = background;
  return p;
}

std::string InitialPreset::name() const {
  switch (kind) {
    case InitialPresetKind::Front: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "front(pl=%g,pr=%g,xc=%g,q=%g)", front_left, front_right,
                    front_support, front_exponent);
      return buf;
    }
    case InitialPresetKind::Linear:
      return "linear";
    case InitialPresetKind::ConstantTlp: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "tlp(h0=%g)", tlp_background);
      return buf;
    }
  }
  return "?";
}

namespace {

double front_profile(const InitialPreset& p, double x) {
  const double s = 1.0 - x / p.front_support;
  if (s <= 0.0) return p.front_right;
  return p.front_right + (p.front_left - p.front_right) * std::pow(s, p.front_exponent);
}

}  // namespace

Field build_initial(const ProblemSetup& setup) {
  const Grid1D& g = setup.grid;
  Field f;
  f.values.resize(g.n_nodes());
  f.time = 0.0;

  switch (setup.initial.kind) {
    case InitialPresetKind::Front:
      for (int i = 0; i <= g.n_intervals; ++i) {
        f.values[i] = front_profile(setup.initial, g.node(i));
      }
      break;
    case InitialPresetKind::Linear: {
      const double gl = setup.bc_left(0.0);
      const double gr = setup.bc_right(0.0);
      const double span = g.x_right - g.x_left;
      for (int i = 0; i <= g.n_intervals; ++i) {
        f.values[i] = gl + (gr - gl) * (g.node(i) - g.x_left) / span;
      }
      break;
    }
    case InitialPresetKind::ConstantTlp:
      for (double& v : f.values) v = setup.initial.tlp_background;
      break;
  }

  // The locking-problem background keeps its O(h0) kink against the analytic
  // left boundary value; the other presets must match the Dirichlet data.
  if (setup.initial.kind != InitialPresetKind::ConstantTlp) {
    const double el = std::abs(f.values.front() - setup.bc_left(0.0));
    const double er = std::abs(f.values.back() - setup.bc_right(0.0));
    if (el > 1e-12 || er > 1e-12) {
      throw ConfigError("initial preset " + setup.initial.name() +
                        " is inconsistent with the boundary data at t = 0");
    }
  }

  apply_bc(f, setup, 0.0);
  return f;
}

void apply_bc(Field& field, const ProblemSetup& setup, double t) {
  field.values.front() = setup.bc_left(t);
  field.values.back() = setup.bc_right(t);
}

namespace {

ProblemSetup finish_setup(ProblemSetup setup) {
  setup.family_key = setup.model.name() + "|" + setup.initial.name() + "|[" +
                     std::to_string(setup.grid.x_left) + "," +
                     std::to_string(setup.grid.x_right) + "]";
  return setup;
}

}  // namespace

ProblemSetup make_front_problem(const CoefficientModel& model, int n_intervals,
                                const InitialPreset& preset) {
  ProblemSetup s;
  s.grid = Grid1D::uniform(n_intervals);
  s.model = model;
  s.initial = preset;
  const double pl = preset.front_left;
  const double pr = preset.front_right;
  s.bc_left = [pl](double) { return pl; };
  s.bc_right = [pr](double) { return pr; };
  s.with_resolution = [model, preset](int n) { return make_front_problem(model, n, preset); };
  return finish_setup(std::move(s));
}

ProblemSetup make_linear_problem(const CoefficientModel& model, int n_intervals,
                                 double left, double right) {
  ProblemSetup s;
  s.grid = Grid1D::uniform(n_intervals);
  s.model = model;
  s.initial = InitialPreset::linear();
  s.bc_left = [left](double) { return left; };
  s.bc_right = [right](double) { return right; };
  s.with_resolution = [model, left, right](int n) {
    return make_linear_problem(model, n, left, right);
  };
  return finish_setup(std::move(s));
}

ProblemSetup make_tlp_problem(int n_intervals, double background) {
  ProblemSetup s;
  s.grid = Grid1D::uniform(n_intervals);
  s.model = CoefficientModel::pme(3.0);
  s.initial = InitialPreset::constant_tlp(background);
  s.bc_left = [](double t) { return std::cbrt(3.0 * t); };
  s.bc_right = [background](double) { return background; };
  s.with_resolution = [background](int n) { return make_tlp_problem(n, background); };
  return finish_setup(std::move(s));
}

}  // namespace gpme
