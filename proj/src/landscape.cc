// Copyright 2026 The cqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cqc/landscape.h"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "cqc/bond_states.h"
#include "cqc/errors.h"
#include "cqc/noise_thresholds.h"
#include "json.hpp"

namespace cqc {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

void check_phi(double phi) {
  if (!(phi >= 0 && phi <= kQuarterPi + 1e-15)) throw ConfigError("phi outside [0, pi/4]");
}

std::string format(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

}  // namespace

LandscapeOptions::LandscapeOptions() : q_limit(distillation_threshold()) {}

std::string_view to_string(LandscapeClass c) {
  switch (c) {
    case LandscapeClass::kClassicalSeparable: return "classical-separable";
    case LandscapeClass::kClassicalStabilizer: return "classical-stabilizer";
    case LandscapeClass::kIntractable: return "intractable";
    case LandscapeClass::kUnresolved: return "unresolved";
  }
  return "unresolved";
}

double stabilizer_curve(double phi) {
  check_phi(phi);
  // stabilizer_amplitude is symmetric under theta -> pi/4 - theta, so h(phi) = amplitude(phi).
  double h = stabilizer_amplitude(phi);
  return (1 - std::pow(h, 4) / std::numbers::sqrt2) / 2;
}

double separable_curve(double phi) {
  check_phi(phi);
  // Only the two bonds leaving the chain direction must be separable, so each absorbs half the site noise.
  return (1 - std::pow(separable_amplitude(kQuarterPi - phi), 2)) / 2;
}

double intractable_curve(double phi, const LandscapeOptions& options) {
  check_phi(phi);
  double c4 = std::pow(std::cos(2 * phi), 4);
  if (c4 <= 0) return -1;
  double q = (1 - options.intractable_constant / c4) / 2;
  if (q < 0) return -1;
  return std::min(q, options.q_limit);
}

LandscapeClass classify(double phi, double q, const LandscapeOptions& options) {
  check_phi(phi);
  if (!(q >= 0 && q <= 0.5)) throw ConfigError("q outside [0, 1/2]");
  double amp = 1 - 2 * q;
  if (amp <= std::pow(stabilizer_amplitude(phi), 4) / std::numbers::sqrt2) return LandscapeClass::kClassicalStabilizer;
  if (amp <= std::pow(separable_amplitude(kQuarterPi - phi), 2)) return LandscapeClass::kClassicalSeparable;
  if (std::pow(std::cos(2 * phi), 4) * amp >= options.intractable_constant && q < options.q_limit) {
    return LandscapeClass::kIntractable;
  }
  return LandscapeClass::kUnresolved;
}

CurveCrossing classical_crossing() {
  auto gap = [](double phi) { return stabilizer_curve(phi) - separable_curve(phi); };
  const int steps = 4000;
  double lo = 0, g_lo = gap(0);
  for (int i = 1; i <= steps; ++i) {
    double hi = kQuarterPi * i / steps;
    double g_hi = gap(hi);
    if ((g_lo < 0) != (g_hi < 0)) {
      auto r = boost::math::tools::bisect(gap, lo, hi, boost::math::tools::eps_tolerance<double>(50));
      double phi = (r.first + r.second) / 2;
      return {phi, stabilizer_curve(phi)};
    }
    lo = hi;
    g_lo = g_hi;
  }
  throw std::runtime_error("classical curves do not cross");
}

LandscapeClass Landscape::at(std::size_t phi_index, std::size_t q_index) const {
  return classes.at(phi_index * q_grid.size() + q_index);
}

Landscape compute_landscape(std::span<const double> phi_grid, std::span<const double> q_grid,
                            const LandscapeOptions& options) {
  Landscape l;
  l.options = options;
  l.phi_grid.assign(phi_grid.begin(), phi_grid.end());
  l.q_grid.assign(q_grid.begin(), q_grid.end());
  for (double q : q_grid) {
    if (!(q >= 0 && q <= 0.5)) throw ConfigError("q grid outside [0, 1/2]");
  }
  l.classes.reserve(phi_grid.size() * q_grid.size());
  for (double phi : phi_grid) {
    for (double q : q_grid) l.classes.push_back(classify(phi, q, options));
    l.stabilizer.push_back({phi, stabilizer_curve(phi)});
    l.separable.push_back({phi, separable_curve(phi)});
    double qi = intractable_curve(phi, options);
    if (qi >= 0) l.intractable.push_back({phi, qi});
  }
  l.crossing = classical_crossing();
  return l;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = hi;
  return g;
}

std::string landscape_csv(const Landscape& l) {
  std::ostringstream out;
  out << "phi,q,class\n";
  for (std::size_t i = 0; i < l.phi_grid.size(); ++i) {
    for (std::size_t j = 0; j < l.q_grid.size(); ++j) {
      out << format(l.phi_grid[i]) << ',' << format(l.q_grid[j]) << ',' << to_string(l.at(i, j)) << '\n';
    }
  }
  return out.str();
}

std::string landscape_json(const Landscape& l) {
  auto curve = [](const std::vector<CurvePoint>& pts) {
    nlohmann::json phi = nlohmann::json::array(), q = nlohmann::json::array();
    for (const auto& p : pts) {
      phi.push_back(p.phi);
      q.push_back(p.q);
    }
    return nlohmann::json{{"phi", phi}, {"q", q}};
  };
  nlohmann::json j;
  j["schema_version"] = 1;
  j["q_limit"] = l.options.q_limit;
  j["intractable_constant"] = l.options.intractable_constant;
  j["curves"] = {{"stabilizer_mixture", curve(l.stabilizer)},
                 {"separable", curve(l.separable)},
                 {"intractable", curve(l.intractable)}};
  j["crossing"] = {{"phi", l.crossing.phi}, {"q", l.crossing.q}};
  return j.dump(2);
}

ConcurrenceGridCheck check_concurrence_boundary(std::size_t theta_points, std::size_t q_points, double band) {
  ConcurrenceGridCheck out;
  for (double theta : uniform_grid(0, kQuarterPi, theta_points)) {
    double closed = boundary_thresholds(theta).q_sep;
    out.max_boundary_deviation = std::max(out.max_boundary_deviation, std::abs(concurrence_boundary(theta) - closed));
    for (double q : uniform_grid(0, 0.5, q_points)) {
      double gap = (1 - 2 * q) - separable_amplitude(theta);
      if (std::abs(gap) < band) continue;
      ++out.points;
      bool zero = concurrence(bond_density_matrix(theta, q).rho) < 1e-7;
      if (zero != (gap < 0)) ++out.mismatches;
    }
  }
  return out;
}

}  // namespace cqc
