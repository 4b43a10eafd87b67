#pragma once

#include <cmath>

#include "deltafilter/errors.hpp"

namespace deltafilter {

/// Calorically perfect gas, p = (gamma - 1)(rho E - rho |v|^2 / 2).
struct GasModel {
  double gamma = 1.4;

  void validate() const {
    if (!(gamma > 1.0)) throw ConfigError("gamma", "specific-heat ratio must exceed 1");
  }
  double sound_speed(double rho, double p) const { return std::sqrt(gamma * p / rho); }
};

struct Primitive1D {
  double rho = 0.0;
  double u = 0.0;
  double p = 0.0;
};

struct Primitive2D {
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;
};

struct Conserved1D {
  double rho = 0.0;
  double mom = 0.0;
  double energy = 0.0;
};

struct Conserved2D {
  double rho = 0.0;
  double mom_x = 0.0;
  double mom_y = 0.0;
  double energy = 0.0;
};

inline Conserved1D to_conserved(const Primitive1D& w, const GasModel& gas) {
  return {w.rho, w.rho * w.u, w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.u * w.u};
}

inline Primitive1D to_primitive(const Conserved1D& q, const GasModel& gas) {
  const double u = q.mom / q.rho;
  return {q.rho, u, (gas.gamma - 1.0) * (q.energy - 0.5 * q.mom * u)};
}

inline Conserved2D to_conserved(const Primitive2D& w, const GasModel& gas) {
  return {w.rho, w.rho * w.u, w.rho * w.v, w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v)};
}

inline Primitive2D to_primitive(const Conserved2D& q, const GasModel& gas) {
  const double u = q.mom_x / q.rho;
  const double v = q.mom_y / q.rho;
  return {q.rho, u, v, (gas.gamma - 1.0) * (q.energy - 0.5 * (q.mom_x * u + q.mom_y * v))};
}

}  // namespace deltafilter
