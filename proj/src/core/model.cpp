#include "core/model.hpp"

#include <cmath>

namespace atpqrm {

Bargmann bargmann_from_value(double q) {
  if (q == 0.25) return Bargmann::quarter;
  if (q == 0.75) return Bargmann::three_quarters;
  throw Error(ErrorCode::invalid_argument,
              "Bargmann index must be exactly 1/4 or 3/4, got " + std::to_string(q));
}

void validate(const ModelParams& p) {
  require(std::isfinite(p.delta) && p.delta >= 0.0, "delta must be finite and >= 0");
  require(std::isfinite(p.r) && p.r >= 0.0, "r must be finite and >= 0");
  require(std::isfinite(p.g) && p.g >= 0.0, "g must be finite and >= 0");
  require(p.parity == Parity::even || p.parity == Parity::odd, "parity must be +1 or -1");
}

double pole_energy(long n, Bargmann q, const BogoliubovFrame& f) {
  require(n >= 0, "pole index must be >= 0");
  return (static_cast<double>(n) + value(q)) * f.pole_spacing - 0.5;
}

double pole_energy(long n, const ModelParams& p) { return pole_energy(n, p.q, derive_frame(p)); }

CrossingPoint crossing_point(Bargmann q, double delta, double r) {
  require(std::isfinite(delta) && delta > 0.0, "crossing point needs delta > 0");
  require(std::isfinite(r) && r >= 0.0 && r < 1.0, "crossing point needs 0 <= r < 1");
  const double qv = value(q);
  CrossingPoint c;
  c.g0 = 0.5 * std::sqrt(delta / (qv * (1.0 - r * r)));
  const double u = delta / (4.0 * qv);
  const double a = 1.0 - u * (1.0 - r) / (1.0 + r);
  double b = 1.0 - u * (1.0 + r) / (1.0 - r);
  // At delta = delta_c the second factor vanishes; absorb rounding below zero.
  if (b < 0.0 && b > -64.0 * std::numeric_limits<double>::epsilon()) b = 0.0;
  const double gc = collapse_coupling(r);
  if (a * b >= 0.0) c.e0 = 2.0 * qv * std::sqrt(a * b) - 0.5;
  c.inside_physical_range =
      std::isfinite(c.e0) && b >= 0.0 && c.g0 <= gc * (1.0 + 64.0 * std::numeric_limits<double>::epsilon());
  return c;
}

double scaled_energy(double energy, Bargmann q, const BogoliubovFrame& f) {
  return (energy + 0.5) / f.pole_spacing - value(q);
}

std::string to_string(Bargmann q) { return q == Bargmann::quarter ? "1/4" : "3/4"; }

std::string to_string(Parity p) { return p == Parity::even ? "+" : "-"; }

}  // namespace atpqrm
