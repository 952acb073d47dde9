#include "memsosc/pierce.hpp"

#include <cmath>
#include <sstream>

#include "memsosc/constants.hpp"
#include "memsosc/error.hpp"

namespace memsosc {

namespace {

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << v << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

}  // namespace

void PierceCapacitors::validate() const {
  require_positive(c1, "C1");
  require_positive(c2, "C2");
  require_positive(c0, "C0");
}

void PierceConfig::validate() const {
  caps.validate();
  require_positive(gm, "gm");
  require_positive(f0, "f0");
}

std::complex<double> pierce_impedance(const PierceConfig& cfg) {
  using namespace std::complex_literals;
  const double w = kTwoPi * cfg.f0;
  const auto& c = cfg.caps;
  const std::complex<double> num = cfg.gm + 1i * w * (c.c1 + c.c2);
  const std::complex<double> den = w * (w * c.pair_sum() - 1i * c.c0 * cfg.gm);
  return -num / den;
}

double negative_resistance(const PierceConfig& cfg) {
  const double w = kTwoPi * cfg.f0;
  const auto& c = cfg.caps;
  const double gc0 = cfg.gm * c.c0;
  const double ws = w * c.pair_sum();
  return cfg.gm * c.c1 * c.c2 / (gc0 * gc0 + ws * ws);
}

NegativeResistanceMax max_negative_resistance(const PierceCapacitors& caps, double f0) {
  caps.validate();
  require_positive(f0, "f0");
  const double w = kTwoPi * f0;
  const double s = caps.pair_sum();
  return {caps.c1 * caps.c2 / (2.0 * w * caps.c0 * s), w * s / caps.c0};
}

std::vector<double> required_gm(const PierceCapacitors& caps, double f0, double target) {
  require_positive(target, "target negative resistance");
  // target C0^2 gm^2 - C1 C2 gm + target w^2 S^2 = 0
  const double w = kTwoPi * f0;
  const double ws = w * caps.pair_sum();
  const double a = target * caps.c0 * caps.c0;
  const double b = caps.c1 * caps.c2;  // magnitude of the (negative) linear term
  const double c = target * ws * ws;
  const double disc = b * b - 4.0 * a * c;
  constexpr double kDoubleRootTolerance = 1e-12;
  if (disc < -kDoubleRootTolerance * b * b) return {};
  if (disc <= kDoubleRootTolerance * b * b) return {b / (2.0 * a)};
  const double q = 0.5 * (b + std::sqrt(disc));
  return {c / q, q / a};
}

StartupReport startup_check(double neg_resistance, double rx) {
  require_positive(rx, "R_x");
  StartupReport r;
  r.neg_resistance = std::abs(neg_resistance);
  r.rx = rx;
  r.margin = r.neg_resistance / rx;
  r.oscillates = r.margin > 1.0;
  r.meets_3x = r.margin >= kStartupMargin;
  return r;
}

std::vector<LocusPoint> impedance_locus(const PierceCapacitors& caps, double f0,
                                        std::span<const double> gm_samples) {
  std::vector<LocusPoint> out;
  out.reserve(gm_samples.size());
  for (double gm : gm_samples) {
    require_positive(gm, "locus gm sample");
    const auto z = pierce_impedance({caps, gm, f0});
    out.push_back({gm, -z.real(), z.imag()});
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  require_positive(lo, "grid start");
  require_positive(hi, "grid end");
  if (n < 2) throw Error(ErrorKind::invalid_input, "log grid needs at least two points");
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace memsosc
