#pragma once
// Stand-alone reference computations used to cross-check the library. They
// deliberately avoid calling into memsosc so a shared mistake cannot hide.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEps0 = 8.854e-12;

/// Reported design table, SI units.
struct TableColumn {
  bool clamped_clamped;
  double length, width, electrode;  // L, H, W_e
  double f0, v_pi, ix, z, re, re_max, rx, lx, cx;
};

inline constexpr double kStack = 4.8e-6;
inline constexpr double kGap = 1.2e-6;
inline constexpr double kE = 63e9;

inline const TableColumn kTable[3] = {
    {false, 100e-6, 2e-6, 75e-6, 75.9e3, 9.8, 3.4e-9, 161.1e-9, 64.7e6, 103.8e6, 717.0e3, 6013.7,
     731.1e-18},
    {false, 60e-6, 1e-6, 45e-6, 105.4e3, 9.7, 2.9e-9, 171.2e-9, 33.6e6, 74.7e6, 737.6e3, 5011.5,
     454.8e-18},
    {true, 100e-6, 1e-6, 80e-6, 303.6e3, 26.9, 1.5e-9, 22.0e-9, 4.7e6, 25.9e6, 1008.3e3, 2642.8,
     104.0e-18},
};

/// Beam stiffness from a unit tip/centre load on an Euler-Bernoulli beam:
/// delta = P L^3 / (3 E I) for a cantilever and P L^3 / (192 E I) for
/// clamped-clamped.
inline double stiffness(const TableColumn& c) {
  const double inertia = kStack * c.width * c.width * c.width / 12.0;
  const double coeff = c.clamped_clamped ? 192.0 : 3.0;
  return 1.0 / (std::pow(c.length, 3) / (coeff * kE * inertia));
}

/// Bisection on a bracketing interval with a relative stopping rule, so tiny
/// roots (femtofarads) converge as well as large ones.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double rel_tol = 1e-13) {
  double flo = f(lo);
  for (int i = 0; i < 400 && (hi - lo) > rel_tol * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section minimum of a unimodal function.
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while ((b - a) > rel_tol * std::abs(b)) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Impedance between gate and drain of the Pierce network by nodal analysis:
/// C1 gate-ground, C2 drain-ground, C0 gate-drain, drain current gm * v_gate
/// to ground. A unit test current enters the gate and leaves the drain.
inline std::complex<double> pierce_port_impedance(double c1, double c2, double c0, double gm,
                                                  double f) {
  const std::complex<double> j(0.0, 1.0);
  const double w = 2.0 * kPi * f;
  // [a b; c d] [v1; v2] = [1; -1]
  const std::complex<double> a = j * w * (c1 + c0), b = -j * w * c0;
  const std::complex<double> c = -j * w * c0 + gm, d = j * w * (c2 + c0);
  const std::complex<double> det = a * d - b * c;
  const std::complex<double> v1 = (d * 1.0 - b * -1.0) / det;
  const std::complex<double> v2 = (a * -1.0 - c * 1.0) / det;
  return v1 - v2;
}

/// Uniform draw on [lo, hi] in log space.
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace oracle
