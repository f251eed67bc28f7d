#pragma once

// Integral kernels of the axisymmetric Biot-Savart law.
//
//   H(s) = int_{-1}^{1} tau / (1 - s tau)^2 dtau,   0 <= s < 1,
//
// the inner tau-integral of the velocity reconstruction for general d, and
// the comparison kernel g_{a,b} used in the weak-norm estimate.

#include <limits>

#include "axeuler/core_fields.hpp"

namespace axeuler::kernel {

struct KernelParams {
  explicit KernelParams(Dimension dim = kDefaultDimension, int tau_order = 32, double epsilon = 0.0,
                        double r_cut = std::numeric_limits<double>::infinity(),
                        double z_cut = std::numeric_limits<double>::infinity());

  Dimension d;
  int tau_order;
  /// Blob regularization length; 0 selects diagonal-cell exclusion.
  double epsilon;
  /// Sources with rbar > r_cut or |zbar - z| > z_cut are ignored.
  double r_cut;
  double z_cut;
  /// For d = 4 evaluate the tau-integrals in closed form instead of by quadrature.
  bool closed_form_d4 = true;
};

/// Gauss-Legendre approximation of H(s) with `order` nodes. The rule is
/// applied in the variable v = log(1 - s tau), where the integrand becomes
/// the entire function expm1(-v) / s^2; this keeps spectral accuracy as the
/// pole at tau = 1/s approaches the interval.
double h_quad(double s, int order);

/// Closed form
///   H(s) = (2 s / (1 - s^2) - log((1 + s) / (1 - s))) / s^2,
/// with the power series sum_{k>=1} 4k/(2k+1) s^(2k-1) below kHSeriesSwitch.
double h_closed(double s);

/// Same as h_closed(s) but with 1 - s supplied separately, for callers that
/// can form it without cancellation.
double h_closed(double s, double one_minus_s);

inline constexpr double kHSeriesSwitch = 0.05;

/// Upper bound 4 s / (1 - s).
double h_upper_bound(double s);

enum class Component {
  Radial,    // tau factor (u_r numerator)
  Vertical,  // (r tau - rbar) factor (u_z numerator)
};

/// Inner integral
///   int_{-1}^{1} F(tau) (1 - tau^2)^((d-4)/2) / (r^2 + rbar^2 - 2 r rbar tau + dz^2 + eps^2)^(d/2) dtau
/// with F = tau (Radial) or r tau - rbar (Vertical).
///
/// Well-separated configurations use Gauss-Chebyshev (d = 3), Gauss-Legendre
/// in tau (d = 4) or Gauss-Legendre in theta = acos(tau) (d >= 5). When the
/// denominator nearly vanishes at tau = 1 the integral is taken in theta on
/// panels graded geometrically away from theta = 0, `order` nodes per panel.
double tau_kernel(Dimension d, double r, double rbar, double dz, Component which, int order, double epsilon = 0.0);

/// Closed forms of the d = 4 tau-integrals.
struct TauPair {
  double radial;
  double vertical;
};
TauPair tau_kernel_d4(double r, double rbar, double dz, double epsilon = 0.0);

/// g_{a,b}(r, z) = 1 / (sqrt(a^2 + r^2 + (z-b)^2) sqrt((r-a)^2 + (z-b)^2)).
double g_kernel(double a, double b, double r, double z);

}  // namespace axeuler::kernel
