#include "axeuler/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "axeuler/quadrature.hpp"

namespace axeuler::kernel {

KernelParams::KernelParams(Dimension dim, int order, double eps, double rc, double zc)
    : d(dim), tau_order(order), epsilon(eps), r_cut(rc), z_cut(zc) {
  if (tau_order < 4) throw std::invalid_argument("kernel: tau_order must be >= 4");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("kernel: epsilon must be >= 0");
  if (!(r_cut > 0.0) || !(z_cut > 0.0)) throw std::invalid_argument("kernel: truncation radii must be > 0");
}

namespace {

void check_s(double s) {
  if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("H(s) requires 0 <= s < 1, got " + std::to_string(s));
}

double h_series(double s) {
  // sum_{k>=1} 4k/(2k+1) s^(2k-1); terms shrink by s^2 <= 0.0025.
  const double s2 = s * s;
  double term = s;
  double sum = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double add = 4.0 * k / (2.0 * k + 1.0) * term;
    sum += add;
    if (add <= 1e-18 * sum) break;
    term *= s2;
  }
  return sum;
}

}  // namespace

double h_quad(double s, int order) {
  check_s(s);
  if (s == 0.0) return 0.0;
  const auto rule = quadrature::gauss_legendre(order);
  const double inv_s2 = 1.0 / (s * s);
  return quadrature::integrate(*rule, std::log1p(-s), std::log1p(s),
                               [&](double v) { return std::expm1(-v) * inv_s2; });
}

double h_closed(double s, double one_minus_s) {
  check_s(s);
  if (s < kHSeriesSwitch) return h_series(s);
  const double rational = 2.0 * s / (one_minus_s * (1.0 + s));
  const double log_ratio = std::log1p(s) - std::log(one_minus_s);
  return (rational - log_ratio) / (s * s);
}

double h_closed(double s) { return h_closed(s, 1.0 - s); }

double h_upper_bound(double s) {
  check_s(s);
  return 4.0 * s / (1.0 - s);
}

namespace {

double numerator(Component which, double r, double rbar, double tau) {
  return which == Component::Radial ? tau : r * tau - rbar;
}

// Integrand in theta = acos(tau); the Jacobian sin(theta) combines with
// (1 - tau^2)^((d-4)/2) into sin(theta)^(d-3).
struct ThetaIntegrand {
  int d;
  double r, rbar, gap, b;
  Component which;

  double operator()(double theta) const {
    const double half = std::sin(0.5 * theta);
    const double den = gap + 2.0 * b * half * half;
    const double sin_t = std::sin(theta);
    return numerator(which, r, rbar, std::cos(theta)) * std::pow(sin_t, d - 3) / std::pow(den, 0.5 * d);
  }
};

constexpr double kGradingThreshold = 1.0;

}  // namespace

double tau_kernel(Dimension dim, double r, double rbar, double dz, Component which, int order, double epsilon) {
  if (order < 1) throw std::invalid_argument("tau_kernel: order must be >= 1");
  if (r < 0.0 || rbar < 0.0) throw std::invalid_argument("tau_kernel: radii must be >= 0");
  if (epsilon < 0.0) throw std::invalid_argument("tau_kernel: epsilon must be >= 0");
  const double gap = (r - rbar) * (r - rbar) + dz * dz + epsilon * epsilon;
  if (gap == 0.0) throw std::domain_error("tau_kernel: singular diagonal r = rbar, dz = 0 needs epsilon > 0");
  if (which == Component::Radial && r == 0.0) return 0.0;

  const int d = dim.value();
  const double b = 2.0 * r * rbar;
  const double delta = b > 0.0 ? gap / b : std::numeric_limits<double>::infinity();
  // A - B tau, written as gap + B (1 - tau) to keep the near-diagonal small difference exact.
  auto den_tau = [&](double tau) { return gap + b * (1.0 - tau); };

  if (delta >= kGradingThreshold) {
    if (d == 3) {
      const auto rule = quadrature::gauss_chebyshev(order);
      double sum = 0.0;
      for (std::size_t k = 0; k < rule->size(); ++k) {
        const double tau = rule->nodes[k];
        const double den = den_tau(tau);
        sum += rule->weights[k] * numerator(which, r, rbar, tau) / (den * std::sqrt(den));
      }
      return sum;
    }
    if (d == 4) {
      const auto rule = quadrature::gauss_legendre(order);
      return quadrature::integrate(*rule, -1.0, 1.0, [&](double tau) {
        const double den = den_tau(tau);
        return numerator(which, r, rbar, tau) / (den * den);
      });
    }
    const auto rule = quadrature::gauss_legendre(order);
    return quadrature::integrate(*rule, 0.0, std::numbers::pi, ThetaIntegrand{d, r, rbar, gap, b, which});
  }

  // Near-singular: the denominator behaves like B (delta + theta^2 / 2) near
  // theta = 0, so panels start at the width sqrt(2 delta) and double.
  const auto rule = quadrature::gauss_legendre(order);
  const ThetaIntegrand f{d, r, rbar, gap, b, which};
  double lo = 0.0;
  double hi = std::sqrt(2.0 * delta);
  double sum = 0.0;
  while (lo < std::numbers::pi) {
    hi = std::min(hi, std::numbers::pi);
    sum += quadrature::integrate(*rule, lo, hi, f);
    lo = hi;
    hi *= 2.0;
  }
  return sum;
}

TauPair tau_kernel_d4(double r, double rbar, double dz, double epsilon) {
  const double eps2 = epsilon * epsilon;
  const double gap = (r - rbar) * (r - rbar) + dz * dz + eps2;
  if (gap == 0.0) throw std::domain_error("tau_kernel_d4: singular diagonal r = rbar, dz = 0 needs epsilon > 0");
  const double a = r * r + rbar * rbar + dz * dz + eps2;
  const double b = 2.0 * r * rbar;
  const double s = std::min(b / a, std::nextafter(1.0, 0.0));
  const double radial = h_closed(s, gap / a) / (a * a);
  // int (A - B tau)^-2 dtau over [-1, 1] = 2 / (A^2 - B^2).
  const double flat = 2.0 / (gap * (a + b));
  return {radial, r * radial - rbar * flat};
}

double g_kernel(double a, double b, double r, double z) {
  if (!(a > 0.0)) throw std::invalid_argument("g_kernel: a must be > 0");
  const double dz = z - b;
  const double near = (r - a) * (r - a) + dz * dz;
  if (near == 0.0) throw std::domain_error("g_kernel: evaluation at the singular point (a, b)");
  return 1.0 / (std::sqrt(a * a + r * r + dz * dz) * std::sqrt(near));
}

}  // namespace axeuler::kernel
