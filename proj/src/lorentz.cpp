#include "axeuler/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "axeuler/kernel.hpp"

namespace axeuler::lorentz {

WeightedSamples::WeightedSamples(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw std::invalid_argument("weighted samples: length mismatch");
  values_.reserve(values.size());
  weights_.reserve(weights.size());
  for (std::size_t i = 0; i < values.size(); ++i) push_back(values[i], weights[i]);
}

void WeightedSamples::push_back(double value, double weight) {
  if (!std::isfinite(value)) throw std::invalid_argument("weighted samples: non-finite value");
  if (!(weight > 0.0) || !std::isfinite(weight)) throw std::invalid_argument("weighted samples: weights must be > 0");
  values_.push_back(std::abs(value));
  weights_.push_back(weight);
}

WeightedSamples WeightedSamples::scaled(double c) const {
  WeightedSamples out = *this;
  for (double& v : out.values_) v = std::abs(c * v);
  return out;
}

LorentzExponents::LorentzExponents(double p_, double q_) : p(p_), q(q_) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("Lorentz exponent p must be >= 1");
  if (!(q >= 1.0)) throw std::invalid_argument("Lorentz exponent q must be >= 1 or infinite");
}

WeightedSamples samples_from_field(const ScalarField& f, Dimension d) {
  const auto& g = f.grid;
  WeightedSamples out;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double w = measure_weight(g.r(i), d) * g.cell_area();
    for (std::size_t j = 0; j < g.nz(); ++j) out.push_back(f.at(i, j), w);
  }
  return out;
}

WeightedSamples transported_samples(const ScalarField& omega, Dimension d) {
  const auto& g = omega.grid;
  WeightedSamples out;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double rk = measure_weight(g.r(i), d);
    const double w = rk * g.cell_area();
    for (std::size_t j = 0; j < g.nz(); ++j) out.push_back(omega.at(i, j) / rk, w);
  }
  return out;
}

WeightedSamples resolved_transported_samples(const ScalarField& omega, Dimension d, int subdivisions,
                                             int axis_levels) {
  if (subdivisions < 1 || axis_levels < 1) throw std::invalid_argument("subdivision counts must be positive");
  const auto& g = omega.grid;
  const int k = d.weight_exponent();
  auto measure = [&](double a, double c) { return (std::pow(c, k + 1) - std::pow(a, k + 1)) / (k + 1) * g.hz(); };
  auto profile = [&](double a, double c) { return std::pow(0.5 * (a + c), 1 - k); };
  WeightedSamples out;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double lo = static_cast<double>(i) * g.hr();
    const double hi = lo + g.hr();
    std::vector<std::pair<double, double>> pieces;
    if (i == 0) {
      const double ratio = std::exp2(-1.0 / subdivisions);
      double c = hi;
      for (int l = 0; l < axis_levels * subdivisions; ++l, c *= ratio) {
        pieces.emplace_back(profile(ratio * c, c), measure(ratio * c, c));
      }
    } else {
      for (int l = 0; l < subdivisions; ++l) {
        const double a = lo + g.hr() * l / subdivisions;
        const double c = lo + g.hr() * (l + 1) / subdivisions;
        pieces.emplace_back(profile(a, c), measure(a, c));
      }
    }
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const double q = omega.at(i, j) / g.r(i);
      if (q == 0.0) continue;
      for (const auto& [v, w] : pieces) out.push_back(q * v, w);
    }
  }
  return out;
}

namespace {

using Pair = std::pair<double, double>;

// Descending by value, ties broken by descending weight, so the order (and
// every sum taken along it) is independent of the input permutation.
void canonical_sort(std::vector<Pair>& pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  });
}

std::vector<Pair> positive_pairs(const WeightedSamples& s) {
  std::vector<Pair> pairs;
  pairs.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.values()[i] > 0.0) pairs.emplace_back(s.values()[i], s.weights()[i]);
  return pairs;
}

StepDistribution step_from_sorted(const std::vector<Pair>& pairs) {
  StepDistribution out;
  double mass = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    mass += pairs[i].second;
    if (i + 1 == pairs.size() || pairs[i + 1].first != pairs[i].first) {
      out.levels.push_back(pairs[i].first);
      out.cumulative.push_back(mass);
    }
  }
  return out;
}

// sup_k v_k M_k^(1/p) over a canonically sorted pair list; returns (sup, level).
std::pair<double, double> weak_from_sorted(const std::vector<Pair>& pairs, double p) {
  double best = 0.0;
  double level = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    mass += pairs[i].second;
    if (i + 1 == pairs.size() || pairs[i + 1].first != pairs[i].first) {
      const double cand = pairs[i].first * std::pow(mass, 1.0 / p);
      if (cand > best) {
        best = cand;
        level = pairs[i].first;
      }
    }
  }
  return {best, level};
}

}  // namespace

StepDistribution step_distribution(const WeightedSamples& samples) {
  auto pairs = positive_pairs(samples);
  canonical_sort(pairs);
  return step_from_sorted(pairs);
}

double distribution_function(const WeightedSamples& samples, double tau) {
  if (tau < 0.0) throw std::invalid_argument("distribution_function: tau must be >= 0");
  auto pairs = positive_pairs(samples);
  canonical_sort(pairs);
  double mass = 0.0;
  for (const auto& [v, w] : pairs) {
    if (!(v > tau)) break;
    mass += w;
  }
  return mass;
}

double lorentz_quasinorm(const WeightedSamples& samples, LorentzExponents exps) {
  if (std::isinf(exps.q)) return weak_quasinorm(samples, exps.p);
  const auto step = step_distribution(samples);
  const double p = exps.p;
  const double q = exps.q;
  const double a = q / p;
  // Abel-summed step integral:
  //   int_0^inf t^(q-1) mu(t)^a dt = (1/q) sum_k v_k^q (M_k^a - M_{k-1}^a).
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < step.levels.size(); ++k) {
    const double m = step.cumulative[k];
    double increment;
    if (k == 0) {
      increment = std::pow(m, a);
    } else if (a == 1.0) {
      increment = m - prev;
    } else {
      increment = std::pow(prev, a) * std::expm1(a * std::log1p((m - prev) / prev));
    }
    sum += std::pow(step.levels[k], q) * increment;
    prev = m;
  }
  if (sum == 0.0) return 0.0;
  return std::pow(p, 1.0 / q) * std::pow(sum / q, 1.0 / q);
}

double weak_quasinorm(const WeightedSamples& samples, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("weak_quasinorm: p must be >= 1");
  auto pairs = positive_pairs(samples);
  canonical_sort(pairs);
  return weak_from_sorted(pairs, p).first;
}

double lp_norm(const WeightedSamples& samples, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += std::pow(samples.values()[i], p) * samples.weights()[i];
  return std::pow(sum, 1.0 / p);
}

WeakNormReport weak_norm_of_g(double a, double b, std::size_t resolution, double extent) {
  if (!(a > 0.0)) throw std::invalid_argument("weak_norm_of_g: a must be > 0");
  if (resolution < 64) throw std::invalid_argument("weak_norm_of_g: resolution must be >= 64");
  if (!(extent > 0.0)) throw std::invalid_argument("weak_norm_of_g: extent must be > 0");

  const CylGrid grid(extent, b - extent, b + extent, resolution, resolution);
  // Every cell whose closed footprint touches (a, b); up to four when (a, b) is a corner.
  const double slack = 1.0 + 1e-9;
  auto touches_singular = [&](std::size_t i, std::size_t j) {
    return std::abs(grid.r(i) - a) <= 0.5 * grid.hr() * slack && std::abs(grid.z(j) - b) <= 0.5 * grid.hz() * slack;
  };

  auto collect = [&](double max_radius2) {
    std::vector<Pair> pairs;
    pairs.reserve(grid.size());
    for (std::size_t i = 0; i < grid.nr(); ++i) {
      const double r = grid.r(i);
      const double w = r * r * grid.cell_area();
      for (std::size_t j = 0; j < grid.nz(); ++j) {
        if (touches_singular(i, j)) continue;
        const double dz = grid.z(j) - b;
        if (r * r + dz * dz > max_radius2) continue;
        pairs.emplace_back(kernel::g_kernel(a, b, r, grid.z(j)), w);
      }
    }
    canonical_sort(pairs);
    return pairs;
  };

  WeakNormReport report;
  report.resolution = resolution;
  report.extent = extent;
  {
    const auto pairs = collect(kInf);
    std::tie(report.value, report.tau_star) = weak_from_sorted(pairs, 2.0);
  }
  report.far_field_radius = std::sqrt(std::max(2.0 / report.tau_star, 4.0 * a * a));
  report.extent_sufficient = report.far_field_radius <= extent;
  {
    const auto pairs = collect(report.far_field_radius * report.far_field_radius);
    report.value_without_far_field = weak_from_sorted(pairs, 2.0).first;
  }
  report.far_field_relative_change = std::abs(report.value - report.value_without_far_field) / report.value;
  return report;
}

HolderPairing holder_pairing(const WeightedSamples& f, const WeightedSamples& g) {
  if (f.size() != g.size()) throw std::invalid_argument("holder_pairing: sample sets have different lengths");
  if (f.weights() != g.weights()) throw std::invalid_argument("holder_pairing: sample sets are not index-aligned");
  HolderPairing out;
  for (std::size_t i = 0; i < f.size(); ++i) out.lhs += f.values()[i] * g.values()[i] * f.weights()[i];
  out.rhs_product = lorentz_quasinorm(g, {2.0, 1.0}) * weak_quasinorm(f, 2.0);
  out.ratio = out.rhs_product > 0.0 ? out.lhs / out.rhs_product : 0.0;
  return out;
}

namespace {

bool converged(const std::vector<double>& seq, double tol) {
  if (seq.size() < 2) return true;
  const double last = seq.back();
  const double prev = seq[seq.size() - 2];
  if (last == 0.0 && prev == 0.0) return true;
  return std::abs(last - prev) <= tol * std::abs(last);
}

}  // namespace

IntersectionReport intersection_check(const WeightedSamples& samples, std::span<const double> radii, double p,
                                      double q, double r, const TruncationOptions& options) {
  if (!(1.0 <= p && p < q && q < r)) throw std::invalid_argument("intersection_check: need 1 <= p < q < r");
  if (radii.size() != samples.size()) throw std::invalid_argument("intersection_check: one radius per sample");
  if (!(options.initial_radius > 0.0) || !(options.growth > 1.0))
    throw std::invalid_argument("intersection_check: bad truncation options");

  IntersectionReport report;
  report.p = p;
  report.q = q;
  report.r = r;
  const double reach = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
  double radius = options.initial_radius;
  while (true) {
    WeightedSamples inside;
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (radii[i] <= radius) inside.push_back(samples.values()[i], samples.weights()[i]);
    report.radii.push_back(radius);
    report.norm_p.push_back(lp_norm(inside, p));
    report.norm_q1.push_back(lorentz_quasinorm(inside, {q, 1.0}));
    report.norm_r.push_back(lp_norm(inside, r));
    if (radius >= reach) break;
    radius *= options.growth;
  }
  report.p_converged = converged(report.norm_p, options.tolerance);
  report.q1_converged = converged(report.norm_q1, options.tolerance);
  report.r_converged = converged(report.norm_r, options.tolerance);
  return report;
}

WeightedSamples interpolated_majorant_samples(double c, const DecayOptions& options, std::vector<double>& radii) {
  WeightedSamples out;
  radii.clear();
  const int octaves = static_cast<int>(std::lround(std::log2(options.max_radius / options.min_radius)));
  const int n_rho = octaves * options.cells_per_octave;
  const double dphi = std::numbers::pi / options.angular_cells;
  for (int k = 0; k < n_rho; ++k) {
    const double lo = options.min_radius * std::exp2(static_cast<double>(k) / options.cells_per_octave);
    const double hi = options.min_radius * std::exp2(static_cast<double>(k + 1) / options.cells_per_octave);
    const double rho = 0.5 * (lo + hi);
    for (int m = 0; m < options.angular_cells; ++m) {
      const double phi = -0.5 * std::numbers::pi + (m + 0.5) * dphi;
      const double r = rho * std::cos(phi);
      const double value = c * std::pow(r, -4.0 / 3.0) * std::pow(1.0 + rho * rho, -2.0 / 3.0);
      out.push_back(value, r * r * rho * (hi - lo) * dphi);
      radii.push_back(hi);
    }
  }
  return out;
}

DecayReport decay_hypothesis_check(const ScalarField& omega, Dimension d, const DecayOptions& options) {
  if (d.value() != 4) throw std::invalid_argument("decay_hypothesis_check: only d = 4 is supported");
  const auto& g = omega.grid;
  const double z_mid = 0.5 * (g.z_min() + g.z_max());
  const double z_quarter = 0.25 * (g.z_max() - g.z_min());

  DecayReport report;
  double c1_inner = 0.0;
  double c2_inner = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double r = g.r(i);
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const double z = g.z(j);
      const double w = std::abs(omega.at(i, j));
      const double rho2 = r * r + z * z;
      const double c1 = w / r;
      const double c2 = w * (1.0 + rho2) * (1.0 + rho2);
      report.c_inverse_r = std::max(report.c_inverse_r, c1);
      report.c_decay = std::max(report.c_decay, c2);
      if (r <= 0.5 * g.r_max() && std::abs(z - z_mid) <= z_quarter) {
        c1_inner = std::max(c1_inner, c1);
        c2_inner = std::max(c2_inner, c2);
      }
    }
  }

  const double tol = options.boundary_growth_tolerance;
  const bool c1_ok = report.c_inverse_r <= c1_inner * (1.0 + tol);
  const bool c2_ok = report.c_decay <= c2_inner * (1.0 + tol);
  report.fit_ok = c1_ok && c2_ok;
  if (!c1_ok) report.reason = "omega/r^2 <= C/r: constant grows toward the truncation boundary";
  if (!c2_ok) {
    if (!report.reason.empty()) report.reason += "; ";
    report.reason += "omega/r^2 <= C/(r^2 (1+r^2+z^2)^2): constant grows toward the truncation boundary";
  }
  report.c_interpolated = std::cbrt(report.c_inverse_r * report.c_inverse_r * report.c_decay);

  if (report.fit_ok) {
    // min(a, b) <= a^(2/3) b^(1/3): the interpolated majorant must dominate every sample.
    for (std::size_t i = 0; i < g.nr() && report.fit_ok; ++i) {
      const double r = g.r(i);
      for (std::size_t j = 0; j < g.nz(); ++j) {
        const double z = g.z(j);
        const double lhs = std::abs(omega.at(i, j)) / (r * r);
        const double rhs = report.c_interpolated * std::pow(r, -4.0 / 3.0) * std::pow(1.0 + r * r + z * z, -2.0 / 3.0);
        if (lhs > rhs * (1.0 + 1e-12)) {
          report.fit_ok = false;
          report.reason = "interpolated majorant violated at a sample";
          break;
        }
      }
    }
  }

  std::vector<double> radii;
  const auto majorant = interpolated_majorant_samples(report.c_interpolated, options, radii);
  report.majorant = intersection_check(majorant, radii, 7.0 / 4.0, 2.0, 17.0 / 8.0, options.truncation);
  report.l21 = lorentz_quasinorm(resolved_transported_samples(omega, d), {2.0, 1.0});

  const bool norms_ok = report.majorant.p_converged && report.majorant.r_converged;
  if (report.fit_ok && !norms_ok) report.reason = "majorant L^{7/4} or L^{17/8} truncation sequence did not converge";
  report.passed = report.fit_ok && norms_ok && std::isfinite(report.l21);
  return report;
}

}  // namespace axeuler::lorentz
