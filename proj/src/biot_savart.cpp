#include "axeuler/biot_savart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "axeuler/lorentz.hpp"

namespace axeuler::biot_savart {

namespace {

struct Contribution {
  double ur;
  double uz;
};

// Kernel of one source at one target, without the (d-2)/(2 pi) prefactor.
Contribution contribution(const Source& s, Point t, const KernelParams& p) {
  const double dz = s.z - t.z;
  if (s.r > p.r_cut || std::abs(dz) > p.z_cut) return {0.0, 0.0};
  if (p.d.value() == 4 && p.closed_form_d4) {
    const auto k = kernel::tau_kernel_d4(t.r, s.r, dz, p.epsilon);
    return {s.strength * dz * k.radial, s.strength * k.vertical};
  }
  const double kr = kernel::tau_kernel(p.d, t.r, s.r, dz, kernel::Component::Radial, p.tau_order, p.epsilon);
  const double kz = kernel::tau_kernel(p.d, t.r, s.r, dz, kernel::Component::Vertical, p.tau_order, p.epsilon);
  return {s.strength * dz * kr, s.strength * kz};
}

}  // namespace

VelocitySamples direct_sum(std::span<const Source> sources, std::span<const Point> targets,
                           const KernelParams& params, std::span<const std::size_t> excluded) {
  if (!excluded.empty() && excluded.size() != targets.size())
    throw std::invalid_argument("direct_sum: one exclusion entry per target required");
  VelocitySamples out;
  out.points.assign(targets.begin(), targets.end());
  out.ur.assign(targets.size(), 0.0);
  out.uz.assign(targets.size(), 0.0);
  const double prefactor = static_cast<double>(params.d.weight_exponent()) / (2.0 * std::numbers::pi);
  const auto n_targets = static_cast<std::ptrdiff_t>(targets.size());
  const std::size_t n = sources.size();

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < n_targets; ++k) {
    const Point t = targets[static_cast<std::size_t>(k)];
    const std::size_t skip = excluded.empty() ? kNoExclusion : excluded[static_cast<std::size_t>(k)];
    auto eval = [&](const Source& s) -> Contribution {
      if (s.id == skip) return {0.0, 0.0};
      return contribution(s, t, params);
    };
    double ur = 0.0;
    double uz = 0.0;
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
      const auto a = eval(sources[i]);
      const auto b = eval(sources[i + 1]);
      ur += a.ur + b.ur;
      uz += a.uz + b.uz;
    }
    if (i < n) {
      const auto a = eval(sources[i]);
      ur += a.ur;
      uz += a.uz;
    }
    out.ur[static_cast<std::size_t>(k)] = prefactor * ur;
    out.uz[static_cast<std::size_t>(k)] = prefactor * uz;
  }
  return out;
}

std::vector<std::size_t> mirror_paired_order(const CylGrid& grid) {
  std::vector<std::size_t> order;
  order.reserve(grid.size());
  const std::size_t nz = grid.nz();
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    for (std::size_t j = 0; j < nz / 2; ++j) {
      order.push_back(grid.index(i, j));
      order.push_back(grid.index(i, nz - 1 - j));
    }
    if (nz % 2 == 1) order.push_back(grid.index(i, nz / 2));
  }
  return order;
}

std::vector<Source> grid_sources(const ScalarField& omega, Dimension d) {
  const auto& g = omega.grid;
  std::vector<Source> sources;
  for (std::size_t idx : mirror_paired_order(g)) {
    const double w = omega.values[idx];
    if (w == 0.0) continue;
    const std::size_t i = idx / g.nz();
    const std::size_t j = idx % g.nz();
    const double r = g.r(i);
    sources.push_back({r, g.z(j), w * measure_weight(r, d) * g.cell_area(), idx});
  }
  return sources;
}

ReconstructionJob::ReconstructionJob(ScalarField omega, std::vector<Point> targets, KernelParams params)
    : omega_(std::move(omega)), targets_(std::move(targets)), params_(params) {
  for (const auto& t : targets_) {
    if (!std::isfinite(t.r) || !std::isfinite(t.z)) throw std::invalid_argument("reconstruction: non-finite target");
    if (!omega_.grid.contains(t)) throw std::out_of_range("reconstruction: target outside the source grid");
  }
}

VelocitySamples velocity_from_vorticity(const ReconstructionJob& job) {
  const auto& omega = job.omega();
  const auto& params = job.params();
  const auto sources = grid_sources(omega, params.d);
  std::vector<std::size_t> excluded;
  if (params.epsilon == 0.0) {
    excluded.reserve(job.targets().size());
    for (const auto& t : job.targets()) excluded.push_back(omega.grid.cell_of(t));
  }
  return direct_sum(sources, job.targets(), params, excluded);
}

VectorFieldRZ velocity_on_grid(const ScalarField& omega, const KernelParams& params) {
  const auto& g = omega.grid;
  std::vector<Point> targets;
  targets.reserve(g.size());
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j) targets.push_back(g.node(i, j));
  auto v = velocity_from_vorticity(ReconstructionJob(omega, std::move(targets), params));
  return VectorFieldRZ(g, std::move(v.ur), std::move(v.uz));
}

namespace {

// Antiderivative of 1/sqrt(x^2 + y^2) in x and y; the x ln|x| and y ln|y|
// pieces of the usual form cancel in the corner sum and are dropped.
double inv_distance_primitive(double x, double y) {
  double f = 0.0;
  if (x != 0.0) f += x * std::asinh(y / std::abs(x));
  if (y != 0.0) f += y * std::asinh(x / std::abs(y));
  return f;
}

double inv_distance_over_cell(double x0, double x1, double y0, double y1) {
  return inv_distance_primitive(x1, y1) - inv_distance_primitive(x0, y1) - inv_distance_primitive(x1, y0) +
         inv_distance_primitive(x0, y0);
}

}  // namespace

double velocity_bound_rhs(const ScalarField& omega, Point target, Dimension d) {
  if (d.value() != 4) throw std::invalid_argument("velocity_bound_rhs: only d = 4 is supported");
  if (!(target.r > 0.0)) throw std::invalid_argument("velocity_bound_rhs: target must be off the axis (r > 0)");
  const auto& g = omega.grid;
  const double hr = g.hr();
  const double hz = g.hz();
  const double ti = target.r / hr - 0.5;
  const double tj = (target.z - g.z(0)) / hz;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double rb = g.r(i);
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const double w = std::abs(omega.at(i, j));
      if (w == 0.0) continue;
      const double dr = rb - target.r;
      const double dz = g.z(j) - target.z;
      const double smooth = 1.0 / std::sqrt(target.r * target.r + rb * rb + dz * dz);
      const bool near = std::abs(static_cast<double>(i) - ti) <= 2.5 && std::abs(static_cast<double>(j) - tj) <= 2.5;
      if (near) {
        sum += w * smooth * inv_distance_over_cell(dr - 0.5 * hr, dr + 0.5 * hr, dz - 0.5 * hz, dz + 0.5 * hz);
      } else {
        sum += w * smooth / std::sqrt(dr * dr + dz * dz) * hr * hz;
      }
    }
  }
  return 8.0 * target.r / std::numbers::pi * sum;
}

StretchingRatio stretching_ratio(const VectorFieldRZ& u, const ScalarField& omega, Dimension d) {
  if (d.value() != 4) throw std::invalid_argument("stretching_ratio: only d = 4 is supported");
  if (!(u.grid == omega.grid)) throw std::invalid_argument("stretching_ratio: velocity and vorticity grids differ");
  const auto& g = u.grid;
  if (g.nr() < 3) throw std::invalid_argument("stretching_ratio: need nr >= 3 for the axis limit");

  StretchingRatio out;
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j)
      out.sup_ur_over_r = std::max(out.sup_ur_over_r, std::abs(u.ur[g.index(i, j)]) / g.r(i));
  // u_r/r at r = h/2, 3h/2, 5h/2 extrapolated quadratically to r = 0.
  for (std::size_t j = 0; j < g.nz(); ++j) {
    const double q0 = u.ur[g.index(0, j)] / g.r(0);
    const double q1 = u.ur[g.index(1, j)] / g.r(1);
    const double q2 = u.ur[g.index(2, j)] / g.r(2);
    out.axis_sup = std::max(out.axis_sup, std::abs((15.0 * q0 - 10.0 * q1 + 3.0 * q2) / 8.0));
  }
  out.sup_ur_over_r = std::max(out.sup_ur_over_r, out.axis_sup);
  out.l21 = lorentz::lorentz_quasinorm(lorentz::transported_samples(omega, d), {2.0, 1.0});

  if (out.l21 == 0.0) {
    if (out.sup_ur_over_r != 0.0)
      throw std::invalid_argument("stretching_ratio: nonzero velocity with vanishing ||omega/r^2||_{2,1}");
    out.zero_field = true;
    return out;
  }
  out.ratio = out.sup_ur_over_r / out.l21;
  return out;
}

double relative_max_error(const VelocitySamples& computed, std::span<const double> ur_exact,
                          std::span<const double> uz_exact) {
  if (ur_exact.size() != computed.ur.size() || uz_exact.size() != computed.uz.size())
    throw std::invalid_argument("relative_max_error: size mismatch");
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < ur_exact.size(); ++k) {
    err = std::max({err, std::abs(computed.ur[k] - ur_exact[k]), std::abs(computed.uz[k] - uz_exact[k])});
    ref = std::max({ref, std::abs(ur_exact[k]), std::abs(uz_exact[k])});
  }
  return ref > 0.0 ? err / ref : err;
}

}  // namespace axeuler::biot_savart
