#pragma once

// Velocity reconstruction from the scalar vorticity:
//
//   u_r(r, z) = (d-2)/(2 pi)  int int rbar^(d-2) (zbar - z) omega  I_r(tau) drbar dzbar
//   u_z(r, z) = (d-2)/(2 pi)  int int rbar^(d-2)            omega  I_z(tau) drbar dzbar
//
// The prefactor is |S^(d-3)| / |S^(d-1)| from integrating the R^d kernel over
// the S^(d-2) orbit of each source ring; it reproduces the closed-form
// Gaussian field exactly in the limit.
//
// with the inner tau-integrals of kernel::tau_kernel. The outer integral is a
// sum over point sources carrying strength omega * (measure weight), so grid
// cells and Lagrangian particles share one summation routine.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "axeuler/core_fields.hpp"
#include "axeuler/kernel.hpp"

namespace axeuler::biot_savart {

using kernel::KernelParams;

inline constexpr std::size_t kNoExclusion = std::numeric_limits<std::size_t>::max();

struct Source {
  double r;
  double z;
  /// omega times the source measure r^(d-2) dr dz.
  double strength;
  /// Caller-defined identity used for self/diagonal exclusion.
  std::size_t id;
};

struct VelocitySamples {
  std::vector<Point> points;
  std::vector<double> ur;
  std::vector<double> uz;
};

/// Direct summation over `sources` at every target. Target k skips the source
/// whose id equals excluded[k] (pass an empty span for no exclusion).
///
/// Contributions are accumulated in adjacent pairs (s0 + s1) + (s2 + s3) + ...
/// in source order, so a source list that lists mirror images next to each
/// other yields bitwise mirror-symmetric velocities. Each target is summed by
/// one worker in a fixed order; results do not depend on the thread count.
VelocitySamples direct_sum(std::span<const Source> sources, std::span<const Point> targets,
                           const KernelParams& params, std::span<const std::size_t> excluded = {});

/// Grid cells as sources, ordered so that z-mirrored cells are adjacent.
/// Cells with zero vorticity are skipped. Source id is the cell index.
std::vector<Source> grid_sources(const ScalarField& omega, Dimension d);

/// Cell-index order i-major with j interleaved as 0, nz-1, 1, nz-2, ...
std::vector<std::size_t> mirror_paired_order(const CylGrid& grid);

class ReconstructionJob {
 public:
  ReconstructionJob(ScalarField omega, std::vector<Point> targets, KernelParams params);

  const ScalarField& omega() const noexcept { return omega_; }
  const std::vector<Point>& targets() const noexcept { return targets_; }
  const KernelParams& params() const noexcept { return params_; }

 private:
  ScalarField omega_;
  std::vector<Point> targets_;
  KernelParams params_;
};

/// Midpoint rule over source cells. With epsilon > 0 every source is
/// regularized by adding epsilon^2 to the squared distance; with epsilon = 0
/// the cell containing each target is excluded.
VelocitySamples velocity_from_vorticity(const ReconstructionJob& job);

/// Reconstruction at every node of the vorticity grid.
VectorFieldRZ velocity_on_grid(const ScalarField& omega, const KernelParams& params);

/// Right-hand side of the pointwise bound
///   |u_r(r, z)| <= (8r/pi) int int |omega| / (sqrt(r^2 + rbar^2 + dz^2) sqrt((rbar - r)^2 + dz^2)) drbar dzbar
/// for d = 4. Cells within two cells of the target integrate the 1/distance
/// factor exactly over the cell; other cells use the midpoint rule.
double velocity_bound_rhs(const ScalarField& omega, Point target, Dimension d = kDefaultDimension);

struct StretchingRatio {
  double sup_ur_over_r = 0.0;
  /// Largest |d u_r / dr| on the axis, from quadratic extrapolation of u_r/r.
  double axis_sup = 0.0;
  double l21 = 0.0;
  double ratio = 0.0;
  /// Both sup and l21 vanish; ratio reported as 0.
  bool zero_field = false;
};

/// sup |u_r / r| (nodes and axis limit) against ||omega / r^2||_{L^{2,1}(r^2 dr dz)}.
StretchingRatio stretching_ratio(const VectorFieldRZ& u, const ScalarField& omega, Dimension d = kDefaultDimension);

/// max_k |a_k - b_k| / max_k |b_k| over both velocity components.
double relative_max_error(const VelocitySamples& computed, std::span<const double> ur_exact,
                          std::span<const double> uz_exact);

}  // namespace axeuler::biot_savart
