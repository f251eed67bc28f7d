#pragma once

// Lagrangian vortex-particle evolution of eta = omega / r^(d-2).
//
// Each particle carries a fixed eta and a fixed measure weight (its initial
// cell volume r^(d-2) h_r h_z); only positions move. For d = 4 the
// distribution of omega / r^2 under r^2 dr dz is therefore the same at every
// time step, and ||omega/r^2||_{2,1} is constant by construction.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "axeuler/biot_savart.hpp"
#include "axeuler/core_fields.hpp"
#include "axeuler/kernel.hpp"

namespace axeuler::simulator {

using biot_savart::VelocitySamples;
using kernel::KernelParams;

class ParticleSet {
 public:
  ParticleSet(Dimension d, std::vector<Point> positions, std::vector<double> eta, std::vector<double> volume);

  /// Same particles at new positions; eta and volume storage is shared, never copied.
  ParticleSet moved_to(std::vector<Point> positions) const;

  Dimension dimension() const noexcept { return d_; }
  std::size_t size() const noexcept { return positions_.size(); }
  bool empty() const noexcept { return positions_.empty(); }
  const std::vector<Point>& positions() const noexcept { return positions_; }
  const std::vector<double>& eta() const noexcept { return *eta_; }
  const std::vector<double>& volume() const noexcept { return *volume_; }

  /// omega_i = eta_i r_i^(d-2) at the current position.
  double omega(std::size_t i) const;

 private:
  Dimension d_;
  std::vector<Point> positions_;
  std::shared_ptr<const std::vector<double>> eta_;
  std::shared_ptr<const std::vector<double>> volume_;
};

/// One particle per cell center with |omega| above drop_fraction * max|omega|.
/// Particles are listed in mirror-paired order (see biot_savart::mirror_paired_order).
ParticleSet init_from_vorticity(const ScalarField& omega0, Dimension d, double drop_fraction = 1e-14);

/// Particles as Biot-Savart sources (strength volume_i * omega_i, id = index).
std::vector<biot_savart::Source> particle_sources(const ParticleSet& particles);

/// Regularized velocity at arbitrary targets. Requires epsilon > 0.
VelocitySamples particle_velocity(const ParticleSet& particles, std::span<const Point> targets,
                                  const KernelParams& kernel);

/// Velocity at every particle with the self-interaction excluded.
VelocitySamples self_velocity(const ParticleSet& particles, const KernelParams& kernel);

struct StepResult {
  ParticleSet particles;
  /// Particles that ended the step at r <= 0 and were reflected to |r|.
  std::size_t axis_reflections = 0;
};

/// Classical four-stage Runge-Kutta advance of the positions. dt may be
/// negative (backward integration); it must be finite and nonzero.
StepResult step_rk4(const ParticleSet& particles, double dt, const KernelParams& kernel);

/// Named initial vorticities: "gaussian-example", "single-ring", "colliding-rings".
ScalarField preset_initial_data(std::string_view name, const CylGrid& grid);

struct DiagnosticsRecord {
  std::size_t step = 0;
  double t = 0.0;
  double omega_sup = 0.0;
  double l21 = 0.0;
  double ur_over_r_sup = 0.0;
  double envelope = 0.0;
  double kinetic = 0.0;
  std::size_t axis_reflections = 0;
};

struct SimulationConfig {
  SimulationConfig(ScalarField initial, double dt, double t_end, KernelParams kernel);

  ScalarField initial;
  double dt;
  double t_end;
  KernelParams kernel;
  std::size_t diagnostics_every = 1;
  std::size_t snapshot_every = 0;
  std::uint64_t seed = 0;
  /// C in omega_sup(t) <= ||omega0||_inf exp(C ||omega0/r^2||_{2,1} t).
  double envelope_constant = 0.0;
  double drop_fraction = 1e-14;

  Dimension dimension() const noexcept { return kernel.d; }
  std::size_t steps() const;
  void validate() const;
};

struct RunObserver {
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::function<void(std::size_t step, const ParticleSet&)> on_snapshot;
};

struct SimulationResult {
  std::vector<DiagnosticsRecord> records;
  std::vector<std::string> warnings;
  ParticleSet initial_particles;
  ParticleSet final_particles;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, std::string dump);
  const std::string& dump() const noexcept { return dump_; }

 private:
  std::string dump_;
};

/// Diagnostics of a particle set at time t.
DiagnosticsRecord diagnose(const ParticleSet& particles, const KernelParams& kernel, double t);

SimulationResult run(const SimulationConfig& config, const RunObserver& observer = {});

}  // namespace axeuler::simulator
