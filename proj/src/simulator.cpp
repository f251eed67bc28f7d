#include "axeuler/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "axeuler/lorentz.hpp"

namespace axeuler::simulator {

ParticleSet::ParticleSet(Dimension d, std::vector<Point> positions, std::vector<double> eta,
                         std::vector<double> volume)
    : d_(d),
      positions_(std::move(positions)),
      eta_(std::make_shared<const std::vector<double>>(std::move(eta))),
      volume_(std::make_shared<const std::vector<double>>(std::move(volume))) {
  if (eta_->size() != positions_.size() || volume_->size() != positions_.size())
    throw std::invalid_argument("particle set: arrays must have equal lengths");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!(positions_[i].r > 0.0)) throw std::invalid_argument("particle set: positions need r > 0");
    if (!((*volume_)[i] > 0.0)) throw std::invalid_argument("particle set: volumes must be > 0");
    if (!std::isfinite((*eta_)[i])) throw std::invalid_argument("particle set: non-finite eta");
  }
}

ParticleSet ParticleSet::moved_to(std::vector<Point> positions) const {
  if (positions.size() != positions_.size()) throw std::invalid_argument("particle set: wrong position count");
  ParticleSet out = *this;
  out.positions_ = std::move(positions);
  return out;
}

double ParticleSet::omega(std::size_t i) const {
  return (*eta_)[i] * std::pow(positions_[i].r, d_.weight_exponent());
}

ParticleSet init_from_vorticity(const ScalarField& omega0, Dimension d, double drop_fraction) {
  const auto& g = omega0.grid;
  const double cutoff = drop_fraction * max_abs(omega0.values);
  std::vector<Point> pos;
  std::vector<double> eta;
  std::vector<double> vol;
  for (std::size_t idx : biot_savart::mirror_paired_order(g)) {
    const double w = omega0.values[idx];
    if (w == 0.0 || std::abs(w) < cutoff) continue;
    const Point p = g.node(idx / g.nz(), idx % g.nz());
    const double rk = measure_weight(p.r, d);
    pos.push_back(p);
    eta.push_back(w / rk);
    vol.push_back(rk * g.cell_area());
  }
  return ParticleSet(d, std::move(pos), std::move(eta), std::move(vol));
}

std::vector<biot_savart::Source> particle_sources(const ParticleSet& particles) {
  std::vector<biot_savart::Source> sources;
  sources.reserve(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const auto& p = particles.positions()[i];
    sources.push_back({p.r, p.z, particles.volume()[i] * particles.omega(i), i});
  }
  return sources;
}

namespace {

void require_regularized(const KernelParams& kernel) {
  if (!(kernel.epsilon > 0.0)) throw std::invalid_argument("particle velocity: epsilon must be > 0 for particle sources");
}

}  // namespace

VelocitySamples particle_velocity(const ParticleSet& particles, std::span<const Point> targets,
                                  const KernelParams& kernel) {
  require_regularized(kernel);
  const auto sources = particle_sources(particles);
  return biot_savart::direct_sum(sources, targets, kernel);
}

VelocitySamples self_velocity(const ParticleSet& particles, const KernelParams& kernel) {
  require_regularized(kernel);
  const auto sources = particle_sources(particles);
  std::vector<std::size_t> self(particles.size());
  for (std::size_t i = 0; i < self.size(); ++i) self[i] = i;
  return biot_savart::direct_sum(sources, particles.positions(), kernel, self);
}

namespace {

// Stage positions may overshoot the axis; they are evaluated at |r|.
VelocitySamples stage_velocity(const ParticleSet& base, const std::vector<Point>& pos, const KernelParams& kernel) {
  std::vector<Point> guarded = pos;
  for (auto& p : guarded) p.r = std::max(std::abs(p.r), std::numeric_limits<double>::min());
  return self_velocity(base.moved_to(std::move(guarded)), kernel);
}

}  // namespace

StepResult step_rk4(const ParticleSet& particles, double dt, const KernelParams& kernel) {
  if (!std::isfinite(dt) || dt == 0.0) throw std::invalid_argument("step_rk4: dt must be finite and nonzero");
  const std::size_t n = particles.size();
  if (n == 0) return {particles, 0};
  const auto& x0 = particles.positions();

  auto advance = [&](const VelocitySamples& k, double h) {
    std::vector<Point> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {x0[i].r + h * k.ur[i], x0[i].z + h * k.uz[i]};
    return out;
  };

  const auto k1 = self_velocity(particles, kernel);
  const auto k2 = stage_velocity(particles, advance(k1, 0.5 * dt), kernel);
  const auto k3 = stage_velocity(particles, advance(k2, 0.5 * dt), kernel);
  const auto k4 = stage_velocity(particles, advance(k3, dt), kernel);

  const double w = dt / 6.0;
  std::vector<Point> next(n);
  std::size_t reflections = 0;
  for (std::size_t i = 0; i < n; ++i) {
    next[i].r = x0[i].r + w * (k1.ur[i] + 2.0 * k2.ur[i] + 2.0 * k3.ur[i] + k4.ur[i]);
    next[i].z = x0[i].z + w * (k1.uz[i] + 2.0 * k2.uz[i] + 2.0 * k3.uz[i] + k4.uz[i]);
    if (!(next[i].r > 0.0)) {
      next[i].r = std::max(std::abs(next[i].r), std::numeric_limits<double>::min());
      ++reflections;
    }
  }
  return {particles.moved_to(std::move(next)), reflections};
}

ScalarField preset_initial_data(std::string_view name, const CylGrid& grid) {
  if (name == "gaussian-example") return gaussian_test_vorticity(grid);
  auto bump = [](double r, double z, double zc) {
    return std::exp(-((r - 1.0) * (r - 1.0) + (z - zc) * (z - zc)) / 0.04);
  };
  if (name == "single-ring") return sample_scalar(grid, [&](double r, double z) { return bump(r, z, 0.0); });
  if (name == "colliding-rings")
    return sample_scalar(grid, [&](double r, double z) { return bump(r, z, 0.5) - bump(r, z, -0.5); });
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

SimulationConfig::SimulationConfig(ScalarField init, double dt_, double t_end_, KernelParams k)
    : initial(std::move(init)), dt(dt_), t_end(t_end_), kernel(k) {}

std::size_t SimulationConfig::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

void SimulationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("simulation: dt must be > 0");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw std::invalid_argument("simulation: t_end must be >= dt");
  if (diagnostics_every < 1) throw std::invalid_argument("simulation: diagnostics_every must be >= 1");
  if (!(kernel.epsilon > 0.0)) throw std::invalid_argument("simulation: epsilon must be > 0");
  if (!(envelope_constant >= 0.0)) throw std::invalid_argument("simulation: envelope constant must be >= 0");
}

SimulationError::SimulationError(const std::string& what, std::string dump)
    : std::runtime_error(what), dump_(std::move(dump)) {}

DiagnosticsRecord diagnose(const ParticleSet& particles, const KernelParams& kernel, double t) {
  DiagnosticsRecord rec;
  rec.t = t;
  if (particles.empty()) return rec;
  const int shift = particles.dimension().value() - 4;
  lorentz::WeightedSamples transported;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const double r = particles.positions()[i].r;
    rec.omega_sup = std::max(rec.omega_sup, std::abs(particles.omega(i)));
    // omega / r^2 = eta r^(d-4); for d = 4 the factor is exactly 1.
    transported.push_back(particles.eta()[i] * std::pow(r, shift), particles.volume()[i]);
  }
  rec.l21 = lorentz::lorentz_quasinorm(transported, {2.0, 1.0});
  const auto u = self_velocity(particles, kernel);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    rec.ur_over_r_sup = std::max(rec.ur_over_r_sup, std::abs(u.ur[i]) / particles.positions()[i].r);
    rec.kinetic += 0.5 * particles.volume()[i] * (u.ur[i] * u.ur[i] + u.uz[i] * u.uz[i]);
  }
  return rec;
}

namespace {

double max_speed(const VelocitySamples& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.ur.size(); ++i) m = std::max(m, std::hypot(u.ur[i], u.uz[i]));
  return m;
}

std::string dump_record(const DiagnosticsRecord& r, const ParticleSet& p) {
  std::ostringstream os;
  os.precision(17);
  os << "step=" << r.step << " t=" << r.t << " omega_sup=" << r.omega_sup << " l21=" << r.l21
     << " ur_over_r_sup=" << r.ur_over_r_sup << " envelope=" << r.envelope << " kinetic=" << r.kinetic
     << " particles=" << p.size();
  return os.str();
}

bool finite(const DiagnosticsRecord& r) {
  return std::isfinite(r.omega_sup) && std::isfinite(r.l21) && std::isfinite(r.ur_over_r_sup) &&
         std::isfinite(r.envelope) && std::isfinite(r.kinetic);
}

}  // namespace

SimulationResult run(const SimulationConfig& config, const RunObserver& observer) {
  config.validate();
  const auto& kernel = config.kernel;
  const Dimension d = config.dimension();
  ParticleSet particles = init_from_vorticity(config.initial, d, config.drop_fraction);
  SimulationResult result{{}, {}, particles, particles};

  const std::size_t steps = config.steps();
  const double h = std::max(config.initial.grid.hr(), config.initial.grid.hz());
  double omega0_sup = 0.0;
  double l21_0 = 0.0;
  std::size_t reflections = 0;
  bool cfl_warned = false;

  auto record = [&](std::size_t step) {
    auto rec = diagnose(particles, kernel, static_cast<double>(step) * config.dt);
    rec.step = step;
    rec.axis_reflections = reflections;
    if (step == 0) {
      omega0_sup = rec.omega_sup;
      l21_0 = rec.l21;
    }
    rec.envelope = omega0_sup * std::exp(config.envelope_constant * l21_0 * rec.t);
    if (!finite(rec)) throw SimulationError("simulation: non-finite diagnostic", dump_record(rec, particles));
    if (&particles.eta() != &result.initial_particles.eta())
      throw SimulationError("simulation: transported values were rewritten", dump_record(rec, particles));
    result.records.push_back(rec);
    if (observer.on_record) observer.on_record(rec);
  };

  auto check_cfl = [&]() {
    if (cfl_warned || particles.empty()) return;
    const double speed = max_speed(self_velocity(particles, kernel));
    if (speed > 0.0 && config.dt > 0.5 * h / speed) {
      std::ostringstream os;
      os << "dt = " << config.dt << " exceeds 0.5 h / max|u| = " << 0.5 * h / speed;
      result.warnings.push_back(os.str());
      cfl_warned = true;
    }
  };

  record(0);
  check_cfl();
  if (observer.on_snapshot && config.snapshot_every > 0) observer.on_snapshot(0, particles);

  for (std::size_t step = 1; step <= steps; ++step) {
    auto next = step_rk4(particles, config.dt, kernel);
    particles = std::move(next.particles);
    reflections += next.axis_reflections;
    if (step % config.diagnostics_every == 0 || step == steps) {
      record(step);
      check_cfl();
    }
    if (observer.on_snapshot && config.snapshot_every > 0 && step % config.snapshot_every == 0)
      observer.on_snapshot(step, particles);
  }
  if (reflections > 0) result.warnings.push_back(std::to_string(reflections) + " axis reflections");
  result.final_particles = particles;
  return result;
}

}  // namespace axeuler::simulator
