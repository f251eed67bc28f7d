#include "axeuler/corpus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace axeuler::corpus {

StreamFunctionField::StreamFunctionField(Dimension d, std::vector<Bump> bumps) : d_(d), bumps_(std::move(bumps)) {
  for (const auto& b : bumps_)
    if (!(b.width > 0.0) || b.center_r < 0.0) throw std::invalid_argument("stream function: bad bump parameters");
}

StreamFunctionField::Derivatives StreamFunctionField::derivatives(double r, double z) const {
  Derivatives out{0, 0, 0, 0, 0};
  for (const auto& b : bumps_) {
    const double s2 = b.width * b.width;
    const double y = z - b.center_z;
    for (double x : {r - b.center_r, r + b.center_r}) {
      const double g = b.amplitude * std::exp(-(x * x + y * y) / s2);
      out.f += g;
      out.fr += -2.0 * x / s2 * g;
      out.frr += (4.0 * x * x / (s2 * s2) - 2.0 / s2) * g;
      out.fz += -2.0 * y / s2 * g;
      out.fzz += (4.0 * y * y / (s2 * s2) - 2.0 / s2) * g;
    }
  }
  return out;
}

StreamFunctionField::Velocity StreamFunctionField::velocity(double r, double z) const {
  const auto k = derivatives(r, z);
  const double dm1 = static_cast<double>(d_.value() - 1);
  return {r * k.fz, -(dm1 * k.f + r * k.fr)};
}

double StreamFunctionField::vorticity(double r, double z) const {
  const auto k = derivatives(r, z);
  return -(d_.value() * k.fr + r * k.frr + r * k.fzz);
}

double StreamFunctionField::ur_over_r(double r, double z) const { return derivatives(r, z).fz; }

VectorFieldRZ StreamFunctionField::sample_velocity(const CylGrid& grid, double lambda) const {
  VectorFieldRZ u(grid);
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    for (std::size_t j = 0; j < grid.nz(); ++j) {
      const auto v = velocity(lambda * grid.r(i), lambda * grid.z(j));
      u.ur[grid.index(i, j)] = v.ur;
      u.uz[grid.index(i, j)] = v.uz;
    }
  }
  return u;
}

ScalarField StreamFunctionField::sample_vorticity(const CylGrid& grid, double lambda) const {
  return sample_scalar(grid, [&](double r, double z) { return lambda * vorticity(lambda * r, lambda * z); });
}

std::vector<StreamFunctionField> make_corpus(std::uint64_t seed, std::size_t size, Dimension d,
                                             const CorpusOptions& o) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(o.min_bumps, o.max_bumps);
  std::uniform_real_distribution<double> amp(-o.max_amplitude, o.max_amplitude);
  std::uniform_real_distribution<double> cr(o.min_center_r, o.max_center_r);
  std::uniform_real_distribution<double> cz(-o.max_center_z, o.max_center_z);
  std::uniform_real_distribution<double> width(o.min_width, o.max_width);

  std::vector<StreamFunctionField> out;
  out.reserve(size);
  for (std::size_t n = 0; n < size; ++n) {
    std::vector<Bump> bumps(static_cast<std::size_t>(count(rng)));
    for (auto& b : bumps) {
      b.amplitude = amp(rng);
      b.center_r = cr(rng);
      b.center_z = cz(rng);
      b.width = width(rng);
    }
    out.emplace_back(d, std::move(bumps));
  }
  return out;
}

CylGrid corpus_grid(std::size_t resolution) { return CylGrid(5.0, -5.0, 5.0, resolution, resolution); }

}  // namespace axeuler::corpus
