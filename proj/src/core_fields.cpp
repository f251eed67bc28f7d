#include "axeuler/core_fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace axeuler {

Dimension::Dimension(int d) : d_(d) {
  if (d < 3) throw std::invalid_argument("dimension must be >= 3, got " + std::to_string(d));
}

CylGrid::CylGrid(double r_max, double z_min, double z_max, std::size_t nr, std::size_t nz)
    : r_max_(r_max), z_min_(z_min), z_max_(z_max), nr_(nr), nz_(nz) {
  if (!(std::isfinite(r_max) && r_max > 0.0)) throw std::invalid_argument("grid: r_max must be positive and finite");
  if (!(std::isfinite(z_min) && std::isfinite(z_max) && z_min < z_max))
    throw std::invalid_argument("grid: need finite z_min < z_max");
  if (nr < 2 || nz < 2) throw std::invalid_argument("grid: nr and nz must be >= 2");
  hr_ = r_max / static_cast<double>(nr);
  hz_ = (z_max - z_min) / static_cast<double>(nz);
  z_mid_ = 0.5 * (z_min + z_max);
}

bool CylGrid::contains(Point p) const noexcept {
  return p.r >= 0.0 && p.r <= r_max_ && p.z >= z_min_ && p.z <= z_max_;
}

std::size_t CylGrid::cell_of(Point p) const {
  if (!contains(p)) throw std::out_of_range("point outside grid");
  auto i = static_cast<std::size_t>(std::floor(p.r / hr_));
  auto j = static_cast<std::size_t>(std::floor((p.z - z_min_) / hz_));
  return index(std::min(i, nr_ - 1), std::min(j, nz_ - 1));
}

CylGrid CylGrid::scaled(double factor) const {
  return CylGrid(r_max_ * factor, z_min_ * factor, z_max_ * factor, nr_, nz_);
}

CylGrid make_uniform_grid(double r_max, double z_min, double z_max, std::size_t nr, std::size_t nz) {
  return CylGrid(r_max, z_min, z_max, nr, nz);
}

namespace {

void check_samples(const CylGrid& grid, const std::vector<double>& v, const char* what) {
  if (v.size() != grid.size())
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(grid.size()) + " samples, got " +
                                std::to_string(v.size()));
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

}  // namespace

ScalarField::ScalarField(CylGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  check_samples(grid, values, "scalar field");
}

ScalarField::ScalarField(CylGrid g) : grid(g), values(g.size(), 0.0) {}

VectorFieldRZ::VectorFieldRZ(CylGrid g, std::vector<double> r, std::vector<double> z)
    : grid(g), ur(std::move(r)), uz(std::move(z)) {
  check_samples(grid, ur, "vector field (ur)");
  check_samples(grid, uz, "vector field (uz)");
}

VectorFieldRZ::VectorFieldRZ(CylGrid g) : grid(g), ur(g.size(), 0.0), uz(g.size(), 0.0) {}

double measure_weight(double r, Dimension d) {
  if (r < 0.0) throw std::invalid_argument("measure_weight: r must be >= 0");
  return std::pow(r, d.weight_exponent());
}

GaussianVelocity gaussian_velocity(double r, double z, Dimension d) {
  const double e = std::exp(-r * r - z * z);
  const double dm1 = static_cast<double>(d.value() - 1);
  return {r * (1.0 - 2.0 * z * z) * e, -z * (dm1 - 2.0 * r * r) * e};
}

double gaussian_vorticity(double r, double z, Dimension d) {
  const double e = std::exp(-r * r - z * z);
  const double c = 2.0 * d.value() + 8.0;
  return r * z * (c - 4.0 * r * r - 4.0 * z * z) * e;
}

VectorFieldRZ gaussian_test_field(const CylGrid& grid, Dimension d) {
  VectorFieldRZ u(grid);
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    for (std::size_t j = 0; j < grid.nz(); ++j) {
      const auto v = gaussian_velocity(grid.r(i), grid.z(j), d);
      u.ur[grid.index(i, j)] = v.ur;
      u.uz[grid.index(i, j)] = v.uz;
    }
  }
  return u;
}

ScalarField gaussian_test_vorticity(const CylGrid& grid, Dimension d) {
  return sample_scalar(grid, [d](double r, double z) { return gaussian_vorticity(r, z, d); });
}

namespace {

// Second-order first derivative along one axis of a line of n samples
// spaced h apart: centered inside, one-sided three-point at the ends.
template <class Get>
double diff1(Get get, std::size_t k, std::size_t n, double h) {
  if (k == 0) return (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h);
  if (k == n - 1) return (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * h);
  return (get(k + 1) - get(k - 1)) / (2.0 * h);
}

double d_dr(const CylGrid& g, const std::vector<double>& f, std::size_t i, std::size_t j) {
  return diff1([&](std::size_t k) { return f[g.index(k, j)]; }, i, g.nr(), g.hr());
}

double d_dz(const CylGrid& g, const std::vector<double>& f, std::size_t i, std::size_t j) {
  return diff1([&](std::size_t k) { return f[g.index(i, k)]; }, j, g.nz(), g.hz());
}

void require_three_points(const CylGrid& g) {
  if (g.nr() < 3 || g.nz() < 3) throw std::invalid_argument("differential operators need nr, nz >= 3");
}

}  // namespace

ScalarField cyl_divergence(const VectorFieldRZ& u, Dimension d) {
  const auto& g = u.grid;
  require_three_points(g);
  const double k = static_cast<double>(d.weight_exponent());
  ScalarField out(g);
  for (std::size_t i = 0; i < g.nr(); ++i) {
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const auto n = g.index(i, j);
      out.values[n] = d_dr(g, u.ur, i, j) + d_dz(g, u.uz, i, j) + k / g.r(i) * u.ur[n];
    }
  }
  return out;
}

ScalarField curl_rz(const VectorFieldRZ& u) {
  const auto& g = u.grid;
  require_three_points(g);
  ScalarField out(g);
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j) out.values[g.index(i, j)] = d_dr(g, u.uz, i, j) - d_dz(g, u.ur, i, j);
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace axeuler
