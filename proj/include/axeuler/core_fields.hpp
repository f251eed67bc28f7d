#pragma once

// Axisymmetric, swirl-free fields sampled on the (r, z) half-plane.
//
// Grids are cell centered, so every node has r > 0 and the coordinate
// singularity of e_r on the axis is never sampled. Samples are stored
// dense, row-major with z varying fastest: index(i, j) = i * nz + j.

#include <cstddef>
#include <vector>

namespace axeuler {

/// Spatial dimension of the ambient flow (d >= 3).
class Dimension {
 public:
  explicit Dimension(int d);

  int value() const noexcept { return d_; }
  /// Exponent of the cylindrical measure weight, d - 2.
  int weight_exponent() const noexcept { return d_ - 2; }

  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

inline const Dimension kDefaultDimension{4};

struct Point {
  double r = 0.0;
  double z = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

class CylGrid {
 public:
  CylGrid(double r_max, double z_min, double z_max, std::size_t nr, std::size_t nz);

  double r_max() const noexcept { return r_max_; }
  double z_min() const noexcept { return z_min_; }
  double z_max() const noexcept { return z_max_; }
  std::size_t nr() const noexcept { return nr_; }
  std::size_t nz() const noexcept { return nz_; }
  std::size_t size() const noexcept { return nr_ * nz_; }

  double hr() const noexcept { return hr_; }
  double hz() const noexcept { return hz_; }
  double cell_area() const noexcept { return hr_ * hz_; }

  double r(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * hr_; }
  // Offsets from the midpoint keep z-symmetric grids bitwise symmetric.
  double z(std::size_t j) const noexcept {
    return z_mid_ + (static_cast<double>(j) + 0.5 - 0.5 * static_cast<double>(nz_)) * hz_;
  }
  Point node(std::size_t i, std::size_t j) const noexcept { return {r(i), z(j)}; }

  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * nz_ + j; }

  bool contains(Point p) const noexcept;
  /// Index of the cell containing p (cells are half-open; the upper edges
  /// belong to the last cell). p must satisfy contains(p).
  std::size_t cell_of(Point p) const;

  /// Same grid mapped by (r, z) -> (factor r, factor z).
  CylGrid scaled(double factor) const;

  friend bool operator==(const CylGrid&, const CylGrid&) = default;

 private:
  double r_max_;
  double z_min_;
  double z_max_;
  std::size_t nr_;
  std::size_t nz_;
  double hr_;
  double hz_;
  double z_mid_;
};

CylGrid make_uniform_grid(double r_max, double z_min, double z_max, std::size_t nr, std::size_t nz);

struct ScalarField {
  ScalarField(CylGrid grid, std::vector<double> values);
  explicit ScalarField(CylGrid grid);

  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }

  CylGrid grid;
  std::vector<double> values;
};

struct VectorFieldRZ {
  VectorFieldRZ(CylGrid grid, std::vector<double> ur, std::vector<double> uz);
  explicit VectorFieldRZ(CylGrid grid);

  CylGrid grid;
  std::vector<double> ur;
  std::vector<double> uz;
};

/// Samples f(r, z) at every node.
template <class F>
ScalarField sample_scalar(const CylGrid& grid, F&& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.nr(); ++i)
    for (std::size_t j = 0; j < grid.nz(); ++j) out.values[grid.index(i, j)] = f(grid.r(i), grid.z(j));
  return out;
}

/// dmu = r^(d-2) dr dz.
double measure_weight(double r, Dimension d);

// Gaussian test field. For d = 4 this is
//   u = exp(-r^2 - z^2) (r (1 - 2 z^2) e_r - z (3 - 2 r^2) e_z),
//   omega = 4 r z (4 - r^2 - z^2) exp(-r^2 - z^2).
// Other d use the stream function psi = r^(d-1) z exp(-r^2 - z^2), which
// reduces to the same field at d = 4.
struct GaussianVelocity {
  double ur;
  double uz;
};
GaussianVelocity gaussian_velocity(double r, double z, Dimension d = kDefaultDimension);
double gaussian_vorticity(double r, double z, Dimension d = kDefaultDimension);

VectorFieldRZ gaussian_test_field(const CylGrid& grid, Dimension d = kDefaultDimension);
ScalarField gaussian_test_vorticity(const CylGrid& grid, Dimension d = kDefaultDimension);

/// du_r/dr + du_z/dz + (d - 2) u_r / r, second order everywhere.
ScalarField cyl_divergence(const VectorFieldRZ& u, Dimension d);

/// omega = du_z/dr - du_r/dz, second order everywhere.
ScalarField curl_rz(const VectorFieldRZ& u);

double max_abs(const std::vector<double>& v);

}  // namespace axeuler
