#pragma once

// Random divergence-free test fields built from stream functions
//
//   psi = r^(d-1) f(r, z),   f = sum_k a_k [G_k(r - c_k, z - b_k) + G_k(r + c_k, z - b_k)],
//   G_k(x, y) = exp(-(x^2 + y^2) / sigma_k^2),
//
// with u_r = psi_z / r^(d-2) = r f_z and u_z = -psi_r / r^(d-2) = -((d-1) f + r f_r).
// f is even in r, so psi vanishes to order d-1 at the axis, the fields are
// smooth, and omega / r^2 lies in L^{2,1} for d = 4. Velocity, vorticity and
// u_r / r are all available in closed form.

#include <cstdint>
#include <vector>

#include "axeuler/core_fields.hpp"

namespace axeuler::corpus {

struct Bump {
  double amplitude;
  double center_r;
  double center_z;
  double width;
};

class StreamFunctionField {
 public:
  StreamFunctionField(Dimension d, std::vector<Bump> bumps);

  struct Velocity {
    double ur;
    double uz;
  };
  Velocity velocity(double r, double z) const;
  double vorticity(double r, double z) const;
  /// u_r / r = f_z, finite on the axis.
  double ur_over_r(double r, double z) const;

  /// Samples of u(lambda x) and lambda omega(lambda x): the field rescaled so
  /// that sup |u_r/r| and ||omega/r^2||_{2,1} both scale by lambda.
  VectorFieldRZ sample_velocity(const CylGrid& grid, double lambda = 1.0) const;
  ScalarField sample_vorticity(const CylGrid& grid, double lambda = 1.0) const;

  Dimension dimension() const noexcept { return d_; }
  const std::vector<Bump>& bumps() const noexcept { return bumps_; }

 private:
  struct Derivatives {
    double f, fr, frr, fz, fzz;
  };
  Derivatives derivatives(double r, double z) const;

  Dimension d_;
  std::vector<Bump> bumps_;
};

struct CorpusOptions {
  int min_bumps = 1;
  int max_bumps = 3;
  double max_amplitude = 1.0;
  double min_center_r = 0.2;
  double max_center_r = 1.5;
  double max_center_z = 1.0;
  double min_width = 0.3;
  double max_width = 0.8;
};

/// Deterministic for a given seed.
std::vector<StreamFunctionField> make_corpus(std::uint64_t seed, std::size_t size, Dimension d = kDefaultDimension,
                                             const CorpusOptions& options = {});

/// Default sampling grid for corpus fields: r in (0, 5], z in [-5, 5].
CylGrid corpus_grid(std::size_t resolution);

}  // namespace axeuler::corpus
