#pragma once

// Lorentz quasinorms of sampled functions over weighted (discrete) measures.
//
// For a simple function the distribution function is a step function, so the
// defining integral
//   ||f||_{p,q} = p^(1/q) ( int_0^inf t^q mu(|f| > t)^(q/p) dt/t )^(1/q)
// is a finite sum over the distinct sample values and is evaluated exactly.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "axeuler/core_fields.hpp"

namespace axeuler::lorentz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (|f_i|, w_i) pairs. Absolute values are taken on construction.
class WeightedSamples {
 public:
  WeightedSamples() = default;
  WeightedSamples(std::span<const double> values, std::span<const double> weights);

  void push_back(double value, double weight);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  WeightedSamples scaled(double c) const;

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
};

struct LorentzExponents {
  LorentzExponents(double p, double q);
  double p;
  double q;  // kInf for the weak space
};

/// Samples of |f| on a grid under the weight r^(d-2) h_r h_z.
WeightedSamples samples_from_field(const ScalarField& f, Dimension d);

/// Samples of |omega| / r^(d-2) under the same weight.
WeightedSamples transported_samples(const ScalarField& omega, Dimension d);

/// Sub-cell samples of |omega| / r^(d-2) for a vorticity that vanishes
/// linearly on the axis. Inside column i, omega/r is held at omega_i/r_i and the
/// 1/r^(d-3) profile is resolved on `subdivisions` radial pieces with exact
/// r^(d-2) dr measure. The axis column is split geometrically, `subdivisions` pieces per
/// halving over `axis_levels` halvings. Plain sampling converges like sqrt(h) on such
/// fields; here the residual error is set by `subdivisions` and is about 3e-4 at 4.
WeightedSamples resolved_transported_samples(const ScalarField& omega, Dimension d, int subdivisions = 4,
                                             int axis_levels = 40);

/// Canonical step form: distinct positive values in decreasing order with
/// the cumulative measure mu(|f| >= value).
struct StepDistribution {
  std::vector<double> levels;      // v_1 > v_2 > ... > v_K > 0
  std::vector<double> cumulative;  // M_k = sum of weights with value >= v_k
};
StepDistribution step_distribution(const WeightedSamples& samples);

/// mu({|f| > tau}).
double distribution_function(const WeightedSamples& samples, double tau);

/// L^{p,q} quasinorm for finite q; q = kInf dispatches to weak_quasinorm.
double lorentz_quasinorm(const WeightedSamples& samples, LorentzExponents exps);

/// sup_tau tau mu(|f| > tau)^(1/p).
double weak_quasinorm(const WeightedSamples& samples, double p);

/// (sum |f_i|^p w_i)^(1/p).
double lp_norm(const WeightedSamples& samples, double p);

struct WeakNormReport {
  double value = 0.0;
  /// Level at which the supremum is approached.
  double tau_star = 0.0;
  /// Radius beyond which g < tau_star can be guaranteed: sqrt(max(2/tau_star, 4a^2)).
  double far_field_radius = 0.0;
  double value_without_far_field = 0.0;
  double far_field_relative_change = 0.0;
  bool extent_sufficient = false;
  std::size_t resolution = 0;
  double extent = 0.0;
};

/// ||g_{a,b}||_{L^{2,inf}(r^2 dr dz)} measured on the cell-centered grid
/// r in (0, extent], z in [b - extent, b + extent] with `resolution` cells
/// per axis; every cell whose closed footprint contains (a, b) is excluded.
WeakNormReport weak_norm_of_g(double a, double b, std::size_t resolution, double extent);

struct HolderPairing {
  double lhs = 0.0;
  double rhs_product = 0.0;
  /// lhs / rhs_product, 0 when both vanish.
  double ratio = 0.0;
};

/// lhs = sum f_i g_i w_i, rhs = ||g||_{2,1} ||f||_{2,inf}. f and g must be
/// sampled on the same weights.
HolderPairing holder_pairing(const WeightedSamples& f, const WeightedSamples& g);

struct IntersectionReport {
  double p = 0.0, q = 0.0, r = 0.0;
  std::vector<double> radii;
  std::vector<double> norm_p;   // L^p
  std::vector<double> norm_q1;  // L^{q,1}
  std::vector<double> norm_r;   // L^r
  bool p_converged = false;
  bool q1_converged = false;
  bool r_converged = false;
  bool all_converged() const noexcept { return p_converged && q1_converged && r_converged; }
};

struct TruncationOptions {
  double initial_radius = 1.0;
  double growth = 2.0;
  double tolerance = 1e-3;
};

/// Computes the L^p, L^{q,1} and L^r norms of the samples restricted to the
/// nested truncations {radius <= R_k}, R_k = R_0 growth^k, up to the first
/// R_k covering every sample. A sequence converges when its last relative
/// step is below the tolerance.
IntersectionReport intersection_check(const WeightedSamples& samples, std::span<const double> radii, double p,
                                      double q, double r, const TruncationOptions& options = {});

struct DecayReport {
  bool passed = false;
  bool fit_ok = false;
  std::string reason;
  /// Constants of |omega/r^2| <= C/r and |omega/r^2| <= C/(r^2 (1+r^2+z^2)^2).
  double c_inverse_r = 0.0;
  double c_decay = 0.0;
  /// C_1^(2/3) C_2^(1/3), constant of the interpolated majorant.
  double c_interpolated = 0.0;
  IntersectionReport majorant;
  double l21 = 0.0;
};

struct DecayOptions {
  /// Relative growth of a majorant constant between the inner half of the
  /// grid and the full grid that counts as "no decay".
  double boundary_growth_tolerance = 0.01;
  double min_radius = 0x1p-10;
  double max_radius = 0x1p22;
  int cells_per_octave = 8;
  int angular_cells = 64;
  TruncationOptions truncation{};
};

/// Checks the decay hypothesis |omega| <= C (1 + r^2 + z^2)^-2 on a d = 4
/// vorticity sample: fits the two pointwise majorants of omega/r^2, checks
/// that the L^{7/4} and L^{17/8} norms of the interpolated majorant
/// C r^(-4/3) (1 + r^2 + z^2)^(-2/3) converge over the half-plane, and
/// computes ||omega/r^2||_{2,1} from resolved_transported_samples.
DecayReport decay_hypothesis_check(const ScalarField& omega, Dimension d = kDefaultDimension,
                                   const DecayOptions& options = {});

/// Log-polar samples of C r^(-4/3) (1 + rho^2)^(-2/3) under r^2 dr dz, with the
/// polar radius of each sample in `radii`.
WeightedSamples interpolated_majorant_samples(double c, const DecayOptions& options, std::vector<double>& radii);

}  // namespace axeuler::lorentz
