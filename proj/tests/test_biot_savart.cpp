#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "axeuler/biot_savart.hpp"
#include "axeuler/corpus.hpp"
#include "oracles.hpp"

using namespace axeuler;
using namespace axeuler::biot_savart;

namespace {

std::vector<Point> probes() {
  std::vector<Point> out;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) out.push_back({0.1 + 0.2 * i, -2.2 + 0.4 * j});
  return out;
}

double gaussian_error(std::size_t n, Dimension d) {
  const auto g = make_uniform_grid(3, -3, 3, n, n);
  const auto pts = probes();
  const double eps = std::max(g.hr(), g.hz());
  const auto got = velocity_from_vorticity({gaussian_test_vorticity(g, d), pts, KernelParams(d, 32, eps)});
  std::vector<double> ur, uz;
  for (const auto& p : pts) {
    const auto u = gaussian_velocity(p.r, p.z, d);
    ur.push_back(u.ur);
    uz.push_back(u.uz);
  }
  return relative_max_error(got, ur, uz);
}

}  // namespace

TEST_CASE("single source matches the theta-integrated kernel with prefactor (d-2)/(2 pi)") {
  for (int d : {3, 4, 5}) {
    const Source s{0.8, 0.3, 0.7, 0};
    const Point t{1.1, -0.2};
    const auto got = direct_sum(std::span(&s, 1), std::span(&t, 1), KernelParams(Dimension(d)));
    const double pref = (d - 2) / (2 * std::numbers::pi);
    const double dz = s.z - t.z;
    CHECK(got.ur[0] ==
          doctest::Approx(pref * s.strength * dz * oracle::tau_reference(d, t.r, s.r, dz, true)).epsilon(1e-10));
    CHECK(got.uz[0] ==
          doctest::Approx(pref * s.strength * oracle::tau_reference(d, t.r, s.r, dz, false)).epsilon(1e-10));
  }
}

TEST_CASE("zero vorticity reconstructs the zero velocity") {
  const auto g = make_uniform_grid(2, -1, 1, 8, 8);
  const auto u = velocity_on_grid(ScalarField(g), KernelParams(Dimension(4), 32, 0.1));
  CHECK(max_abs(u.ur) == 0.0);
  CHECK(max_abs(u.uz) == 0.0);
}

TEST_CASE("gaussian reconstruction converges monotonically to below 2 percent") {
  double prev = INFINITY;
  for (std::size_t n : {32, 64, 128}) {
    const double e = gaussian_error(n, Dimension(4));
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("the prefactor is right in d = 3 and d = 5 as well") {
  for (int d : {3, 5}) {
    // A wrong prefactor would leave an O(1) relative error at every resolution.
    const double e32 = gaussian_error(32, Dimension(d));
    const double e64 = gaussian_error(64, Dimension(d));
    CHECK(e64 < 0.6 * e32);
    CHECK(e64 < 0.15);
  }
}

TEST_CASE("exclusion mode also reconstructs the gaussian field") {
  const auto g = make_uniform_grid(3, -3, 3, 128, 128);
  const auto pts = probes();
  const auto got = velocity_from_vorticity({gaussian_test_vorticity(g), pts, KernelParams(Dimension(4), 32, 0.0)});
  std::vector<double> ur, uz;
  for (const auto& p : pts) {
    ur.push_back(gaussian_velocity(p.r, p.z).ur);
    uz.push_back(gaussian_velocity(p.r, p.z).uz);
  }
  CHECK(relative_max_error(got, ur, uz) < 0.05);
}

TEST_CASE("mirror-paired sources give bitwise mirror-symmetric velocity") {
  const auto g = make_uniform_grid(3, -2, 2, 24, 40);
  const auto omega = gaussian_test_vorticity(g);
  const auto u = velocity_on_grid(omega, KernelParams(Dimension(4), 32, 0.1));
  for (std::size_t i = 0; i < g.nr(); ++i) {
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const std::size_t m = g.index(i, g.nz() - 1 - j);
      CHECK(u.ur[g.index(i, j)] == u.ur[m]);
      CHECK(u.uz[g.index(i, j)] == -u.uz[m]);
    }
  }
}

TEST_CASE("mirror_paired_order interleaves rows") {
  const auto g = make_uniform_grid(1, -1, 1, 2, 3);
  CHECK(mirror_paired_order(g) == std::vector<std::size_t>{0, 2, 1, 3, 5, 4});
}

TEST_CASE("reconstruction is linear in omega") {
  const auto g = make_uniform_grid(2, -2, 2, 16, 16);
  const auto w = gaussian_test_vorticity(g);
  ScalarField w3(g, w.values);
  for (double& v : w3.values) v *= 3.0;
  const KernelParams params(Dimension(4), 32, 0.2);
  const auto a = velocity_on_grid(w, params);
  const auto b = velocity_on_grid(w3, params);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(b.ur[k] == doctest::Approx(3 * a.ur[k]).epsilon(1e-13).scale(1e-14));
    CHECK(b.uz[k] == doctest::Approx(3 * a.uz[k]).epsilon(1e-13).scale(1e-14));
  }
}

TEST_CASE("targets are validated") {
  const auto g = make_uniform_grid(1, -1, 1, 4, 4);
  const auto w = gaussian_test_vorticity(g);
  CHECK_THROWS_AS(ReconstructionJob(w, {{2.0, 0.0}}, KernelParams()), std::out_of_range);
  CHECK_THROWS_AS(ReconstructionJob(w, {{0.5, NAN}}, KernelParams()), std::invalid_argument);
  const Source s{1, 0, 1, 0};
  const std::vector<Point> t{{0.5, 0}, {0.6, 0}};
  const std::vector<std::size_t> ex{0};
  CHECK_THROWS_AS(direct_sum(std::span(&s, 1), t, KernelParams(), ex), std::invalid_argument);
}

TEST_CASE("velocity bound right-hand side") {
  const auto g = make_uniform_grid(4, -4, 4, 64, 64);
  CHECK(velocity_bound_rhs(ScalarField(g), {1.0, 0.0}) == 0.0);
  const auto w = gaussian_test_vorticity(g);
  const double rhs = velocity_bound_rhs(w, {1.0, 0.0});
  CHECK(rhs >= std::exp(-1.0));
  ScalarField w2(g, w.values);
  for (double& v : w2.values) v *= 2.0;
  CHECK(velocity_bound_rhs(w2, {1.0, 0.0}) == 2 * rhs);
  CHECK_THROWS_AS(velocity_bound_rhs(w, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(velocity_bound_rhs(w, {1.0, 0.0}, Dimension(5)), std::invalid_argument);
}

TEST_CASE("velocity bound holds for the exact gaussian velocity") {
  const auto g = make_uniform_grid(4, -4, 4, 96, 96);
  const auto w = gaussian_test_vorticity(g);
  for (double r : {0.2, 0.7, 1.3, 2.5})
    for (double z : {-1.5, 0.0, 0.4, 2.0}) CHECK(std::abs(gaussian_velocity(r, z).ur) <= velocity_bound_rhs(w, {r, z}));
}

TEST_CASE("stretching ratio edge cases") {
  const auto g = make_uniform_grid(2, -1, 1, 8, 8);
  const auto zero = stretching_ratio(VectorFieldRZ(g), ScalarField(g));
  CHECK(zero.zero_field);
  CHECK(zero.ratio == 0.0);
  CHECK_THROWS_AS(stretching_ratio(gaussian_test_field(g), ScalarField(g)), std::invalid_argument);
  CHECK_THROWS_AS(stretching_ratio(VectorFieldRZ(g), ScalarField(g), Dimension(3)), std::invalid_argument);
  const auto other = make_uniform_grid(2, -1, 1, 8, 9);
  CHECK_THROWS_AS(stretching_ratio(VectorFieldRZ(other), ScalarField(g)), std::invalid_argument);
}

TEST_CASE("stretching ratio of the gaussian field uses the analytic axis limit") {
  const auto g = make_uniform_grid(4, -4, 4, 128, 128);
  const auto s = stretching_ratio(gaussian_test_field(g), gaussian_test_vorticity(g));
  // On the axis u_r / r = (1 - 2 z^2) exp(-z^2), largest at the node z = h/2.
  const double z0 = 0.5 * g.hz();
  const double peak = (1 - 2 * z0 * z0) * std::exp(-z0 * z0);
  // The r^4 term of exp(-r^2) leaves (1080/256) h^4 after quadratic extrapolation.
  CHECK(s.axis_sup == doctest::Approx(peak).epsilon(4.5 * std::pow(g.hr(), 4)));
  CHECK(s.sup_ur_over_r == s.axis_sup);
  CHECK(s.l21 > 0.0);
  CHECK(s.ratio == doctest::Approx(s.sup_ur_over_r / s.l21));
}

TEST_CASE("stretching ratio is invariant under rescaling of a corpus field") {
  const auto fields = corpus::make_corpus(7, 3);
  const auto g = corpus::corpus_grid(96);
  for (const auto& f : fields) {
    const double base = stretching_ratio(f.sample_velocity(g), f.sample_vorticity(g)).ratio;
    for (double lambda : {0.5, 2.0}) {
      const auto gs = g.scaled(1.0 / lambda);
      const double scaled = stretching_ratio(f.sample_velocity(gs, lambda), f.sample_vorticity(gs, lambda)).ratio;
      CHECK(scaled == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

#ifdef _OPENMP
TEST_CASE("results do not depend on the thread count") {
  const auto g = make_uniform_grid(2, -2, 2, 24, 24);
  const auto w = gaussian_test_vorticity(g);
  const KernelParams params(Dimension(4), 32, 0.1);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = velocity_on_grid(w, params);
  omp_set_num_threads(4);
  const auto b = velocity_on_grid(w, params);
  omp_set_num_threads(saved);
  CHECK(a.ur == b.ur);
  CHECK(a.uz == b.uz);
}
#endif
