#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "axeuler/lorentz.hpp"

using namespace axeuler;
using namespace axeuler::lorentz;

namespace {

WeightedSamples random_simple(std::mt19937_64& rng, int max_size = 30) {
  std::uniform_int_distribution<int> n(1, max_size);
  std::uniform_real_distribution<double> v(0.0, 3.0);
  std::uniform_real_distribution<double> w(0.01, 2.0);
  std::bernoulli_distribution tie(0.3);
  WeightedSamples s;
  const int size = n(rng);
  for (int k = 0; k < size; ++k) s.push_back(tie(rng) ? 1.5 : v(rng), w(rng));
  return s;
}

// p^(1/q) (int_0^inf t^(q-1) mu(t)^(q/p) dt)^(1/q) summed layer by layer,
// with mu counted by brute force on each interval between sample values.
double quasinorm_reference(const WeightedSamples& s, double p, double q) {
  std::vector<double> levels(s.values());
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const double lo = levels[k], hi = levels[k + 1];
    double mu = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.values()[i] > lo) mu += s.weights()[i];
    integral += std::pow(mu, q / p) * (std::pow(hi, q) - std::pow(lo, q)) / q;
  }
  return std::pow(p, 1.0 / q) * std::pow(integral, 1.0 / q);
}

}  // namespace

TEST_CASE("weighted samples take absolute values and validate weights") {
  const std::vector<double> v{-2.0, 1.0};
  const std::vector<double> w{1.0, 3.0};
  const WeightedSamples s(v, w);
  CHECK(s.values()[0] == 2.0);
  CHECK_THROWS_AS(WeightedSamples(v, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedSamples(v, std::vector<double>{1.0, 0.0}), std::invalid_argument);
  WeightedSamples t;
  CHECK_THROWS_AS(t.push_back(NAN, 1.0), std::invalid_argument);
}

TEST_CASE("exponents are validated") {
  CHECK_THROWS_AS(LorentzExponents(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LorentzExponents(2.0, 0.5), std::invalid_argument);
  CHECK_NOTHROW(LorentzExponents(2.0, kInf));
}

TEST_CASE("distribution function examples") {
  const WeightedSamples zero(std::vector<double>{0, 0}, std::vector<double>{1, 1});
  CHECK(distribution_function(zero, 0.0) == 0.0);
  CHECK(distribution_function(zero, 3.0) == 0.0);
  const WeightedSamples s(std::vector<double>{2, 1}, std::vector<double>{1, 3});
  CHECK(distribution_function(s, 1.5) == 1.0);
  CHECK(distribution_function(s, 0.5) == 4.0);
  CHECK(distribution_function(s, 1.0) == 1.0);
  CHECK(distribution_function(s, 2.0) == 0.0);
}

TEST_CASE("quasinorm examples") {
  const WeightedSamples indicator(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 1});
  CHECK(lorentz_quasinorm(indicator, {2, 1}) == doctest::Approx(4.0).epsilon(1e-15));
  const WeightedSamples s(std::vector<double>{2, 1}, std::vector<double>{1, 3});
  CHECK(lorentz_quasinorm(s, {2, 2}) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
  CHECK(lorentz_quasinorm(WeightedSamples{}, {2, 1}) == 0.0);
}

TEST_CASE("weak quasinorm examples") {
  const WeightedSamples indicator(std::vector<double>{1, 1}, std::vector<double>{2.5, 1.5});
  CHECK(weak_quasinorm(indicator, 2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(weak_quasinorm(WeightedSamples{}, 2) == 0.0);
  const WeightedSamples s(std::vector<double>{2, 1}, std::vector<double>{1, 3});
  CHECK(weak_quasinorm(s, 2) == 2.0);
  CHECK(lorentz_quasinorm(s, {2, kInf}) == 2.0);
}

TEST_CASE("step integral matches the defining integral") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_simple(rng);
    for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{1.5, 3.0}, std::pair{7.0 / 4.0, 2.0}, std::pair{3.0, 1.25}})
      CHECK(lorentz_quasinorm(s, {p, q}) == doctest::Approx(quasinorm_reference(s, p, q)).epsilon(1e-12));
  }
}

TEST_CASE("L^{p,p} equals L^p on random simple functions") {
  std::mt19937_64 rng(22);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_simple(rng);
    for (double p : {1.0, 7.0 / 4.0, 2.0, 17.0 / 8.0}) {
      double direct = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) direct += std::pow(s.values()[i], p) * s.weights()[i];
      direct = std::pow(direct, 1.0 / p);
      worst = std::max(worst, std::abs(lorentz_quasinorm(s, {p, p}) - direct) / direct);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("indicator closed form 2 sqrt(m)") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> w(0.001, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    WeightedSamples s;
    double m = 0.0;
    for (int k = 0; k < 1 + trial % 17; ++k) {
      const double wk = w(rng);
      s.push_back(1.0, wk);
      m += wk;
    }
    CHECK(std::abs(lorentz_quasinorm(s, {2, 1}) - 2 * std::sqrt(m)) <= 1e-12 * 2 * std::sqrt(m));
  }
}

TEST_CASE("homogeneity, rearrangement invariance and monotone truncation") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_simple(rng);
    for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{2.0, kInf}, std::pair{1.5, 4.0}}) {
      const double base = lorentz_quasinorm(s, {p, q});
      CHECK(lorentz_quasinorm(s.scaled(2.0), {p, q}) == doctest::Approx(2.0 * base).epsilon(1e-14));
      CHECK(lorentz_quasinorm(s.scaled(0.3), {p, q}) == doctest::Approx(0.3 * base).epsilon(1e-14));

      std::vector<std::size_t> perm(s.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      WeightedSamples shuffled;
      for (auto i : perm) shuffled.push_back(s.values()[i], s.weights()[i]);
      CHECK(lorentz_quasinorm(shuffled, {p, q}) == base);

      WeightedSamples bigger = s;
      bigger.push_back(std::uniform_real_distribution<double>(0.0, 4.0)(rng), 0.5);
      CHECK(lorentz_quasinorm(bigger, {p, q}) >= base);
    }
  }
}

TEST_CASE("weak norm never exceeds the L^{2,1} quasinorm") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_simple(rng);
    CHECK(weak_quasinorm(s, 2) <= lorentz_quasinorm(s, {2, 1}) * (1 + 1e-14));
  }
}

TEST_CASE("step distribution merges ties") {
  const WeightedSamples s(std::vector<double>{1, 3, 1, 0, 3}, std::vector<double>{1, 2, 3, 4, 5});
  const auto st = step_distribution(s);
  REQUIRE(st.levels.size() == 2);
  CHECK(st.levels[0] == 3.0);
  CHECK(st.cumulative[0] == 7.0);
  CHECK(st.levels[1] == 1.0);
  CHECK(st.cumulative[1] == 11.0);
}

TEST_CASE("field samples carry the r^(d-2) cell weight") {
  const auto g = make_uniform_grid(2, -1, 1, 2, 2);
  const ScalarField f(g, {1, -2, 3, 4});
  const auto s = samples_from_field(f, Dimension(4));
  CHECK(s.weights()[0] == doctest::Approx(0.25 * 1.0));
  CHECK(s.weights()[2] == doctest::Approx(2.25 * 1.0));
  CHECK(s.values()[1] == 2.0);
  const auto t = transported_samples(f, Dimension(4));
  CHECK(t.values()[2] == doctest::Approx(3.0 / 2.25));
}

TEST_CASE("weak norm of g stays below sqrt(8 pi) and is scale and translation invariant") {
  const double bound = std::sqrt(8.0 * std::numbers::pi);
  const auto base = weak_norm_of_g(1, 0, 256, 8);
  CHECK(base.value > 0.0);
  CHECK(base.value <= bound * 1.02);
  CHECK(base.value >= std::sqrt(std::numbers::pi / 2.0) * 0.9);
  CHECK(base.extent_sufficient);
  CHECK(base.far_field_relative_change < 1e-3);
  const auto moved = weak_norm_of_g(2, 5, 256, 16);
  CHECK(moved.value == doctest::Approx(base.value).epsilon(0.01));
  const auto small = weak_norm_of_g(0.5, -3, 256, 4);
  CHECK(small.value == doctest::Approx(base.value).epsilon(0.01));
  CHECK_THROWS_AS(weak_norm_of_g(0, 0, 256, 8), std::invalid_argument);
  CHECK_THROWS_AS(weak_norm_of_g(1, 0, 32, 8), std::invalid_argument);
}

TEST_CASE("holder pairing examples and the unit constant") {
  const WeightedSamples ind(std::vector<double>{1, 1}, std::vector<double>{1.5, 2.5});
  const auto p = holder_pairing(ind, ind);
  CHECK(p.lhs == doctest::Approx(4.0));
  CHECK(p.rhs_product == doctest::Approx(8.0));
  CHECK(p.ratio == doctest::Approx(0.5));

  const WeightedSamples zero(std::vector<double>{0, 0}, std::vector<double>{1.5, 2.5});
  CHECK(holder_pairing(zero, ind).lhs == 0.0);
  CHECK_THROWS_AS(holder_pairing(ind, WeightedSamples(std::vector<double>{1}, std::vector<double>{1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(holder_pairing(ind, WeightedSamples(std::vector<double>{1, 1}, std::vector<double>{1.5, 2.0})),
                  std::invalid_argument);

  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> v(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto f = random_simple(rng);
    std::vector<double> gv(f.size());
    for (auto& x : gv) x = v(rng);
    const auto r = holder_pairing(f, WeightedSamples(gv, f.weights()));
    CHECK(r.lhs <= r.rhs_product * (1 + 1e-14));
  }
}

TEST_CASE("intersection check on the decay majorant") {
  std::vector<double> radii;
  const auto s = interpolated_majorant_samples(1.0, DecayOptions{}, radii);
  const auto rep = intersection_check(s, radii, 7.0 / 4.0, 2.0, 17.0 / 8.0);
  CHECK(rep.p_converged);
  CHECK(rep.r_converged);
  CHECK(rep.q1_converged);
  CHECK(std::isfinite(rep.norm_p.back()));
}

TEST_CASE("intersection check on an indicator and under scaling") {
  WeightedSamples s;
  std::vector<double> radii;
  for (int k = 0; k < 10; ++k) {
    s.push_back(1.0, 0.1);
    radii.push_back(0.1 * (k + 1));
  }
  const auto rep = intersection_check(s, radii, 1, 2, 3);
  CHECK(rep.all_converged());
  CHECK(rep.norm_p.back() == doctest::Approx(1.0));
  const auto doubled = intersection_check(s.scaled(2.0), radii, 1, 2, 3);
  CHECK(doubled.norm_p.back() == doctest::Approx(2 * rep.norm_p.back()).epsilon(1e-14));
  CHECK(doubled.norm_q1.back() == doctest::Approx(2 * rep.norm_q1.back()).epsilon(1e-14));
  CHECK(doubled.norm_r.back() == doctest::Approx(2 * rep.norm_r.back()).epsilon(1e-14));
  CHECK_THROWS_AS(intersection_check(s, radii, 2, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(intersection_check(s, radii, 1, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(intersection_check(s, std::vector<double>{1.0}, 1, 2, 3), std::invalid_argument);
}

TEST_CASE("decay check passes on the gaussian vorticity and is refinement stable") {
  const auto coarse = decay_hypothesis_check(gaussian_test_vorticity(make_uniform_grid(6, -6, 6, 96, 192)));
  const auto fine = decay_hypothesis_check(gaussian_test_vorticity(make_uniform_grid(6, -6, 6, 192, 384)));
  CHECK(coarse.passed);
  CHECK(fine.passed);
  CHECK(fine.majorant.p_converged);
  CHECK(fine.majorant.r_converged);
  CHECK(std::isfinite(fine.l21));
  CHECK(fine.l21 == doctest::Approx(coarse.l21).epsilon(0.01));
}

TEST_CASE("decay check rejects a field without decay") {
  const auto g = make_uniform_grid(4, -4, 4, 64, 64);
  const auto w = sample_scalar(g, [](double r, double) { return r * r; });
  const auto rep = decay_hypothesis_check(w);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.fit_ok);
  CHECK_FALSE(rep.reason.empty());
}

TEST_CASE("decay check on the zero field") {
  const auto rep = decay_hypothesis_check(ScalarField(make_uniform_grid(2, -1, 1, 8, 8)));
  CHECK(rep.passed);
  CHECK(rep.l21 == 0.0);
  CHECK(rep.majorant.norm_p.back() == 0.0);
  CHECK_THROWS_AS(decay_hypothesis_check(ScalarField(make_uniform_grid(2, -1, 1, 8, 8)), Dimension(3)),
                  std::invalid_argument);
}

TEST_CASE("resolved transported samples recover the 1/r profile of omega = r") {
  // |{1/r > t}| = min(R, 1/t)^3 L / 3, so the (2,1) quasinorm is 6 sqrt(L R / 3).
  const double R = 1.0, L = 2.0;
  const double exact = 6.0 * std::sqrt(L * R / 3.0);
  for (std::size_t n : {16, 64}) {
    const auto g = make_uniform_grid(R, 0.0, L, n, 4);
    ScalarField w(g);
    for (std::size_t i = 0; i < g.nr(); ++i)
      for (std::size_t j = 0; j < g.nz(); ++j) w.values[g.index(i, j)] = g.r(i);
    const double plain = lorentz_quasinorm(transported_samples(w, Dimension(4)), {2.0, 1.0});
    const double resolved = lorentz_quasinorm(resolved_transported_samples(w, Dimension(4)), {2.0, 1.0});
    CHECK(std::abs(resolved - exact) < std::abs(plain - exact));
    CHECK(resolved == doctest::Approx(exact).epsilon(1e-3));
  }
  CHECK_THROWS_AS(resolved_transported_samples(ScalarField(make_uniform_grid(1, 0, 1, 4, 4)), Dimension(4), 0),
                  std::invalid_argument);
}
