#include "axeuler/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace axeuler::quadrature {
namespace {

Rule build_gauss_legendre(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule build_gauss_chebyshev(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, std::numbers::pi / n);
  for (int k = 0; k < n; ++k) rule.nodes[k] = -std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n));
  return rule;
}

template <Rule (*Build)(int)>
std::shared_ptr<const Rule> cached(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Rule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Rule>(Build(n));
  return slot;
}

}  // namespace

std::shared_ptr<const Rule> gauss_legendre(int n) { return cached<build_gauss_legendre>(n); }
std::shared_ptr<const Rule> gauss_chebyshev(int n) { return cached<build_gauss_chebyshev>(n); }

}  // namespace axeuler::quadrature
