#pragma once

#include <memory>
#include <vector>

namespace axeuler::quadrature {

/// Nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule. Tables are built once per order and shared;
/// the returned rule is immutable and safe to use from any thread.
std::shared_ptr<const Rule> gauss_legendre(int n);

/// n-point Gauss-Chebyshev rule (first kind) for the weight (1 - x^2)^(-1/2).
/// The weight function is absorbed: integral f(x) (1-x^2)^(-1/2) dx ~ sum w_k f(x_k).
std::shared_ptr<const Rule> gauss_chebyshev(int n);

/// Integrates f over [a, b] with the n-point Gauss-Legendre rule.
template <class F>
double integrate(const Rule& rule, double a, double b, F&& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return half * sum;
}

}  // namespace axeuler::quadrature
