#include "logwg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace logwg {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex cache_mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  // Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const Real b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussRule rule;
  rule.nodes = eig.eigenvalues().array();
  rule.weights = 2.0 * eig.eigenvectors().row(0).transpose().array().square();
  cache.emplace(order, rule);
  return rule;
}

Real integrate(const std::function<Real(Real)>& f, Real lo, Real hi, int panels, int order) {
  if (hi <= lo) return 0.0;
  const GaussRule rule = gauss_legendre(order);
  const Real h = (hi - lo) / panels;
  Real acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const Real mid = lo + (p + 0.5) * h;
    Real s = 0.0;
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) s += rule.weights[q] * f(mid + 0.5 * h * rule.nodes[q]);
    acc += 0.5 * h * s;
  }
  return acc;
}

} // namespace logwg
