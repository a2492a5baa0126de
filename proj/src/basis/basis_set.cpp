#include "tensoruq/basis.hpp"
#include "tensoruq/error.hpp"

namespace tensoruq {

std::ptrdiff_t BasisSet::position(const MultiIndex& alpha) const {
  const auto it = lookup_.find(alpha);
  return it == lookup_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

BasisSet build_basis(const ParameterSpace& space, int p, std::size_t cap) {
  if (space.dim() == 0) throw Error(ErrorCode::invalid_argument, "parameter space is empty");
  if (p < 0 || p > kMaxPolynomialDegree)
    throw Error(ErrorCode::out_of_range, "order must lie in [0, " +
                                             std::to_string(kMaxPolynomialDegree) + "]");
  for (const auto& param : space.params()) {
    if (param.quad_order < p + 1)
      throw Error(ErrorCode::under_resolved_quadrature,
                  "parameter '" + param.name + "' has q=" + std::to_string(param.quad_order) +
                      " < p+1=" + std::to_string(p + 1));
  }

  BasisSet basis;
  basis.space_ = space;
  basis.order_ = p;
  basis.indices_ = enumerate_multi_indices(static_cast<int>(space.dim()), p, cap);
  for (std::size_t i = 0; i < basis.indices_.size(); ++i) basis.lookup_.emplace(basis.indices_[i], i);

  std::vector<double> psi(static_cast<std::size_t>(p) + 1);
  for (const auto& param : space.params()) {
    QuadratureRule rule = gauss_quadrature(param.dist, param.quad_order);
    const int q = param.quad_order;
    Eigen::MatrixXd v(q, p + 1);
    Eigen::MatrixXd wv(q, p + 1);
    for (int i = 0; i < q; ++i) {
      orthonormal_polys(param.dist, rule.nodes[i], psi);
      for (int a = 0; a <= p; ++a) {
        v(i, a) = psi[a];
        wv(i, a) = rule.weights[i] * psi[a];
      }
    }
    basis.rules_.push_back(std::move(rule));
    basis.node_tables_.push_back(std::move(v));
    basis.weighted_tables_.push_back(std::move(wv));
  }
  return basis;
}

std::vector<double> grid_point(const std::vector<QuadratureRule>& rules,
                               std::span<const int> index) {
  if (index.size() != rules.size())
    throw Error(ErrorCode::shape_mismatch, "grid index has " + std::to_string(index.size()) +
                                               " entries, expected " +
                                               std::to_string(rules.size()));
  std::vector<double> point(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) {
    const int q = static_cast<int>(rules[k].size());
    if (index[k] < 1 || index[k] > q)
      throw Error(ErrorCode::out_of_range, "grid index " + std::to_string(index[k]) +
                                               " out of [1, " + std::to_string(q) +
                                               "] in dimension " + std::to_string(k + 1));
    point[k] = rules[k].nodes[index[k] - 1];
  }
  return point;
}

std::vector<double> grid_point(const ParameterSpace& space, std::span<const int> index) {
  std::vector<QuadratureRule> rules;
  rules.reserve(space.dim());
  for (const auto& p : space.params()) rules.push_back(gauss_quadrature(p.dist, p.quad_order));
  return grid_point(rules, index);
}

}  // namespace tensoruq
