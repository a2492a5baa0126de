#include <cmath>

#include "tensoruq/error.hpp"
#include "tensoruq/kernels.hpp"
#include "tensoruq/recovery.hpp"

namespace tensoruq {

double objective(const CpFactors& x, const SampleSet& samples, const BasisSet& basis,
                 double lambda) {
  const double data = 0.5 * residual_on_omega(x, samples).squaredNorm();
  if (lambda == 0.0) return data;
  return data + lambda * gpc_coefficients(x, basis).lpNorm<1>();
}

SubproblemOperators subproblem_operators(std::size_t k, const CpFactors& x,
                                         const SampleSet& samples, const BasisSet& basis) {
  if (k >= x.dim())
    throw Error(ErrorCode::out_of_range, "dimension " + std::to_string(k) + " out of range");
  if (x.shape() != samples.shape() || x.shape() != basis.grid_shape())
    throw Error(ErrorCode::shape_mismatch, "factors, samples and basis disagree on the grid");

  const int r = x.rank();
  const int q = static_cast<int>(x.factor(k).rows());
  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(q) * r;

  SubproblemOperators ops;
  ops.b = samples.values();

  // Data rows: sample s touches column j*q + i_k with weight prod_{m != k} U_m[i_m, j].
  ops.a = Eigen::MatrixXd::Zero(n, cols);
  const auto own = samples.offsets(k);
  Eigen::VectorXd prod(n);
  for (int j = 0; j < r; ++j) {
    prod.setOnes();
    for (std::size_t m = 0; m < x.dim(); ++m) {
      if (m == k) continue;
      const auto& u = x.factor(m);
      kernels::gather_multiply({prod.data(), static_cast<std::size_t>(prod.size())},
                               {u.col(j).data(), static_cast<std::size_t>(u.rows())},
                               samples.offsets(m));
    }
    for (Eigen::Index s = 0; s < n; ++s) ops.a(s, static_cast<Eigen::Index>(j) * q + own[s]) = prod[s];
  }

  // Penalty rows: <X, W_alpha> = sum_j (W_k[:, alpha_k] . u_k^j) prod_{m != k} T_m[alpha_m, j].
  std::vector<Eigen::MatrixXd> projected(x.dim());
  for (std::size_t m = 0; m < x.dim(); ++m)
    if (m != k) projected[m] = basis.weighted_table(m).transpose() * x.factor(m);

  const auto& indices = basis.indices();
  const auto& wk = basis.weighted_table(k);
  ops.c.resize(static_cast<Eigen::Index>(indices.size()), cols);
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const auto& alpha = indices[a].alpha;
    const auto row = static_cast<Eigen::Index>(a);
    for (int j = 0; j < r; ++j) {
      double g = 1.0;
      for (std::size_t m = 0; m < alpha.size(); ++m)
        if (m != k) g *= projected[m](alpha[m], j);
      for (int i = 0; i < q; ++i) ops.c(row, static_cast<Eigen::Index>(j) * q + i) = wk(i, alpha[k]) * g;
    }
  }
  return ops;
}

double relative_error(const Eigen::VectorXd& predicted, const Eigen::VectorXd& observed) {
  if (predicted.size() != observed.size())
    throw Error(ErrorCode::shape_mismatch, "prediction and observation sizes differ");
  const double diff = (predicted - observed).norm();
  const double ref = observed.norm();
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / ref;
}

}  // namespace tensoruq
