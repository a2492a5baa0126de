#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "tensoruq/error.hpp"
#include "tensoruq/recovery.hpp"

namespace tensoruq {
namespace {

// Rescale the columns of each rank-1 term to a common norm across dimensions.
// X itself is unchanged; this only keeps the factors away from over/underflow.
void balance_columns(CpFactors& x) {
  const double d = static_cast<double>(x.dim());
  for (int j = 0; j < x.rank(); ++j) {
    double log_mean = 0.0;
    bool degenerate = false;
    for (std::size_t k = 0; k < x.dim(); ++k) {
      const double nk = x.factor(k).col(j).norm();
      if (!(nk > 0.0) || !std::isfinite(nk)) {
        degenerate = true;
        break;
      }
      log_mean += std::log(nk) / d;
    }
    if (degenerate) continue;
    const double target = std::exp(log_mean);
    for (std::size_t k = 0; k < x.dim(); ++k) {
      auto col = x.factor(k).col(j);
      col *= target / col.norm();
    }
  }
}

}  // namespace

void RecoveryConfig::validate() const {
  if (rank < 1) throw Error(ErrorCode::invalid_argument, "rank must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::invalid_argument, "lambda must be finite and >= 0");
  if (max_sweeps < 1) throw Error(ErrorCode::invalid_argument, "max_sweeps must be >= 1");
  if (!(sweep_tol > 0.0) || !(subproblem_tol > 0.0))
    throw Error(ErrorCode::invalid_argument, "tolerances must be > 0");
  if (subproblem_max_iter < 1)
    throw Error(ErrorCode::invalid_argument, "subproblem_max_iter must be >= 1");
  if (!(admm_rho > 0.0)) throw Error(ErrorCode::invalid_argument, "admm_rho must be > 0");
}

CpFactors init_factors(std::span<const int> shape, int rank, std::uint64_t seed,
                       const SampleSet& samples) {
  if (rank < 1) throw Error(ErrorCode::invalid_argument, "rank must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(0.5, 1.5);
  std::vector<Eigen::MatrixXd> factors;
  factors.reserve(shape.size());
  for (int q : shape) {
    Eigen::MatrixXd u(q, rank);
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      for (Eigen::Index i = 0; i < u.rows(); ++i) u(i, j) = draw(rng);
    factors.push_back(std::move(u));
  }
  CpFactors x(std::move(factors));

  const double target = samples.values().cwiseAbs().mean();
  const double current = cp_entries(x, samples).cwiseAbs().mean();
  if (current > 0.0) {
    const double per_dim = std::pow(target / current, 1.0 / static_cast<double>(x.dim()));
    for (std::size_t k = 0; k < x.dim(); ++k) x.factor(k) *= per_dim;
  }
  return x;
}

FitResult fit(const SampleSet& samples, const BasisSet& basis, const RecoveryConfig& cfg) {
  cfg.validate();
  if (samples.size() == 0) throw Error(ErrorCode::empty_samples, "sample set is empty");
  return fit(samples, basis, cfg, init_factors(basis.grid_shape(), cfg.rank, cfg.init_seed, samples));
}

FitResult fit(const SampleSet& samples, const BasisSet& basis, const RecoveryConfig& cfg,
              const CpFactors& start) {
  cfg.validate();
  if (samples.size() == 0) throw Error(ErrorCode::empty_samples, "sample set is empty");
  const auto shape = basis.grid_shape();
  if (samples.shape() != shape)
    throw Error(ErrorCode::shape_mismatch, "sample grid does not match the basis grid");
  if (start.shape() != shape || start.rank() != cfg.rank)
    throw Error(ErrorCode::shape_mismatch, "starting factors do not match grid and rank");

  FitResult out;
  const int widest = *std::max_element(shape.begin(), shape.end());
  if (samples.size() < static_cast<std::size_t>(cfg.rank) * static_cast<std::size_t>(widest))
    out.warnings.push_back("only " + std::to_string(samples.size()) + " samples for rank " +
                           std::to_string(cfg.rank) + "; at least " +
                           std::to_string(cfg.rank * widest) + " recommended");
  out.factors = start;
  out.initial_cost = objective(out.factors, samples, basis, cfg.lambda);

  // ADMM state carried from one sweep to the next for each dimension.
  std::vector<Eigen::VectorXd> duals(shape.size());
  std::vector<double> rhos(shape.size(), cfg.admm_rho);

  // Below this the residual is at the level the ridge guard allows and relative
  // changes are noise.
  const double floor = 1e-20 * (1.0 + samples.values().squaredNorm());
  double previous = out.initial_cost;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    for (std::size_t k = 0; k < shape.size(); ++k) {
      auto& u = out.factors.factor(k);
      const auto ops = subproblem_operators(k, out.factors, samples, basis);
      const Eigen::VectorXd z0 = Eigen::Map<const Eigen::VectorXd>(u.data(), u.size());
      const auto sub = solve_subproblem(ops.a, ops.b, ops.c, cfg.lambda, z0, cfg.subproblem_tol,
                                        cfg.subproblem_max_iter, rhos[k], duals[k]);
      u = Eigen::Map<const Eigen::MatrixXd>(sub.z.data(), u.rows(), u.cols());
      duals[k] = sub.dual;
      rhos[k] = sub.rho;
      out.step_costs.push_back(sub.objective);
      if (!sub.converged) ++out.subproblem_warnings;
    }
    balance_columns(out.factors);

    const double cost = objective(out.factors, samples, basis, cfg.lambda);
    out.cost_history.push_back(cost);
    out.sweeps_used = sweep + 1;
    if (std::abs(previous - cost) <= cfg.sweep_tol * previous || cost <= floor) {
      out.converged = true;
      break;
    }
    previous = cost;
  }
  return out;
}

std::vector<FitResult> fit_path(const SampleSet& samples, const BasisSet& basis,
                                const RecoveryConfig& cfg, std::span<const double> lambdas) {
  if (lambdas.empty()) throw Error(ErrorCode::invalid_argument, "lambda path is empty");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i - 1]))
      throw Error(ErrorCode::invalid_argument, "lambda path must be strictly decreasing");
  std::vector<FitResult> path;
  path.reserve(lambdas.size());
  RecoveryConfig stage = cfg;
  for (double lambda : lambdas) {
    stage.lambda = lambda;
    if (path.empty())
      path.push_back(fit(samples, basis, stage));
    else
      path.push_back(fit(samples, basis, stage, path.back().factors));
  }
  return path;
}

std::vector<double> lambda_path(std::span<const double> grid, double target) {
  std::vector<double> path;
  for (double l : grid)
    if (l > target) path.push_back(l);
  path.push_back(target);
  std::sort(path.begin(), path.end(), std::greater<>());
  path.erase(std::unique(path.begin(), path.end()), path.end());
  return path;
}

}  // namespace tensoruq
