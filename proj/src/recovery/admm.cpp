#include <algorithm>
#include <cmath>

#include "tensoruq/error.hpp"
#include "tensoruq/kernels.hpp"
#include "tensoruq/recovery.hpp"

namespace tensoruq {
namespace {

constexpr double kRidge = 1e-10;

// Residual balancing: keep primal and dual residuals within this factor.
constexpr double kBalance = 10.0;
constexpr double kRhoStep = 2.0;

double lasso_value(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::MatrixXd& c,
                   double lambda, const Eigen::VectorXd& z) {
  double v = 0.5 * (a * z - b).squaredNorm();
  if (lambda != 0.0) v += lambda * (c * z).lpNorm<1>();
  return v;
}

}  // namespace

SubproblemResult solve_subproblem(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                  const Eigen::MatrixXd& c, double lambda,
                                  const Eigen::VectorXd& z0, double tol, int max_iter,
                                  double rho, const Eigen::VectorXd& dual0) {
  const Eigen::Index n = a.cols();
  if (a.rows() != b.size() || c.cols() != n || z0.size() != n)
    throw Error(ErrorCode::shape_mismatch, "subproblem operands are not conformable");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be >= 0");
  if (!(tol > 0.0) || max_iter < 1 || !(rho > 0.0))
    throw Error(ErrorCode::invalid_argument, "subproblem tolerances must be positive");
  if (dual0.size() != 0 && dual0.size() != c.rows())
    throw Error(ErrorCode::shape_mismatch, "warm-start dual has the wrong length");

  const Eigen::MatrixXd ata = a.transpose() * a;
  const Eigen::VectorXd atb = a.transpose() * b;
  const Eigen::MatrixXd ridge = kRidge * Eigen::MatrixXd::Identity(n, n);
  const double start_value = lasso_value(a, b, c, lambda, z0);

  SubproblemResult result;
  result.dual = Eigen::VectorXd::Zero(c.rows());

  if (lambda == 0.0) {
    // Without the l1 term the restriction is a ridge-guarded least-squares solve.
    result.z = (ata + ridge).ldlt().solve(atb);
    result.objective = lasso_value(a, b, c, 0.0, result.z);
    result.iterations = 1;
    result.converged = true;
    result.rho = rho;
    if (!(result.objective <= start_value)) {
      result.z = z0;
      result.objective = start_value;
    }
    return result;
  }

  const Eigen::MatrixXd ctc = c.transpose() * c;
  auto factorize = [&](double r) { return Eigen::LDLT<Eigen::MatrixXd>(ata + r * ctc + ridge); };
  auto solver = factorize(rho);

  const auto m = c.rows();
  const auto mm = static_cast<std::size_t>(m);
  const std::span<const double> cmat(c.data(), static_cast<std::size_t>(c.size()));
  const auto nn = static_cast<std::size_t>(n);
  auto apply_ct = [&](const Eigen::VectorXd& v1, const Eigen::VectorXd& v2, Eigen::VectorXd& out1,
                      Eigen::VectorXd& out2) {
    kernels::matvec_t2(cmat, mm, {v1.data(), mm}, {v2.data(), mm}, {out1.data(), nn},
                       {out2.data(), nn});
  };
  // 1/2 ||Az - b||^2 through the normal-equation pieces.
  const double half_bb = 0.5 * b.squaredNorm();
  Eigen::VectorXd scratch(n);
  auto data_term = [&](const Eigen::VectorXd& v) {
    scratch.noalias() = ata * v;
    return std::max(0.0, 0.5 * v.dot(scratch) - v.dot(atb) + half_bb);
  };

  Eigen::VectorXd w = c * z0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  if (dual0.size() == m) u = dual0 / rho;
  Eigen::VectorXd ctw(n), ctu(n), ctw_old(n);
  apply_ct(w, u, ctw, ctu);
  Eigen::VectorXd cz(m);
  Eigen::VectorXd z = z0;
  Eigen::VectorXd rhs(n);

  Eigen::VectorXd best_z = z0;
  Eigen::VectorXd best_dual = rho * u;
  double best_value = start_value;

  const double threshold = tol * (1.0 + b.norm());
  int it = 0;
  bool converged = false;
  while (it < max_iter) {
    ++it;
    rhs = atb + rho * (ctw - ctu);
    z = solver.solve(rhs);
    kernels::matvec(cmat, mm, {z.data(), nn}, {cz.data(), mm});
    const auto stats = kernels::shrink_update({cz.data(), mm}, {w.data(), mm}, {u.data(), mm},
                                              lambda / rho);
    ctw_old.swap(ctw);
    apply_ct(w, u, ctw, ctu);

    const double primal = std::sqrt(stats.primal_sq);
    const double dual = rho * (ctw - ctw_old).norm();
    const double value = data_term(z) + lambda * stats.abs_sum;
    if (value < best_value) {
      best_value = value;
      best_z = z;
      best_dual = rho * u;
    }
    if (primal <= threshold && dual <= threshold) {
      converged = true;
      break;
    }

    double next_rho = rho;
    if (primal > kBalance * dual) next_rho = rho * kRhoStep;
    else if (dual > kBalance * primal) next_rho = rho / kRhoStep;
    if (next_rho != rho) {
      const double ratio = rho / next_rho;
      u *= ratio;
      ctu *= ratio;
      rho = next_rho;
      solver = factorize(rho);
    }
  }

  result.iterations = it;
  result.converged = converged;
  result.rho = rho;
  if (converged) {
    const double final_value = lasso_value(a, b, c, lambda, z);
    if (final_value <= start_value) {
      result.z = z;
      result.objective = final_value;
      result.dual = rho * u;
      return result;
    }
  }
  result.z = best_z;
  result.objective = lasso_value(a, b, c, lambda, best_z);
  result.dual = best_dual;
  if (!(result.objective <= start_value)) {
    result.z = z0;
    result.objective = start_value;
  }
  return result;
}

}  // namespace tensoruq
