#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "tensoruq/basis.hpp"
#include "tensoruq/error.hpp"

namespace tensoruq {
namespace {

// psi_0..psi_{n} of the standardized family at t; out.size() == n + 1.
void standard_polys(const Distribution& dist, double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = t / dist.recurrence_offdiag(1);
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const int m = static_cast<int>(n);
    out[n + 1] = (t * out[n] - dist.recurrence_offdiag(m) * out[n - 1]) /
                 dist.recurrence_offdiag(m + 1);
  }
}

// psi_q(t) and its derivative.
std::pair<double, double> top_poly_with_derivative(const Distribution& dist, int q, double t) {
  double p_prev = 0.0, p = 1.0;
  double d_prev = 0.0, d = 0.0;
  for (int n = 0; n < q; ++n) {
    const double b_next = dist.recurrence_offdiag(n + 1);
    const double b_cur = dist.recurrence_offdiag(n);
    const double p_next = (t * p - b_cur * p_prev) / b_next;
    const double d_next = (p + t * d - b_cur * d_prev) / b_next;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d};
}

}  // namespace

QuadratureRule gauss_quadrature(const Distribution& dist, int q) {
  if (q < 1 || q > kMaxQuadratureOrder)
    throw Error(ErrorCode::out_of_range,
                "quadrature order must lie in [1, " + std::to_string(kMaxQuadratureOrder) + "]");

  // Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd sub(std::max(q - 1, 0));
  for (int n = 0; n + 1 < q; ++n) sub[n] = dist.recurrence_offdiag(n + 1);

  std::vector<double> t(q, 0.0);
  if (q > 1) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw Error(ErrorCode::non_convergence, "Jacobi eigensolver failed");
    for (int i = 0; i < q; ++i) t[i] = eig.eigenvalues()[i];
  }

  // Polish each node as a root of psi_q.
  for (int i = 0; i < q && q > 1; ++i) {
    for (int iter = 0; iter < 3; ++iter) {
      const auto [p, dp] = top_poly_with_derivative(dist, q, t[i]);
      if (dp == 0.0) break;
      const double step = p / dp;
      const double candidate = t[i] - step;
      if (std::abs(top_poly_with_derivative(dist, q, candidate).first) >= std::abs(p)) break;
      t[i] = candidate;
    }
  }

  // Both families are symmetric in t; enforce it exactly.
  for (int i = 0; i < q / 2; ++i) {
    const double half = 0.5 * (t[q - 1 - i] - t[i]);
    t[i] = -half;
    t[q - 1 - i] = half;
  }
  if (q % 2 == 1) t[q / 2] = 0.0;

  // Christoffel weights: w_i = 1 / sum_{n<q} psi_n(t_i)^2.
  std::vector<double> w(q);
  std::vector<double> psi(q);
  for (int i = 0; i < q; ++i) {
    standard_polys(dist, t[i], psi);
    double s = 0.0;
    for (double v : psi) s += v * v;
    w[i] = 1.0 / s;
  }
  for (int i = 0; i < q / 2; ++i) {
    const double avg = 0.5 * (w[i] + w[q - 1 - i]);
    w[i] = w[q - 1 - i] = avg;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    rule.nodes[i] = dist.from_standard(t[i]);
    rule.weights[i] = w[i] / total;
  }
  return rule;
}

void orthonormal_polys(const Distribution& dist, double x, std::span<double> out) {
  if (out.size() > static_cast<std::size_t>(kMaxPolynomialDegree) + 1)
    throw Error(ErrorCode::out_of_range,
                "polynomial degree exceeds cap " + std::to_string(kMaxPolynomialDegree));
  standard_polys(dist, dist.standardize(x), out);
}

double orthonormal_poly(const Distribution& dist, int degree, double x) {
  if (degree < 0 || degree > kMaxPolynomialDegree)
    throw Error(ErrorCode::out_of_range,
                "polynomial degree must lie in [0, " + std::to_string(kMaxPolynomialDegree) + "]");
  std::vector<double> psi(static_cast<std::size_t>(degree) + 1);
  standard_polys(dist, dist.standardize(x), psi);
  return psi.back();
}

}  // namespace tensoruq
