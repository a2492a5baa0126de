#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tensoruq/basis.hpp"
#include "tensoruq/tensor.hpp"

namespace tensoruq {

struct RecoveryConfig {
  int rank = 1;
  double lambda = 0.0;
  int max_sweeps = 200;
  double sweep_tol = 1e-6;       // relative change of the cost between sweeps
  double subproblem_tol = 1e-8;
  int subproblem_max_iter = 2000;
  std::uint64_t init_seed = 0;
  double admm_rho = 1.0;

  void validate() const;
};

struct FitResult {
  CpFactors factors;
  double initial_cost = 0.0;
  std::vector<double> cost_history;  // one entry per sweep
  std::vector<double> step_costs;    // after every per-dimension update
  bool converged = false;
  int sweeps_used = 0;
  int subproblem_warnings = 0;       // subproblems that hit max_iter
  std::vector<std::string> warnings;
};

struct CvCandidate {
  double lambda = 0.0;
  int rank = 1;
  double holdout_error = 0.0;
  int sweeps_used = 0;
  bool converged = false;
};

struct CvSettings {
  std::vector<double> lambda_grid{0.001, 0.01, 0.1, 1.0};
  std::vector<int> rank_grid{1, 2, 3};
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  RecoveryConfig base;     // rank/lambda overwritten per candidate
  unsigned threads = 0;    // 0: hardware concurrency
};

struct CvReport {
  std::vector<CvCandidate> candidates;
  double selected_lambda = 0.0;
  int selected_rank = 1;
  double selected_error = 0.0;
  double holdout_fraction = 0.0;
  std::size_t holdout_size = 0;
  FitResult final_fit;  // refit on the full sample set with the winner
};

/// 1/2 ||P_Omega(X - Y)||^2 + lambda * sum_alpha |<X, W_alpha>|
double objective(const CpFactors& x, const SampleSet& samples, const BasisSet& basis,
                 double lambda);

/// Restriction of the objective to U_k, with z = vec(U_k) (column-major):
/// data term 1/2 ||A z - b||^2, penalty lambda ||C z||_1.
struct SubproblemOperators {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::MatrixXd c;
};

/// k is a 0-based dimension.
SubproblemOperators subproblem_operators(std::size_t k, const CpFactors& x,
                                         const SampleSet& samples, const BasisSet& basis);

struct SubproblemResult {
  Eigen::VectorXd z;
  Eigen::VectorXd dual;   // unscaled multiplier for Cz = w, lies in lambda * d||w||_1
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double rho = 0.0;       // penalty parameter at exit, for warm starts
};

/// Generalized lasso min 1/2||Az-b||^2 + lambda||Cz||_1 by ADMM. Returns the
/// best iterate seen (never worse than z0); converged=false flags max_iter.
SubproblemResult solve_subproblem(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                  const Eigen::MatrixXd& c, double lambda,
                                  const Eigen::VectorXd& z0, double tol, int max_iter,
                                  double rho, const Eigen::VectorXd& dual0 = {});

/// Seeded i.i.d. U[0.5, 1.5] entries, rescaled so the mean |cp_entry| over the
/// sampled indices equals the mean |y|.
CpFactors init_factors(std::span<const int> shape, int rank, std::uint64_t seed,
                       const SampleSet& samples);

FitResult fit(const SampleSet& samples, const BasisSet& basis, const RecoveryConfig& cfg);

/// Same, starting from `start` instead of init_factors.
FitResult fit(const SampleSet& samples, const BasisSet& basis, const RecoveryConfig& cfg,
              const CpFactors& start);

/// Fits along a strictly decreasing lambda path, each stage warm-started from
/// the previous one. The first stage starts from init_factors(cfg.init_seed).
std::vector<FitResult> fit_path(const SampleSet& samples, const BasisSet& basis,
                                const RecoveryConfig& cfg, std::span<const double> lambdas);

/// Grid values above `target`, then `target`, in decreasing order.
std::vector<double> lambda_path(std::span<const double> grid, double target);

/// ||pred - obs|| / ||obs||, or 0 when both vanish.
double relative_error(const Eigen::VectorXd& predicted, const Eigen::VectorXd& observed);

CvReport cross_validate(const SampleSet& samples, const BasisSet& basis,
                        const CvSettings& settings);

}  // namespace tensoruq
