#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "tensoruq/error.hpp"
#include "tensoruq/recovery.hpp"

namespace tensoruq {

CvReport cross_validate(const SampleSet& samples, const BasisSet& basis,
                        const CvSettings& settings) {
  if (!(settings.holdout_fraction > 0.0 && settings.holdout_fraction < 0.5))
    throw Error(ErrorCode::invalid_argument, "holdout_fraction must lie in (0, 0.5)");
  if (settings.lambda_grid.empty() || settings.rank_grid.empty())
    throw Error(ErrorCode::invalid_argument, "cross-validation grids must be non-empty");
  settings.base.validate();

  const std::size_t n = samples.size();
  const auto n_hold = static_cast<std::size_t>(std::floor(settings.holdout_fraction * n));
  if (n_hold == 0 || n_hold >= n)
    throw Error(ErrorCode::empty_samples, "holdout split is empty for " + std::to_string(n) +
                                              " samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(settings.seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<std::size_t> hold(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_hold));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_hold), order.end());
  std::sort(hold.begin(), hold.end());
  std::sort(train.begin(), train.end());
  const SampleSet train_set = samples.subset(train);
  const SampleSet hold_set = samples.subset(hold);

  std::vector<int> ranks = settings.rank_grid;
  std::vector<double> lambdas = settings.lambda_grid;
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  CvReport report;
  report.holdout_fraction = settings.holdout_fraction;
  report.holdout_size = n_hold;
  for (int r : ranks)
    for (auto it = lambdas.rbegin(); it != lambdas.rend(); ++it)
      report.candidates.push_back(CvCandidate{*it, r, 0.0, 0, false});

  // One path per rank, from the largest lambda down, each stage warm-started.
  auto run = [&](std::size_t ri) {
    RecoveryConfig cfg = settings.base;
    cfg.rank = ranks[ri];
    const auto path = fit_path(train_set, basis, cfg, lambdas);
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const FitResult& f = path[li];
      auto& cand = report.candidates[ri * lambdas.size() + (lambdas.size() - 1 - li)];
      const double err = relative_error(cp_entries(f.factors, hold_set), hold_set.values());
      cand.holdout_error = std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
      cand.sweeps_used = f.sweeps_used;
      cand.converged = f.converged;
    }
  };

  unsigned workers = settings.threads ? settings.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(ranks.size()));
  if (workers == 1) {
    for (std::size_t ri = 0; ri < ranks.size(); ++ri) run(ri);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < ranks.size(); i = next++) run(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Candidates are ordered by (rank, lambda); strict improvement keeps the
  // smaller pair on ties.
  const CvCandidate* best = &report.candidates.front();
  for (const auto& cand : report.candidates)
    if (cand.holdout_error < best->holdout_error) best = &cand;
  report.selected_lambda = best->lambda;
  report.selected_rank = best->rank;
  report.selected_error = best->holdout_error;

  RecoveryConfig cfg = settings.base;
  cfg.rank = report.selected_rank;
  const auto refit_lambdas = lambda_path(lambdas, report.selected_lambda);
  report.final_fit = std::move(fit_path(samples, basis, cfg, refit_lambdas).back());
  return report;
}

}  // namespace tensoruq
