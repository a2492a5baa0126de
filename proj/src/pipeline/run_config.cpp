#include "tensoruq/error.hpp"
#include "tensoruq/pipeline.hpp"

namespace tensoruq {

nlohmann::json RunConfig::to_json() const {
  nlohmann::json doc = space.to_json();
  doc["p"] = order;
  doc["samples"] = samples;
  if (!model.empty()) doc["model"] = model;
  doc["recovery"] = {{"rank", recovery.rank},
                     {"lambda", recovery.lambda},
                     {"max_sweeps", recovery.max_sweeps},
                     {"sweep_tol", recovery.sweep_tol},
                     {"subproblem_tol", recovery.subproblem_tol},
                     {"subproblem_max_iter", recovery.subproblem_max_iter},
                     {"init_seed", recovery.init_seed},
                     {"admm_rho", recovery.admm_rho}};
  doc["cross_validation"] = {{"lambda_grid", cv.lambda_grid},
                             {"rank_grid", cv.rank_grid},
                             {"holdout_fraction", cv.holdout_fraction},
                             {"seed", cv.seed}};
  return doc;
}

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  RunConfig cfg;
  cfg.space = ParameterSpace::from_json(doc);
  try {
    cfg.order = doc.value("p", 2);
    cfg.samples = doc.value("samples", std::size_t{300});
    cfg.model = doc.value("model", std::string{});
    if (doc.contains("recovery")) {
      const auto& r = doc["recovery"];
      auto& rc = cfg.recovery;
      rc.rank = r.value("rank", rc.rank);
      rc.lambda = r.value("lambda", rc.lambda);
      rc.max_sweeps = r.value("max_sweeps", rc.max_sweeps);
      rc.sweep_tol = r.value("sweep_tol", rc.sweep_tol);
      rc.subproblem_tol = r.value("subproblem_tol", rc.subproblem_tol);
      rc.subproblem_max_iter = r.value("subproblem_max_iter", rc.subproblem_max_iter);
      rc.init_seed = r.value("init_seed", rc.init_seed);
      rc.admm_rho = r.value("admm_rho", rc.admm_rho);
    }
    if (doc.contains("cross_validation")) {
      const auto& c = doc["cross_validation"];
      cfg.cv.lambda_grid = c.value("lambda_grid", cfg.cv.lambda_grid);
      cfg.cv.rank_grid = c.value("rank_grid", cfg.cv.rank_grid);
      cfg.cv.holdout_fraction = c.value("holdout_fraction", cfg.cv.holdout_fraction);
      cfg.cv.seed = c.value("seed", cfg.cv.seed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("config JSON: ") + e.what());
  }
  cfg.recovery.validate();
  cfg.cv.base = cfg.recovery;
  return cfg;
}

RunConfig RunConfig::for_model(const SyntheticModel& model, std::size_t samples) {
  RunConfig cfg;
  cfg.space = model.space;
  cfg.order = model.order;
  cfg.samples = samples;
  cfg.model = model.name;
  cfg.recovery.rank = 2;
  cfg.recovery.lambda = 0.01;
  cfg.cv.base = cfg.recovery;
  return cfg;
}

nlohmann::json fit_to_json(const FitResult& fit) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& u : fit.factors.factors()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(u.cols()));
      for (Eigen::Index j = 0; j < u.cols(); ++j) row[static_cast<std::size_t>(j)] = u(i, j);
      rows.push_back(row);
    }
    factors.push_back(rows);
  }
  return {{"factors", factors},
          {"initial_cost", fit.initial_cost},
          {"cost_history", fit.cost_history},
          {"step_costs", fit.step_costs},
          {"converged", fit.converged},
          {"sweeps_used", fit.sweeps_used},
          {"subproblem_warnings", fit.subproblem_warnings},
          {"warnings", fit.warnings}};
}

FitResult fit_from_json(const nlohmann::json& doc) {
  try {
    FitResult fit;
    std::vector<Eigen::MatrixXd> factors;
    for (const auto& rows : doc.at("factors")) {
      const auto q = static_cast<Eigen::Index>(rows.size());
      const auto r = q ? static_cast<Eigen::Index>(rows[0].size()) : 0;
      Eigen::MatrixXd u(q, r);
      for (Eigen::Index i = 0; i < q; ++i) {
        const auto row = rows[static_cast<std::size_t>(i)].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(row.size()) != r)
          throw Error(ErrorCode::parse_error, "ragged factor matrix in fit JSON");
        for (Eigen::Index j = 0; j < r; ++j) u(i, j) = row[static_cast<std::size_t>(j)];
      }
      factors.push_back(std::move(u));
    }
    fit.factors = CpFactors(std::move(factors));
    fit.initial_cost = doc.value("initial_cost", 0.0);
    fit.cost_history = doc.at("cost_history").get<std::vector<double>>();
    fit.step_costs = doc.value("step_costs", std::vector<double>{});
    fit.converged = doc.at("converged").get<bool>();
    fit.sweeps_used = doc.at("sweeps_used").get<int>();
    fit.subproblem_warnings = doc.value("subproblem_warnings", 0);
    fit.warnings = doc.value("warnings", std::vector<std::string>{});
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("fit JSON: ") + e.what());
  }
}

nlohmann::json cv_to_json(const CvReport& cv) {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : cv.candidates)
    cands.push_back({{"lambda", c.lambda},
                     {"rank", c.rank},
                     {"holdout_error", c.holdout_error},
                     {"sweeps_used", c.sweeps_used},
                     {"converged", c.converged}});
  return {{"candidates", cands},
          {"selected_lambda", cv.selected_lambda},
          {"selected_rank", cv.selected_rank},
          {"selected_error", cv.selected_error},
          {"holdout_fraction", cv.holdout_fraction},
          {"holdout_size", cv.holdout_size}};
}

}  // namespace tensoruq
