#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tensoruq/error.hpp"
#include "tensoruq/pipeline.hpp"

using namespace tensoruq;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNonConvergence = 2;

struct Options {
  std::string config;
  std::string model;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> lambda;
  std::optional<int> rank;
  std::optional<int> max_sweeps;
  unsigned threads = 0;
  std::string out_dir = ".";
  std::string plan;
  std::string results;
  std::string fit;
  std::string cv;
  std::string coefficients;
  std::string point;
  std::string points;
};

nlohmann::json read_json(const std::string& path) {
  auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::parse_error, "invalid JSON in " + path);
  return doc;
}

RunConfig load_config(const Options& o) {
  if (!o.config.empty()) {
    auto cfg = RunConfig::from_json(read_json(o.config));
    if (!o.model.empty()) cfg.model = o.model;
    if (o.samples) cfg.samples = o.samples;
    return cfg;
  }
  if (o.model.empty())
    throw Error(ErrorCode::invalid_argument, "need --config or --model");
  return RunConfig::for_model(bundled_model(o.model), o.samples ? o.samples : 300);
}

fs::path out_path(const Options& o, const char* name) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / name;
}

SampleSet load_samples(const Options& o, const RunConfig& cfg, SamplePlan& plan) {
  if (o.plan.empty() || o.results.empty())
    throw Error(ErrorCode::invalid_argument, "need --plan and --results");
  plan = read_plan(o.plan, cfg.space);
  return ingest_results(plan, o.results);
}

void print_warnings(const FitResult& f) {
  for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';
  if (f.subproblem_warnings > 0)
    std::cerr << "warning: " << f.subproblem_warnings
              << " subproblem solves stopped at the iteration limit\n";
}

int cmd_plan(const Options& o) {
  const auto cfg = load_config(o);
  const auto plan = make_plan(cfg.space, cfg.samples, o.seed);
  write_plan(plan, out_path(o, "plan.csv"));
  atomic_write(out_path(o, "config.json"), cfg.to_json().dump(1) + "\n");
  std::cout << "plan: " << plan.entries.size() << " of " << grid_size_decimal(cfg.space)
            << " grid points -> " << (fs::path(o.out_dir) / "plan.csv").string() << '\n';
  return 0;
}

int cmd_synth(const Options& o) {
  const auto cfg = load_config(o);
  if (cfg.model.empty())
    throw Error(ErrorCode::invalid_argument, "synth needs a bundled model (--model or config)");
  const auto model = bundled_model(cfg.model);
  if (o.plan.empty()) throw Error(ErrorCode::invalid_argument, "need --plan");
  const auto plan = read_plan(o.plan, model.space);
  const auto samples = run_synthetic(model, plan, o.seed);
  write_results(plan, samples, out_path(o, "results.csv"));
  std::cout << "synth: " << samples.size() << " results -> "
            << (fs::path(o.out_dir) / "results.csv").string() << '\n';
  return 0;
}

int cmd_fit(const Options& o) {
  auto cfg = load_config(o);
  SamplePlan plan;
  const auto samples = load_samples(o, cfg, plan);
  const auto basis = build_basis(cfg.space, cfg.order);
  cfg.recovery.init_seed = o.seed;
  if (o.max_sweeps) cfg.recovery.max_sweeps = *o.max_sweeps;
  cfg.recovery.validate();
  cfg.cv.seed = o.seed;
  cfg.cv.threads = o.threads;

  FitResult result;
  double lambda = 0.0;
  if (o.lambda || o.rank) {
    auto rc = cfg.recovery;
    if (o.lambda) rc.lambda = *o.lambda;
    if (o.rank) rc.rank = *o.rank;
    auto path = fit_path(samples, basis, rc, lambda_path(cfg.cv.lambda_grid, rc.lambda));
    result = std::move(path.back());
    lambda = rc.lambda;
    std::cout << "fit: rank " << rc.rank << ", lambda " << rc.lambda << '\n';
    std::error_code ec;
    fs::remove(fs::path(o.out_dir) / "cv.json", ec);
  } else {
    cfg.cv.base = cfg.recovery;
    auto cv = cross_validate(samples, basis, cfg.cv);
    for (const auto& c : cv.candidates)
      std::cout << "  rank " << c.rank << "  lambda " << c.lambda << "  holdout "
                << c.holdout_error << (c.converged ? "" : "  (not converged)")
                << '\n';
    std::cout << "fit: selected rank " << cv.selected_rank << ", lambda "
              << cv.selected_lambda << ", holdout error "
              << cv.selected_error << "\n";
    atomic_write(out_path(o, "cv.json"), cv_to_json(cv).dump(1) + "\n");
    result = std::move(cv.final_fit);
    lambda = cv.selected_lambda;
  }
  auto doc = fit_to_json(result);
  doc["lambda"] = lambda;
  atomic_write(out_path(o, "fit.json"), doc.dump() + "\n");
  const auto model = extract_coefficients(result.factors, basis);
  atomic_write(out_path(o, "coefficients.json"), model.to_json().dump(1) + "\n");
  std::cout << "sweeps " << result.sweeps_used << ", final cost "
            << result.cost_history.back() << "\n";
  print_warnings(result);
  if (!result.converged) {
    std::cerr << "error: alternating minimization did not converge in " << result.sweeps_used
              << " sweeps\n";
    return kExitNonConvergence;
  }
  return 0;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> xi;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw Error(ErrorCode::parse_error, "cannot parse point value '" + cell + "'");
    xi.push_back(v);
  }
  return xi;
}

int cmd_eval(const Options& o) {
  if (o.coefficients.empty()) throw Error(ErrorCode::invalid_argument, "need --coefficients");
  const auto model = GpcModel::from_json(read_json(o.coefficients));
  if (!o.point.empty()) {
    std::cout << format_double(model.evaluate(parse_point(o.point))) << '\n';
    return 0;
  }
  if (o.points.empty()) {
    const auto m = moments(model);
    std::cout << "mean = " << format_double(m.mean) << "\nvariance = " << format_double(m.variance)
              << '\n';
    return 0;
  }
  std::istringstream in(read_file(o.points));
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      std::cout << format_double(model.evaluate(parse_point(line))) << '\n';
    } catch (const Error& e) {
      throw Error(e.code(), o.points + " row " + std::to_string(row) + ": " + e.what());
    }
  }
  return 0;
}

int cmd_report(const Options& o) {
  const auto cfg = load_config(o);
  SamplePlan plan;
  const auto samples = load_samples(o, cfg, plan);
  if (o.fit.empty()) throw Error(ErrorCode::invalid_argument, "need --fit");
  const auto fit_doc = read_json(o.fit);
  const auto fit = fit_from_json(fit_doc);
  const auto basis = build_basis(cfg.space, cfg.order);
  const auto model = extract_coefficients(fit.factors, basis);

  HoldoutSummary holdout;
  holdout.rank = fit.factors.rank();
  holdout.lambda = o.lambda.value_or(fit_doc.value("lambda", cfg.recovery.lambda));
  if (!o.cv.empty()) {
    const auto cv = read_json(o.cv);
    holdout.lambda = cv.value("selected_lambda", holdout.lambda);
    holdout.rank = cv.value("selected_rank", holdout.rank);
    if (cv.value("holdout_size", 0) > 0) holdout.error = cv.value("selected_error", 0.0);
  }
  ReportOptions opts;
  opts.density_seed = o.seed;
  opts.model_name = cfg.model;
  opts.space_fingerprint = cfg.space.fingerprint();
  write_report(o.out_dir, fit, model, samples, holdout, opts);
  std::cout << summary_text(fit, model, samples, holdout, opts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor recovery for stochastic collocation: plan, simulate, fit, evaluate, report."};
  app.require_subcommand(1, 1);
  Options o;

  auto config_opts = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "run config JSON (parameter space + settings)");
    sub->add_option("--model", o.model, "bundled synthetic model: mems46 or osc57");
    sub->add_option("--samples", o.samples, "number of samples (overrides the config)");
  };
  auto out_opt = [&](CLI::App* sub) {
    sub->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  };
  auto seed_opt = [&](CLI::App* sub, const char* what) {
    sub->add_option("--seed", o.seed, what)->capture_default_str();
  };

  auto* plan = app.add_subcommand("plan", "draw the sample plan from the quadrature grid");
  config_opts(plan);
  seed_opt(plan, "plan seed");
  out_opt(plan);

  auto* synth = app.add_subcommand("synth", "evaluate a bundled synthetic model on a plan");
  config_opts(synth);
  synth->add_option("--plan", o.plan, "plan CSV")->required();
  seed_opt(synth, "noise seed");
  out_opt(synth);

  auto* fit = app.add_subcommand("fit", "recover the tensor; cross-validates unless --lambda/--rank");
  config_opts(fit);
  fit->add_option("--plan", o.plan, "plan CSV")->required();
  fit->add_option("--results", o.results, "results CSV (sample_id,value)")->required();
  fit->add_option("--lambda", o.lambda, "fixed l1 weight");
  fit->add_option("--rank", o.rank, "fixed CP rank");
  fit->add_option("--max-sweeps", o.max_sweeps, "sweep budget per fit");
  fit->add_option("--threads", o.threads, "cross-validation threads (0: all cores)");
  seed_opt(fit, "initialization and holdout seed");
  out_opt(fit);

  auto* eval = app.add_subcommand("eval", "evaluate a fitted gPC surrogate");
  eval->add_option("--coefficients", o.coefficients, "coefficients.json from fit")->required();
  auto* pt = eval->add_option("--point", o.point, "comma-separated parameter vector");
  eval->add_option("--points", o.points, "file with one comma-separated point per line")
      ->excludes(pt);

  auto* report = app.add_subcommand("report", "write cost, sparsity, density and summary files");
  config_opts(report);
  report->add_option("--plan", o.plan, "plan CSV")->required();
  report->add_option("--results", o.results, "results CSV")->required();
  report->add_option("--fit", o.fit, "fit.json from fit")->required();
  report->add_option("--cv", o.cv, "cv.json from fit, for the holdout error");
  seed_opt(report, "density sampling seed");
  out_opt(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*plan) return cmd_plan(o);
    if (*synth) return cmd_synth(o);
    if (*fit) return cmd_fit(o);
    if (*eval) return cmd_eval(o);
    if (*report) return cmd_report(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::non_convergence ? kExitNonConvergence : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
