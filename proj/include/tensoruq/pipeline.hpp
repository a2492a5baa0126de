#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "tensoruq/basis.hpp"
#include "tensoruq/recovery.hpp"
#include "tensoruq/surrogate.hpp"
#include "tensoruq/tensor.hpp"

namespace tensoruq {

using BigInt = boost::multiprecision::cpp_int;

/// prod_k q_k, exact.
BigInt grid_size(const ParameterSpace& space);
std::string grid_size_decimal(const ParameterSpace& space);
/// Decimal integer string -> "8.9e21" style with `digits` significant digits.
std::string scientific_string(const std::string& decimal, int digits = 2);

struct PlanEntry {
  int sample_id = 0;
  GridIndex index;
  std::vector<double> point;
};

struct SamplePlan {
  std::uint64_t space_fingerprint = 0;
  std::vector<int> shape;  // q_k per dimension
  std::vector<PlanEntry> entries;
};

/// Uniform draws without replacement from the tensor grid by rejection on
/// seeded per-dimension draws. The grid is never enumerated.
SamplePlan make_plan(const ParameterSpace& space, std::size_t n_samples, std::uint64_t seed);

/// Stand-in simulator: y = sum_j scale_j prod_k g_{j,k}(xi_k), each g given by
/// its coefficients in the orthonormal basis of dimension k (absent = 1).
struct SyntheticTerm {
  double scale = 1.0;
  std::map<int, std::vector<double>> factors;
};

struct SyntheticModel {
  std::string name;
  ParameterSpace space;
  int order = 2;
  std::vector<SyntheticTerm> terms;
  double noise = 0.0;

  int rank() const noexcept { return static_cast<int>(terms.size()); }
  double value(std::span<const double> xi) const;
  /// Exact gPC coefficients of y for `indices`.
  std::vector<double> true_coefficients(const std::vector<MultiIndex>& indices) const;
  void validate() const;
};

/// Bundled models: "mems46" (d=46) and "osc57" (d=57), q=3, exact rank 2.
SyntheticModel bundled_model(const std::string& name);
std::vector<std::string> bundled_model_names();

SampleSet run_synthetic(const SyntheticModel& model, const SamplePlan& plan,
                        std::uint64_t noise_seed);

// File exchange.
std::string format_double(double v);  // 17 significant digits
void atomic_write(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

std::string plan_csv(const SamplePlan& plan);
void write_plan(const SamplePlan& plan, const std::filesystem::path& path);
/// Parses a plan and checks each row against grid_point(space, index).
SamplePlan read_plan(const std::filesystem::path& path, const ParameterSpace& space);
SamplePlan parse_plan(const std::string& text, const ParameterSpace& space);

std::string results_csv(const SamplePlan& plan, const SampleSet& samples);
void write_results(const SamplePlan& plan, const SampleSet& samples,
                   const std::filesystem::path& path);
SampleSet ingest_results(const SamplePlan& plan, const std::filesystem::path& results_file);
SampleSet parse_results(const SamplePlan& plan, const std::string& text);

/// Parameter space plus recovery settings, as one JSON document.
struct RunConfig {
  ParameterSpace space;
  int order = 2;
  std::size_t samples = 300;
  std::string model;  // bundled synthetic model name, may be empty
  RecoveryConfig recovery;
  CvSettings cv;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig for_model(const SyntheticModel& model, std::size_t samples);
};

nlohmann::json fit_to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& doc);
nlohmann::json cv_to_json(const CvReport& cv);

struct ReportOptions {
  std::size_t density_samples = 5000;
  std::uint64_t density_seed = 0;
  std::size_t density_grid = kDefaultDensityGrid;
  double sparsity_rel_threshold = 1e-6;
  std::string model_name;
  std::uint64_t space_fingerprint = 0;
};

struct HoldoutSummary {
  std::optional<double> error;  // empty: no holdout
  double lambda = 0.0;
  int rank = 1;
};

/// Sample-count comparison constants for the bundled models (sparse-grid
/// counts are documentation only).
struct CostComparison {
  std::string tensor_product;
  long sparse_grid = 0;
  std::size_t proposed = 0;
};
std::optional<CostComparison> cost_comparison(const std::string& model_name);

/// Writes cost_history.csv, coefficients.json, sparsity.csv, density.csv,
/// histogram.csv, moments.txt and summary.txt into out_dir.
void write_report(const std::filesystem::path& out_dir, const FitResult& fit,
                  const GpcModel& model, const SampleSet& samples,
                  const HoldoutSummary& holdout, const ReportOptions& options);

std::string summary_text(const FitResult& fit, const GpcModel& model, const SampleSet& samples,
                         const HoldoutSummary& holdout, const ReportOptions& options);

}  // namespace tensoruq
