#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "tensoruq/basis.hpp"
#include "tensoruq/tensor.hpp"

namespace tensoruq {

/// Truncated gPC expansion: coefficients in graded-lex order of the basis.
class GpcModel {
 public:
  GpcModel() = default;
  GpcModel(ParameterSpace space, int order, std::vector<double> coeffs);

  const ParameterSpace& space() const noexcept { return space_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double coefficient(const MultiIndex& alpha) const;

  double evaluate(std::span<const double> xi) const;

  nlohmann::json to_json() const;
  static GpcModel from_json(const nlohmann::json& doc);

 private:
  struct Term {
    std::vector<std::pair<int, int>> support;  // (dimension, degree), degree > 0
  };

  ParameterSpace space_;
  int order_ = 0;
  std::vector<MultiIndex> indices_;
  std::vector<Term> terms_;
  std::vector<double> coeffs_;
};

/// c_alpha = sum_j prod_k (W_k^T U_k)[alpha_k, j].
GpcModel extract_coefficients(const CpFactors& x, const BasisSet& basis);

double evaluate(const GpcModel& model, std::span<const double> xi);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const GpcModel& model);

struct SparsityReport {
  std::size_t kept = 0;
  std::size_t total = 0;
  std::vector<double> sorted_magnitudes;  // descending
};

SparsityReport sparsity_report(const GpcModel& model, double threshold);

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> density;
  std::size_t sample_count = 0;
  double bandwidth = 0.0;
  bool point_mass = false;
  double point_value = 0.0;  // set when point_mass
};

inline constexpr std::size_t kDefaultDensityGrid = 512;

/// Row-major n x d draws from the joint law of `space`.
std::vector<double> sample_parameters(const ParameterSpace& space, std::size_t n,
                                      std::uint64_t seed);

/// Surrogate outputs at n seeded joint draws.
std::vector<double> sample_surrogate(const GpcModel& model, std::size_t n, std::uint64_t seed);

/// Gaussian KDE, Silverman bandwidth, grid over [min - 3h, max + 3h].
DensityEstimate kernel_density(std::span<const double> values,
                               std::size_t grid_size = kDefaultDensityGrid);

DensityEstimate density(const GpcModel& model, std::size_t n_samples, std::uint64_t seed,
                        std::size_t grid_size = kDefaultDensityGrid);

struct Histogram {
  std::vector<double> edges;   // bins + 1
  std::vector<double> density; // normalized to unit area
};

Histogram histogram(std::span<const double> values, std::size_t bins);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::span<const double> a, std::span<const double> b);

}  // namespace tensoruq
