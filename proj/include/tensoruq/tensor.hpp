#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tensoruq/basis.hpp"

namespace tensoruq {

/// Grid position with 1-based entries, i_k in [1, q_k].
class GridIndex {
 public:
  GridIndex() = default;
  explicit GridIndex(std::vector<int> idx) : idx_(std::move(idx)) {}
  GridIndex(std::initializer_list<int> idx) : idx_(idx) {}

  std::size_t dim() const noexcept { return idx_.size(); }
  int operator[](std::size_t k) const { return idx_[k]; }
  std::span<const int> values() const noexcept { return idx_; }

  bool in_bounds(std::span<const int> shape) const noexcept;

  auto operator<=>(const GridIndex&) const = default;

 private:
  std::vector<int> idx_;
};

struct GridIndexHash {
  std::size_t operator()(const GridIndex& g) const noexcept;
};

/// X = sum_j u_1^j o ... o u_d^j, stored as one q_k x r matrix per dimension.
class CpFactors {
 public:
  CpFactors() = default;
  explicit CpFactors(std::vector<Eigen::MatrixXd> factors);

  static CpFactors zeros(std::span<const int> shape, int rank);

  int rank() const noexcept;
  std::size_t dim() const noexcept { return factors_.size(); }
  std::vector<int> shape() const;

  const Eigen::MatrixXd& factor(std::size_t k) const { return factors_.at(k); }
  Eigen::MatrixXd& factor(std::size_t k) { return factors_.at(k); }
  const std::vector<Eigen::MatrixXd>& factors() const noexcept { return factors_; }

  bool operator==(const CpFactors& other) const;

 private:
  std::vector<Eigen::MatrixXd> factors_;
};

struct Sample {
  GridIndex index;
  double value = 0.0;
};

/// Observed entries Omega of the output tensor. Alongside the entries it keeps
/// per-dimension 0-based row offsets, laid out for the gather kernels.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(std::vector<Sample> entries, std::span<const int> shape);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t dim() const noexcept { return shape_.size(); }
  const std::vector<int>& shape() const noexcept { return shape_; }
  const std::vector<Sample>& entries() const noexcept { return entries_; }
  const Sample& operator[](std::size_t s) const { return entries_[s]; }

  std::span<const std::int32_t> offsets(std::size_t k) const { return offsets_.at(k); }
  const Eigen::VectorXd& values() const noexcept { return values_; }

  SampleSet subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<Sample> entries_;
  std::vector<int> shape_;
  std::vector<std::vector<std::int32_t>> offsets_;
  Eigen::VectorXd values_;
};

struct Rank1Tensor {
  std::vector<Eigen::VectorXd> vectors;
};

/// Full array in row-major order (last index fastest). Debug use only.
struct DenseTensor {
  std::vector<int> shape;
  std::vector<double> data;

  double at(std::span<const int> index1) const;
};

inline constexpr std::uint64_t kMaxDenseEntries = 1'000'000;

double cp_entry(const CpFactors& x, const GridIndex& index);

/// cp_entry at every sample, in sample order.
Eigen::VectorXd cp_entries(const CpFactors& x, const SampleSet& samples);

/// cp_entry(x, i) - y_i for every sample.
Eigen::VectorXd residual_on_omega(const CpFactors& x, const SampleSet& samples);

/// <X, T> through per-dimension dot products; never expands the grid.
double rank1_inner(const CpFactors& x, const Rank1Tensor& t);

/// <X, X'> computed factor-wise.
double cp_inner(const CpFactors& x, const CpFactors& y);

/// W_alpha as a rank-1 tensor: v_k = weighted_table(k).col(alpha_k).
Rank1Tensor basis_rank1(const BasisSet& basis, const MultiIndex& alpha);

DenseTensor dense_materialize(const CpFactors& x);

/// <X, W_alpha> for every alpha of the basis, in basis order, via the
/// projected factors T_k = W_k^T U_k.
Eigen::VectorXd gpc_coefficients(const CpFactors& x, const BasisSet& basis);

}  // namespace tensoruq
