#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace tensoruq {

struct Gaussian {
  double mean = 0.0;
  double stddev = 1.0;
  bool operator==(const Gaussian&) const = default;
};

struct Uniform {
  double lower = -1.0;
  double upper = 1.0;
  bool operator==(const Uniform&) const = default;
};

/// Marginal law of one random parameter. Values are in the parameter's own
/// units; all polynomial work happens on the standardized variable t.
class Distribution {
 public:
  enum class Kind { gaussian, uniform };

  static Distribution gaussian(double mean, double stddev);
  static Distribution uniform(double lower, double upper);

  Kind kind() const noexcept;
  const std::variant<Gaussian, Uniform>& law() const noexcept { return law_; }

  double mean() const noexcept;
  double variance() const noexcept;

  // x = center + scale * t
  double center() const noexcept;
  double scale() const noexcept;
  double standardize(double x) const noexcept { return (x - center()) / scale(); }
  double from_standard(double t) const noexcept { return center() + scale() * t; }

  /// Off-diagonal entries of the Jacobi matrix for the standardized measure:
  /// t psi_n = b_{n+1} psi_{n+1} + b_n psi_{n-1}. Diagonal is zero for both
  /// supported families.
  double recurrence_offdiag(int n) const noexcept;

  /// E[x^m] in parameter units.
  double raw_moment(int m) const;

  bool operator==(const Distribution&) const = default;

 private:
  explicit Distribution(std::variant<Gaussian, Uniform> law) : law_(law) {}
  std::variant<Gaussian, Uniform> law_;
};

struct Parameter {
  std::string name;
  Distribution dist;
  int quad_order = 3;
};

/// Ordered list of mutually independent parameters.
class ParameterSpace {
 public:
  ParameterSpace() = default;
  explicit ParameterSpace(std::vector<Parameter> params);

  std::size_t dim() const noexcept { return params_.size(); }
  const std::vector<Parameter>& params() const noexcept { return params_; }
  const Parameter& operator[](std::size_t k) const { return params_.at(k); }
  std::vector<int> quad_orders() const;

  nlohmann::json to_json() const;
  static ParameterSpace from_json(const nlohmann::json& doc);

  /// FNV-1a of the compact JSON serialization; identifies the space in plans.
  std::uint64_t fingerprint() const;

 private:
  std::vector<Parameter> params_;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kMaxQuadratureOrder = 64;
inline constexpr int kMaxPolynomialDegree = 32;

/// q-point Gauss rule for the probability measure of `dist`.
QuadratureRule gauss_quadrature(const Distribution& dist, int q);

/// psi_degree(x), orthonormal under `dist`.
double orthonormal_poly(const Distribution& dist, int degree, double x);

/// Fills out[a] = psi_a(x) for a = 0..out.size()-1.
void orthonormal_polys(const Distribution& dist, double x, std::span<double> out);

struct MultiIndex {
  std::vector<int> alpha;

  int total() const noexcept;
  std::size_t dim() const noexcept { return alpha.size(); }
  int operator[](std::size_t k) const { return alpha[k]; }

  auto operator<=>(const MultiIndex&) const = default;
};

inline constexpr std::size_t kDefaultBasisCap = 1'000'000;

/// (p+d)!/(p!d!), saturating at UINT64_MAX.
std::uint64_t multi_index_count(int d, int p) noexcept;

/// All alpha with |alpha| <= p, graded lexicographic order: by total degree,
/// then larger leading entries first.
std::vector<MultiIndex> enumerate_multi_indices(int d, int p,
                                                std::size_t cap = kDefaultBasisCap);

/// Basis tables for a total-degree-p expansion over a tensor grid.
class BasisSet {
 public:
  const ParameterSpace& space() const noexcept { return space_; }
  int order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  std::size_t size() const noexcept { return indices_.size(); }

  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  const std::vector<QuadratureRule>& rules() const noexcept { return rules_; }
  std::vector<int> grid_shape() const { return space_.quad_orders(); }

  /// V_k: q_k x (p+1), psi_a at the nodes of dimension k.
  const Eigen::MatrixXd& node_table(std::size_t k) const { return node_tables_.at(k); }
  /// Weighted table: weight_k[i] * V_k[i, a].
  const Eigen::MatrixXd& weighted_table(std::size_t k) const { return weighted_tables_.at(k); }

  /// Position of alpha in indices(), or -1.
  std::ptrdiff_t position(const MultiIndex& alpha) const;

  friend BasisSet build_basis(const ParameterSpace& space, int p, std::size_t cap);

 private:
  ParameterSpace space_;
  int order_ = 0;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> lookup_;
  std::vector<QuadratureRule> rules_;
  std::vector<Eigen::MatrixXd> node_tables_;
  std::vector<Eigen::MatrixXd> weighted_tables_;
};

/// Requires quad_order >= p + 1 in every dimension.
BasisSet build_basis(const ParameterSpace& space, int p, std::size_t cap = kDefaultBasisCap);

/// Physical parameter values at the grid node `index` (1-based per dimension).
std::vector<double> grid_point(const ParameterSpace& space, std::span<const int> index);
std::vector<double> grid_point(const std::vector<QuadratureRule>& rules,
                               std::span<const int> index);

}  // namespace tensoruq
