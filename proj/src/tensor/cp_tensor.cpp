#include <cmath>
#include <unordered_set>

#include "tensoruq/error.hpp"
#include "tensoruq/kernels.hpp"
#include "tensoruq/tensor.hpp"

namespace tensoruq {
namespace {

void check_index(const GridIndex& index, std::span<const int> shape) {
  if (index.dim() != shape.size())
    throw Error(ErrorCode::shape_mismatch, "grid index has " + std::to_string(index.dim()) +
                                               " entries, expected " +
                                               std::to_string(shape.size()));
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] < 1 || index[k] > shape[k])
      throw Error(ErrorCode::out_of_range, "grid index " + std::to_string(index[k]) +
                                               " out of [1, " + std::to_string(shape[k]) +
                                               "] in dimension " + std::to_string(k + 1));
  }
}

void check_same_grid(const CpFactors& x, std::span<const int> shape) {
  if (x.dim() != shape.size())
    throw Error(ErrorCode::shape_mismatch, "factor count " + std::to_string(x.dim()) +
                                               " does not match grid dimension " +
                                               std::to_string(shape.size()));
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (x.factor(k).rows() != shape[k])
      throw Error(ErrorCode::shape_mismatch,
                  "factor " + std::to_string(k + 1) + " has " +
                      std::to_string(x.factor(k).rows()) + " rows, grid has " +
                      std::to_string(shape[k]));
  }
}

}  // namespace

bool GridIndex::in_bounds(std::span<const int> shape) const noexcept {
  if (idx_.size() != shape.size()) return false;
  for (std::size_t k = 0; k < shape.size(); ++k)
    if (idx_[k] < 1 || idx_[k] > shape[k]) return false;
  return true;
}

std::size_t GridIndexHash::operator()(const GridIndex& g) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int v : g.values()) {
    h ^= static_cast<std::size_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

CpFactors::CpFactors(std::vector<Eigen::MatrixXd> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorCode::invalid_argument, "CP factors need d >= 1");
  const auto r = factors_.front().cols();
  if (r < 1) throw Error(ErrorCode::invalid_argument, "CP rank must be >= 1");
  for (const auto& u : factors_) {
    if (u.cols() != r)
      throw Error(ErrorCode::shape_mismatch, "CP factors disagree on the rank");
    if (u.rows() < 1) throw Error(ErrorCode::shape_mismatch, "CP factor with no rows");
    if (!u.allFinite()) throw Error(ErrorCode::invalid_argument, "CP factor has non-finite entries");
  }
}

CpFactors CpFactors::zeros(std::span<const int> shape, int rank) {
  std::vector<Eigen::MatrixXd> f;
  f.reserve(shape.size());
  for (int q : shape) f.push_back(Eigen::MatrixXd::Zero(q, rank));
  return CpFactors(std::move(f));
}

int CpFactors::rank() const noexcept {
  return factors_.empty() ? 0 : static_cast<int>(factors_.front().cols());
}

std::vector<int> CpFactors::shape() const {
  std::vector<int> s;
  s.reserve(factors_.size());
  for (const auto& u : factors_) s.push_back(static_cast<int>(u.rows()));
  return s;
}

bool CpFactors::operator==(const CpFactors& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const auto& a = factors_[k];
    const auto& b = other.factors_[k];
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

SampleSet::SampleSet(std::vector<Sample> entries, std::span<const int> shape)
    : entries_(std::move(entries)), shape_(shape.begin(), shape.end()) {
  if (entries_.empty()) throw Error(ErrorCode::empty_samples, "sample set is empty");
  std::unordered_set<GridIndex, GridIndexHash> seen;
  seen.reserve(entries_.size());
  offsets_.assign(shape_.size(), std::vector<std::int32_t>(entries_.size()));
  values_.resize(static_cast<Eigen::Index>(entries_.size()));
  for (std::size_t s = 0; s < entries_.size(); ++s) {
    const auto& e = entries_[s];
    check_index(e.index, shape_);
    if (!std::isfinite(e.value))
      throw Error(ErrorCode::invalid_argument,
                  "sample " + std::to_string(s + 1) + " has a non-finite value");
    if (!seen.insert(e.index).second)
      throw Error(ErrorCode::duplicate_index, "sample " + std::to_string(s + 1) +
                                                  " repeats an earlier grid index");
    for (std::size_t k = 0; k < shape_.size(); ++k) offsets_[k][s] = e.index[k] - 1;
    values_[static_cast<Eigen::Index>(s)] = e.value;
  }
}

SampleSet SampleSet::subset(std::span<const std::size_t> rows) const {
  std::vector<Sample> picked;
  picked.reserve(rows.size());
  for (std::size_t r : rows) picked.push_back(entries_.at(r));
  return SampleSet(std::move(picked), shape_);
}

double DenseTensor::at(std::span<const int> index1) const {
  std::size_t lin = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index1[k] < 1 || index1[k] > shape[k])
      throw Error(ErrorCode::out_of_range, "dense index out of bounds");
    lin = lin * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(index1[k] - 1);
  }
  return data[lin];
}

double cp_entry(const CpFactors& x, const GridIndex& index) {
  const auto shape = x.shape();
  check_index(index, shape);
  double total = 0.0;
  for (int j = 0; j < x.rank(); ++j) {
    double prod = 1.0;
    for (std::size_t k = 0; k < x.dim(); ++k) prod *= x.factor(k)(index[k] - 1, j);
    total += prod;
  }
  return total;
}

Eigen::VectorXd cp_entries(const CpFactors& x, const SampleSet& samples) {
  check_same_grid(x, samples.shape());
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd prod(n);
  for (int j = 0; j < x.rank(); ++j) {
    prod.setOnes();
    for (std::size_t k = 0; k < x.dim(); ++k) {
      const auto& u = x.factor(k);
      kernels::gather_multiply({prod.data(), static_cast<std::size_t>(prod.size())},
                               {u.col(j).data(), static_cast<std::size_t>(u.rows())},
                               samples.offsets(k));
    }
    total += prod;
  }
  return total;
}

Eigen::VectorXd residual_on_omega(const CpFactors& x, const SampleSet& samples) {
  return cp_entries(x, samples) - samples.values();
}

double rank1_inner(const CpFactors& x, const Rank1Tensor& t) {
  if (t.vectors.size() != x.dim())
    throw Error(ErrorCode::shape_mismatch, "rank-1 tensor dimension mismatch");
  for (std::size_t k = 0; k < x.dim(); ++k)
    if (t.vectors[k].size() != x.factor(k).rows())
      throw Error(ErrorCode::shape_mismatch,
                  "rank-1 vector " + std::to_string(k + 1) + " has the wrong length");
  double total = 0.0;
  for (int j = 0; j < x.rank(); ++j) {
    double prod = 1.0;
    for (std::size_t k = 0; k < x.dim(); ++k) prod *= x.factor(k).col(j).dot(t.vectors[k]);
    total += prod;
  }
  return total;
}

double cp_inner(const CpFactors& x, const CpFactors& y) {
  if (x.shape() != y.shape()) throw Error(ErrorCode::shape_mismatch, "CP shapes differ");
  double total = 0.0;
  for (int j = 0; j < x.rank(); ++j) {
    for (int jj = 0; jj < y.rank(); ++jj) {
      double prod = 1.0;
      for (std::size_t k = 0; k < x.dim(); ++k) prod *= x.factor(k).col(j).dot(y.factor(k).col(jj));
      total += prod;
    }
  }
  return total;
}

Rank1Tensor basis_rank1(const BasisSet& basis, const MultiIndex& alpha) {
  if (basis.position(alpha) < 0) throw Error(ErrorCode::not_in_basis, "multi-index not in basis");
  Rank1Tensor t;
  t.vectors.reserve(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k)
    t.vectors.push_back(basis.weighted_table(k).col(alpha[k]));
  return t;
}

DenseTensor dense_materialize(const CpFactors& x) {
  DenseTensor out;
  out.shape = x.shape();
  std::uint64_t total = 1;
  for (int q : out.shape) {
    total *= static_cast<std::uint64_t>(q);
    if (total > kMaxDenseEntries)
      throw Error(ErrorCode::grid_too_large, "grid exceeds the dense debug limit of 10^6 entries");
  }
  out.data.assign(total, 0.0);
  std::vector<int> idx(out.shape.size(), 0);
  for (std::uint64_t lin = 0; lin < total; ++lin) {
    double v = 0.0;
    for (int j = 0; j < x.rank(); ++j) {
      double prod = 1.0;
      for (std::size_t k = 0; k < idx.size(); ++k) prod *= x.factor(k)(idx[k], j);
      v += prod;
    }
    out.data[lin] = v;
    for (std::size_t k = idx.size(); k-- > 0;) {
      if (++idx[k] < out.shape[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace tensoruq

namespace tensoruq {

Eigen::VectorXd gpc_coefficients(const CpFactors& x, const BasisSet& basis) {
  check_same_grid(x, basis.grid_shape());
  const int r = x.rank();
  std::vector<Eigen::MatrixXd> projected;
  projected.reserve(x.dim());
  for (std::size_t k = 0; k < x.dim(); ++k)
    projected.push_back(basis.weighted_table(k).transpose() * x.factor(k));

  const auto& indices = basis.indices();
  Eigen::VectorXd c(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const auto& alpha = indices[a].alpha;
    double total = 0.0;
    for (int j = 0; j < r; ++j) {
      double prod = 1.0;
      for (std::size_t k = 0; k < alpha.size(); ++k) prod *= projected[k](alpha[k], j);
      total += prod;
    }
    c[static_cast<Eigen::Index>(a)] = total;
  }
  return c;
}

}  // namespace tensoruq
