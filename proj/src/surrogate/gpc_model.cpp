#include <algorithm>
#include <cmath>
#include <functional>

#include "tensoruq/error.hpp"
#include "tensoruq/surrogate.hpp"

namespace tensoruq {

GpcModel::GpcModel(ParameterSpace space, int order, std::vector<double> coeffs)
    : space_(std::move(space)), order_(order), coeffs_(std::move(coeffs)) {
  if (space_.dim() == 0) throw Error(ErrorCode::invalid_argument, "model space is empty");
  if (order_ < 0 || order_ > kMaxPolynomialDegree)
    throw Error(ErrorCode::out_of_range, "model order out of range");
  indices_ = enumerate_multi_indices(static_cast<int>(space_.dim()), order_);
  if (coeffs_.size() != indices_.size())
    throw Error(ErrorCode::shape_mismatch, "model has " + std::to_string(coeffs_.size()) +
                                               " coefficients, basis has " +
                                               std::to_string(indices_.size()));
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw Error(ErrorCode::invalid_argument, "non-finite coefficient");
  terms_.reserve(indices_.size());
  for (const auto& alpha : indices_) {
    Term t;
    for (std::size_t k = 0; k < alpha.dim(); ++k)
      if (alpha[k] > 0) t.support.emplace_back(static_cast<int>(k), alpha[k]);
    terms_.push_back(std::move(t));
  }
}

double GpcModel::coefficient(const MultiIndex& alpha) const {
  if (alpha.dim() != space_.dim() || alpha.total() > order_)
    throw Error(ErrorCode::not_in_basis, "multi-index not in model basis");
  for (int a : alpha.alpha)
    if (a < 0) throw Error(ErrorCode::not_in_basis, "negative multi-index entry");
  for (std::size_t i = 0; i < indices_.size(); ++i)
    if (indices_[i] == alpha) return coeffs_[i];
  throw Error(ErrorCode::not_in_basis, "multi-index not in model basis");
}

double GpcModel::evaluate(std::span<const double> xi) const {
  const std::size_t d = space_.dim();
  if (xi.size() != d)
    throw Error(ErrorCode::shape_mismatch, "point has " + std::to_string(xi.size()) +
                                               " entries, model expects " + std::to_string(d));
  const std::size_t width = static_cast<std::size_t>(order_) + 1;
  std::vector<double> psi(d * width);
  for (std::size_t k = 0; k < d; ++k) {
    if (!std::isfinite(xi[k])) throw Error(ErrorCode::invalid_argument, "non-finite point");
    orthonormal_polys(space_[k].dist, xi[k], std::span<double>(psi.data() + k * width, width));
  }
  double total = 0.0;
  for (std::size_t a = 0; a < terms_.size(); ++a) {
    double v = coeffs_[a];
    for (const auto& [k, deg] : terms_[a].support) v *= psi[static_cast<std::size_t>(k) * width + deg];
    total += v;
  }
  return total;
}

nlohmann::json GpcModel::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t a = 0; a < indices_.size(); ++a)
    list.push_back({{"alpha", indices_[a].alpha}, {"c", coeffs_[a]}});
  return {{"space", space_.to_json()}, {"p", order_}, {"coeffs", list}};
}

GpcModel GpcModel::from_json(const nlohmann::json& doc) {
  try {
    ParameterSpace space = ParameterSpace::from_json(doc.at("space"));
    const int p = doc.at("p").get<int>();
    const auto expected = enumerate_multi_indices(static_cast<int>(space.dim()), p);
    const auto& list = doc.at("coeffs");
    if (list.size() != expected.size())
      throw Error(ErrorCode::parse_error, "coefficient list has " + std::to_string(list.size()) +
                                              " entries, expected " +
                                              std::to_string(expected.size()));
    std::vector<double> coeffs;
    coeffs.reserve(list.size());
    for (std::size_t a = 0; a < list.size(); ++a) {
      MultiIndex alpha{list[a].at("alpha").get<std::vector<int>>()};
      if (alpha != expected[a])
        throw Error(ErrorCode::parse_error,
                    "coefficient " + std::to_string(a + 1) + " is out of graded-lex order");
      coeffs.push_back(list[a].at("c").get<double>());
    }
    return GpcModel(std::move(space), p, std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("model JSON: ") + e.what());
  }
}

GpcModel extract_coefficients(const CpFactors& x, const BasisSet& basis) {
  const Eigen::VectorXd c = gpc_coefficients(x, basis);
  return GpcModel(basis.space(), basis.order(), std::vector<double>(c.data(), c.data() + c.size()));
}

double evaluate(const GpcModel& model, std::span<const double> xi) { return model.evaluate(xi); }

Moments moments(const GpcModel& model) {
  const auto& c = model.coeffs();
  Moments m;
  m.mean = c.front();
  for (std::size_t a = 1; a < c.size(); ++a) m.variance += c[a] * c[a];
  return m;
}

SparsityReport sparsity_report(const GpcModel& model, double threshold) {
  if (!(threshold >= 0.0)) throw Error(ErrorCode::invalid_argument, "threshold must be >= 0");
  SparsityReport rep;
  rep.total = model.size();
  rep.sorted_magnitudes.reserve(model.size());
  for (double c : model.coeffs()) {
    const double mag = std::abs(c);
    if (mag > threshold) ++rep.kept;
    rep.sorted_magnitudes.push_back(mag);
  }
  std::sort(rep.sorted_magnitudes.begin(), rep.sorted_magnitudes.end(), std::greater<>());
  return rep;
}

}  // namespace tensoruq
