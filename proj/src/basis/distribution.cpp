#include <cmath>
#include <set>

#include "tensoruq/basis.hpp"
#include "tensoruq/error.hpp"

namespace tensoruq {

Distribution Distribution::gaussian(double mean, double stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || !(stddev > 0.0))
    throw Error(ErrorCode::invalid_argument, "gaussian requires finite mean and stddev > 0");
  return Distribution(Gaussian{mean, stddev});
}

Distribution Distribution::uniform(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
    throw Error(ErrorCode::invalid_argument, "uniform requires finite lower < upper");
  return Distribution(Uniform{lower, upper});
}

Distribution::Kind Distribution::kind() const noexcept {
  return std::holds_alternative<Gaussian>(law_) ? Kind::gaussian : Kind::uniform;
}

double Distribution::center() const noexcept {
  if (const auto* g = std::get_if<Gaussian>(&law_)) return g->mean;
  const auto& u = std::get<Uniform>(law_);
  return 0.5 * (u.lower + u.upper);
}

double Distribution::scale() const noexcept {
  if (const auto* g = std::get_if<Gaussian>(&law_)) return g->stddev;
  const auto& u = std::get<Uniform>(law_);
  return 0.5 * (u.upper - u.lower);
}

double Distribution::mean() const noexcept { return center(); }

double Distribution::variance() const noexcept {
  const double s = scale();
  return kind() == Kind::gaussian ? s * s : s * s / 3.0;
}

double Distribution::recurrence_offdiag(int n) const noexcept {
  if (n <= 0) return 0.0;
  const double dn = n;
  if (kind() == Kind::gaussian) return std::sqrt(dn);
  return dn / std::sqrt(4.0 * dn * dn - 1.0);
}

double Distribution::raw_moment(int m) const {
  if (m < 0) throw Error(ErrorCode::invalid_argument, "moment order must be >= 0");
  if (const auto* u = std::get_if<Uniform>(&law_)) {
    const double a = u->lower, b = u->upper;
    return (std::pow(b, m + 1) - std::pow(a, m + 1)) / ((m + 1) * (b - a));
  }
  // E[(mu + s Z)^m] = sum_{k even} C(m,k) mu^{m-k} s^k (k-1)!!
  const auto& g = std::get<Gaussian>(law_);
  double total = 0.0;
  double binom = 1.0;  // C(m, k)
  double dfact = 1.0;  // (k-1)!!
  for (int k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * (m - k + 1) / k;
    if (k % 2 == 0) {
      if (k > 0) dfact *= (k - 1);
      total += binom * std::pow(g.mean, m - k) * std::pow(g.stddev, k) * dfact;
    }
  }
  return total;
}

ParameterSpace::ParameterSpace(std::vector<Parameter> params) : params_(std::move(params)) {
  if (params_.empty()) throw Error(ErrorCode::invalid_argument, "parameter space is empty");
  std::set<std::string> names;
  for (const auto& p : params_) {
    if (p.name.empty()) throw Error(ErrorCode::invalid_argument, "parameter name is empty");
    if (!names.insert(p.name).second)
      throw Error(ErrorCode::invalid_argument, "duplicate parameter name '" + p.name + "'");
    if (p.quad_order < 1 || p.quad_order > kMaxQuadratureOrder)
      throw Error(ErrorCode::out_of_range,
                  "parameter '" + p.name + "': q must lie in [1, " +
                      std::to_string(kMaxQuadratureOrder) + "]");
  }
}

std::vector<int> ParameterSpace::quad_orders() const {
  std::vector<int> q;
  q.reserve(params_.size());
  for (const auto& p : params_) q.push_back(p.quad_order);
  return q;
}

nlohmann::json ParameterSpace::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& p : params_) {
    nlohmann::json dist;
    if (const auto* g = std::get_if<Gaussian>(&p.dist.law())) {
      dist = {{"kind", "gaussian"}, {"mean", g->mean}, {"stddev", g->stddev}};
    } else {
      const auto& u = std::get<Uniform>(p.dist.law());
      dist = {{"kind", "uniform"}, {"lower", u.lower}, {"upper", u.upper}};
    }
    list.push_back({{"name", p.name}, {"dist", dist}, {"q", p.quad_order}});
  }
  return {{"params", list}};
}

ParameterSpace ParameterSpace::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("params") || !doc["params"].is_array())
    throw Error(ErrorCode::parse_error, "parameter space JSON needs a \"params\" array");
  std::vector<Parameter> params;
  try {
    for (const auto& item : doc["params"]) {
      const auto& dist = item.at("dist");
      const auto kind = dist.at("kind").get<std::string>();
      Parameter p{item.at("name").get<std::string>(), Distribution::gaussian(0.0, 1.0),
                  item.at("q").get<int>()};
      if (kind == "gaussian") {
        p.dist = Distribution::gaussian(dist.at("mean").get<double>(),
                                        dist.at("stddev").get<double>());
      } else if (kind == "uniform") {
        p.dist = Distribution::uniform(dist.at("lower").get<double>(),
                                       dist.at("upper").get<double>());
      } else {
        throw Error(ErrorCode::unsupported_distribution,
                    "unsupported distribution kind '" + kind + "'");
      }
      params.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("parameter space JSON: ") + e.what());
  }
  return ParameterSpace(std::move(params));
}

std::uint64_t ParameterSpace::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : to_json().dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace tensoruq
