#include <random>

#include "tensoruq/error.hpp"
#include "tensoruq/pipeline.hpp"

namespace tensoruq {
namespace {

struct Group {
  const char* prefix;
  int count;
  double mean;
  double stddev;
};

ParameterSpace make_space(std::initializer_list<Group> groups) {
  std::vector<Parameter> params;
  for (const auto& g : groups) {
    for (int i = 1; i <= g.count; ++i) {
      // Slight spread of nominal values so parameters are not interchangeable.
      const double mean = g.mean * (1.0 + 0.01 * (i - 1));
      params.push_back({std::string(g.prefix) + std::to_string(i),
                        Distribution::gaussian(mean, g.stddev * mean), 3});
    }
  }
  return ParameterSpace(std::move(params));
}

// Coefficients in the orthonormal basis of one dimension; absent = constant 1.
double factor_value(const Distribution& dist, const std::vector<double>& coef, double x) {
  std::vector<double> psi(coef.size());
  orthonormal_polys(dist, x, psi);
  double v = 0.0;
  for (std::size_t a = 0; a < coef.size(); ++a) v += coef[a] * psi[a];
  return v;
}

}  // namespace

double SyntheticModel::value(std::span<const double> xi) const {
  if (xi.size() != space.dim())
    throw Error(ErrorCode::shape_mismatch, "synthetic model dimension mismatch");
  double y = 0.0;
  for (const auto& term : terms) {
    double prod = term.scale;
    for (const auto& [k, coef] : term.factors)
      prod *= factor_value(space[static_cast<std::size_t>(k)].dist, coef,
                           xi[static_cast<std::size_t>(k)]);
    y += prod;
  }
  return y;
}

std::vector<double> SyntheticModel::true_coefficients(const std::vector<MultiIndex>& indices) const {
  std::vector<double> c(indices.size(), 0.0);
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const auto& alpha = indices[a];
    if (alpha.dim() != space.dim())
      throw Error(ErrorCode::shape_mismatch, "multi-index dimension mismatch");
    for (const auto& term : terms) {
      double prod = term.scale;
      for (std::size_t k = 0; k < alpha.dim() && prod != 0.0; ++k) {
        const auto it = term.factors.find(static_cast<int>(k));
        if (it == term.factors.end()) {
          if (alpha[k] != 0) prod = 0.0;
        } else {
          const auto& coef = it->second;
          prod *= static_cast<std::size_t>(alpha[k]) < coef.size() ? coef[alpha[k]] : 0.0;
        }
      }
      c[a] += prod;
    }
  }
  return c;
}

void SyntheticModel::validate() const {
  if (terms.empty()) throw Error(ErrorCode::invalid_argument, "synthetic model has no terms");
  if (!(noise >= 0.0)) throw Error(ErrorCode::invalid_argument, "noise level must be >= 0");
  for (const auto& term : terms) {
    int degree = 0;
    for (const auto& [k, coef] : term.factors) {
      if (k < 0 || static_cast<std::size_t>(k) >= space.dim())
        throw Error(ErrorCode::out_of_range, "synthetic factor dimension out of range");
      if (coef.empty()) throw Error(ErrorCode::invalid_argument, "empty synthetic factor");
      degree += static_cast<int>(coef.size()) - 1;
    }
    if (degree > order)
      throw Error(ErrorCode::invalid_argument,
                  "synthetic term of degree " + std::to_string(degree) + " exceeds order " +
                      std::to_string(order));
  }
}

SyntheticModel bundled_model(const std::string& name) {
  SyntheticModel m;
  m.name = name;
  m.order = 2;
  if (name == "mems46") {
    // Capacitance-like output: plate term plus a smaller fringing term.
    m.space = make_space({{"gap", 12, 2.0, 0.03},
                          {"width", 12, 40.0, 0.02},
                          {"thick", 10, 1.5, 0.04},
                          {"modulus", 12, 160.0, 0.05}});
    m.terms = {{2.0, {{4, {1.0, 0.1}}, {13, {1.0, -0.15}}}},
               {0.3, {{27, {1.0, 0.3, 0.1}}}}};
  } else if (name == "osc57") {
    // Frequency-like output over threshold voltage, oxide and channel geometry.
    m.space = make_space({{"vth", 21, 0.45, 0.03},
                          {"tox", 14, 1.2, 0.02},
                          {"leff", 11, 45.0, 0.03},
                          {"weff", 11, 90.0, 0.03}});
    m.terms = {{1.0, {{3, {1.0, 0.12}}, {30, {1.0, -0.08}}}},
               {0.25, {{45, {1.0, 0.2, 0.05}}}}};
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown synthetic model '" + name + "'");
  }
  m.validate();
  return m;
}

std::vector<std::string> bundled_model_names() { return {"mems46", "osc57"}; }

SampleSet run_synthetic(const SyntheticModel& model, const SamplePlan& plan,
                        std::uint64_t noise_seed) {
  model.validate();
  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Sample> samples;
  samples.reserve(plan.entries.size());
  for (const auto& e : plan.entries) {
    if (e.point.size() != model.space.dim() || e.index.dim() != model.space.dim())
      throw Error(ErrorCode::shape_mismatch, "plan row " + std::to_string(e.sample_id) +
                                                 " does not match the model dimension");
    double y = model.value(e.point);
    if (model.noise > 0.0) y += model.noise * normal(rng);
    samples.push_back({e.index, y});
  }
  const auto shape = model.space.quad_orders();
  if (!plan.shape.empty() && plan.shape != shape)
    throw Error(ErrorCode::shape_mismatch, "plan grid does not match the model grid");
  return SampleSet(std::move(samples), shape);
}

}  // namespace tensoruq
