#include <random>
#include <unordered_set>

#include "tensoruq/error.hpp"
#include "tensoruq/pipeline.hpp"

namespace tensoruq {

SamplePlan make_plan(const ParameterSpace& space, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorCode::invalid_argument, "plan needs at least one sample");
  const BigInt total = grid_size(space);
  if (BigInt(n_samples) > total)
    throw Error(ErrorCode::out_of_range, "requested " + std::to_string(n_samples) +
                                             " samples from a grid of " + total.str());

  const auto shape = space.quad_orders();
  std::vector<QuadratureRule> rules;
  rules.reserve(shape.size());
  for (const auto& p : space.params()) rules.push_back(gauss_quadrature(p.dist, p.quad_order));

  std::vector<std::uniform_int_distribution<int>> draws;
  draws.reserve(shape.size());
  for (int q : shape) draws.emplace_back(1, q);

  SamplePlan plan;
  plan.space_fingerprint = space.fingerprint();
  plan.shape = shape;
  plan.entries.reserve(n_samples);
  std::unordered_set<GridIndex, GridIndexHash> seen;
  seen.reserve(n_samples);
  std::mt19937_64 rng(seed);
  std::vector<int> idx(shape.size());
  while (plan.entries.size() < n_samples) {
    for (std::size_t k = 0; k < shape.size(); ++k) idx[k] = draws[k](rng);
    GridIndex g(idx);
    if (!seen.insert(g).second) continue;  // rejection keeps draws uniform without replacement
    PlanEntry e;
    e.sample_id = static_cast<int>(plan.entries.size()) + 1;
    e.point = grid_point(rules, g.values());
    e.index = std::move(g);
    plan.entries.push_back(std::move(e));
  }
  return plan;
}

}  // namespace tensoruq
