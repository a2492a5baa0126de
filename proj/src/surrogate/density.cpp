#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tensoruq/error.hpp"
#include "tensoruq/surrogate.hpp"

namespace tensoruq {
namespace {

// Kernel contributions beyond this many bandwidths are below 1e-14.
constexpr double kKernelCutoff = 8.0;

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<double> sample_parameters(const ParameterSpace& space, std::size_t n,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t d = space.dim();
  std::vector<double> out(n * d);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < d; ++k) {
      const auto& dist = space[k].dist;
      const double t = dist.kind() == Distribution::Kind::gaussian ? normal(rng)
                                                                   : 2.0 * unit(rng) - 1.0;
      out[s * d + k] = dist.from_standard(t);
    }
  }
  return out;
}

std::vector<double> sample_surrogate(const GpcModel& model, std::size_t n, std::uint64_t seed) {
  const std::size_t d = model.space().dim();
  const auto points = sample_parameters(model.space(), n, seed);
  std::vector<double> values(n);
  for (std::size_t s = 0; s < n; ++s)
    values[s] = model.evaluate(std::span<const double>(points.data() + s * d, d));
  return values;
}

DensityEstimate kernel_density(std::span<const double> values, std::size_t grid_size) {
  if (values.size() < 2) throw Error(ErrorCode::invalid_argument, "density needs >= 2 values");
  if (grid_size < 2) throw Error(ErrorCode::invalid_argument, "density grid needs >= 2 points");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  DensityEstimate est;
  est.sample_count = sorted.size();
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
    est.point_mass = true;
    est.point_value = mean;
    return est;
  }

  // Silverman's rule of thumb.
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double h = 0.9 * spread * std::pow(n, -0.2);
  est.bandwidth = h;

  const double lo = sorted.front() - 3.0 * h;
  const double hi = sorted.back() + 3.0 * h;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  const double norm = 1.0 / (n * h * std::sqrt(2.0 * std::numbers::pi));
  est.grid.resize(grid_size);
  est.density.resize(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double x = lo + step * static_cast<double>(g);
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), x - kKernelCutoff * h);
    const auto last = std::upper_bound(first, sorted.end(), x + kKernelCutoff * h);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) / h;
      sum += std::exp(-0.5 * z * z);
    }
    est.grid[g] = x;
    est.density[g] = sum * norm;
  }
  return est;
}

DensityEstimate density(const GpcModel& model, std::size_t n_samples, std::uint64_t seed,
                        std::size_t grid_size) {
  if (n_samples < 100) throw Error(ErrorCode::invalid_argument, "density needs >= 100 samples");
  const auto values = sample_surrogate(model, n_samples, seed);
  return kernel_density(values, grid_size);
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty() || bins == 0)
    throw Error(ErrorCode::invalid_argument, "histogram needs values and bins");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(b, bins - 1)]++;
  }
  h.density.resize(bins);
  const double scale = 1.0 / (static_cast<double>(values.size()) * width);
  for (std::size_t b = 0; b < bins; ++b) h.density[b] = static_cast<double>(counts[b]) * scale;
  return h;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_argument, "KS needs two samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return worst;
}

}  // namespace tensoruq
