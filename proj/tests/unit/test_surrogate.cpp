#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tensoruq/error.hpp"
#include "tensoruq/surrogate.hpp"

using namespace tensoruq;

namespace {

ParameterSpace std_normal(int d, int q = 3) {
  std::vector<Parameter> params;
  for (int k = 0; k < d; ++k)
    params.push_back({"x" + std::to_string(k + 1), Distribution::gaussian(0.0, 1.0), q});
  return ParameterSpace(std::move(params));
}

GpcModel random_model(const ParameterSpace& space, int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(multi_index_count(static_cast<int>(space.dim()), p));
  for (auto& v : c) v = u(rng);
  return GpcModel(space, p, c);
}

double trapezoid(const DensityEstimate& e) {
  double s = 0.0;
  for (std::size_t i = 1; i < e.grid.size(); ++i)
    s += 0.5 * (e.density[i] + e.density[i - 1]) * (e.grid[i] - e.grid[i - 1]);
  return s;
}

}  // namespace

TEST(Extract, OnesGiveOnlyConstant) {
  const auto b = build_basis(std_normal(1), 2);
  const CpFactors ones({Eigen::MatrixXd::Ones(3, 1)});
  const auto m = extract_coefficients(ones, b);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_NEAR(m.coeffs()[0], 1.0, 1e-14);
  EXPECT_NEAR(m.coeffs()[1], 0.0, 1e-14);
  EXPECT_NEAR(m.coeffs()[2], 0.0, 1e-14);
}

TEST(Extract, SingleBasisFunctionIsRecovered) {
  const auto space = oracle::mixed_space(3, 3);
  const auto b = build_basis(space, 2);
  for (const auto& target : b.indices()) {
    // psi_alpha sampled on the grid is rank one.
    std::vector<Eigen::MatrixXd> f;
    for (std::size_t k = 0; k < 3; ++k) {
      Eigen::MatrixXd u(3, 1);
      for (int i = 0; i < 3; ++i)
        u(i, 0) = oracle::psi(space[k].dist, target[k], b.rules()[k].nodes[i]);
      f.push_back(u);
    }
    const auto m = extract_coefficients(CpFactors(std::move(f)), b);
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m.indices()[a] == target)
        EXPECT_NEAR(m.coeffs()[a], 1.0, 1e-10);
      else
        EXPECT_LE(std::abs(m.coeffs()[a]), 1e-10);
    }
  }
}

TEST(Extract, MatchesDenseSum) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto space = oracle::mixed_space(3, 3);
    const auto b = build_basis(space, 2);
    const auto x = oracle::random_factors(space.quad_orders(), 1 + trial % 3, rng);
    const auto m = extract_coefficients(x, b);
    const auto want = oracle::dense_coefficients(x, b);
    for (std::size_t a = 0; a < want.size(); ++a)
      EXPECT_LE(std::abs(m.coeffs()[a] - want[a]), 1e-10 * std::max(1.0, std::abs(want[a])));
  }
}

TEST(Evaluate, Examples) {
  const GpcModel constant(std_normal(2), 1, {5.0, 0.0, 0.0});
  EXPECT_EQ(evaluate(constant, std::vector<double>{0.3, -7.0}), 5.0);
  const GpcModel linear(std_normal(1), 1, {0.0, 1.0});
  EXPECT_NEAR(evaluate(linear, std::vector<double>{2.0}), 2.0, 1e-15);
  EXPECT_THROW(evaluate(linear, std::vector<double>{1.0, 2.0}), Error);
  EXPECT_THROW(evaluate(linear, std::vector<double>{NAN}), Error);
}

TEST(Evaluate, ReproducesPolynomialGroundTruth) {
  // y = 1 + x1 - 2 x2^2 + 0.5 x1 x3 on a mixed space, sampled on the full grid.
  const auto space = oracle::mixed_space(3, 3);
  const auto b = build_basis(space, 2);
  auto y = [](const std::vector<double>& x) {
    return 1.0 + x[0] - 2.0 * x[1] * x[1] + 0.5 * x[0] * x[2];
  };
  // Four rank-one terms.
  std::vector<Eigen::MatrixXd> f(3, Eigen::MatrixXd::Ones(3, 4));
  for (int i = 0; i < 3; ++i) {
    const double n0 = b.rules()[0].nodes[i], n1 = b.rules()[1].nodes[i],
                 n2 = b.rules()[2].nodes[i];
    f[0](i, 1) = n0;
    f[1](i, 2) = -2.0 * n1 * n1;
    f[0](i, 3) = 0.5 * n0;
    f[2](i, 3) = n2;
  }
  const auto m = extract_coefficients(CpFactors(f), b);
  const auto pts = sample_parameters(space, 100, 3);
  for (std::size_t s = 0; s < 100; ++s) {
    const std::vector<double> x(pts.begin() + 3 * s, pts.begin() + 3 * s + 3);
    EXPECT_NEAR(m.evaluate(x), y(x), 1e-8 * (1.0 + std::abs(y(x))));
  }
}

TEST(Moments, Examples) {
  const auto m1 = moments(GpcModel(std_normal(2), 1, {5.0, 0.0, 0.0}));
  EXPECT_EQ(m1.mean, 5.0);
  EXPECT_EQ(m1.variance, 0.0);
  const auto m2 = moments(GpcModel(std_normal(2), 1, {1.0, 0.0, 2.0}));
  EXPECT_EQ(m2.mean, 1.0);
  EXPECT_EQ(m2.variance, 4.0);
}

TEST(Moments, AgreeWithMonteCarlo) {
  std::mt19937_64 rng(4);
  const auto space = oracle::mixed_space(3, 3);
  const auto model = random_model(space, 2, rng);
  const std::size_t n = 1'000'000;
  const auto v = sample_surrogate(model, n, 5);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= static_cast<double>(n - 1);
  m4 /= static_cast<double>(n);
  const auto exact = moments(model);
  const double se_mean = std::sqrt(m2 / static_cast<double>(n));
  const double se_var = std::sqrt((m4 - m2 * m2) / static_cast<double>(n));
  EXPECT_LE(std::abs(mean - exact.mean), 3.0 * se_mean);
  EXPECT_LE(std::abs(m2 - exact.variance), 3.0 * se_var);
}

TEST(Sparsity, Report) {
  const GpcModel m(std_normal(2), 1, {0.5, -3.0, 0.01});
  const auto all = sparsity_report(m, 0.0);
  EXPECT_EQ(all.kept, 3u);
  EXPECT_EQ(all.total, 3u);
  EXPECT_EQ(all.sorted_magnitudes, (std::vector<double>{3.0, 0.5, 0.01}));
  EXPECT_EQ(sparsity_report(m, 0.1).kept, 2u);
  EXPECT_EQ(sparsity_report(m, 3.0).kept, 0u);
  EXPECT_THROW(sparsity_report(m, -1.0), Error);
}

TEST(Density, LinearGaussianModelIsStandardNormal) {
  const GpcModel m(std_normal(1), 1, {0.0, 1.0});
  const auto e = density(m, 100'000, 6);
  ASSERT_FALSE(e.point_mass);
  EXPECT_EQ(e.sample_count, 100'000u);
  EXPECT_EQ(e.grid.size(), kDefaultDensityGrid);
  double worst = 0.0;
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    const double want = std::exp(-0.5 * e.grid[i] * e.grid[i]) / std::sqrt(2.0 * std::numbers::pi);
    worst = std::max(worst, std::abs(e.density[i] - want));
  }
  EXPECT_LE(worst, 0.02);
  EXPECT_NEAR(trapezoid(e), 1.0, 1e-3);
}

TEST(Density, IntegratesToOne) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = random_model(oracle::mixed_space(3, 3), 2, rng);
    const auto e = density(model, 2000, trial);
    EXPECT_NEAR(trapezoid(e), 1.0, 1e-3);
    for (std::size_t i = 1; i < e.grid.size(); ++i) EXPECT_GT(e.grid[i], e.grid[i - 1]);
    for (double v : e.density) EXPECT_GE(v, 0.0);
  }
}

TEST(Density, ConstantModelIsPointMass) {
  const GpcModel m(std_normal(2), 1, {2.5, 0.0, 0.0});
  const auto e = density(m, 500, 1);
  EXPECT_TRUE(e.point_mass);
  EXPECT_EQ(e.point_value, 2.5);
  EXPECT_TRUE(e.grid.empty());
}

TEST(Density, DeterministicPerSeed) {
  std::mt19937_64 rng(8);
  const auto model = random_model(oracle::mixed_space(2, 3), 2, rng);
  const auto a = density(model, 1000, 11);
  const auto b = density(model, 1000, 11);
  EXPECT_EQ(a.grid, b.grid);
  EXPECT_EQ(a.density, b.density);
  EXPECT_EQ(a.bandwidth, b.bandwidth);
  EXPECT_NE(density(model, 1000, 12).density, a.density);
  EXPECT_THROW(density(model, 99, 1), Error);
}

TEST(Histogram, UnitArea) {
  const std::vector<double> v{0.0, 0.1, 0.5, 0.9, 1.0};
  const auto h = histogram(v, 2);
  EXPECT_EQ(h.edges, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_DOUBLE_EQ(h.density[0], 2.0 / (5 * 0.5));
  EXPECT_DOUBLE_EQ(h.density[1], 3.0 / (5 * 0.5));
  EXPECT_THROW(histogram(v, 0), Error);
}

TEST(Ks, Examples) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_EQ(ks_distance(a, a), 0.0);
  EXPECT_EQ(ks_distance(a, std::vector<double>{10, 11}), 1.0);
  EXPECT_DOUBLE_EQ(ks_distance(a, std::vector<double>{2.5}), 0.5);
  EXPECT_THROW(ks_distance(a, std::vector<double>{}), Error);
}

TEST(Ks, SameLawGivesSmallDistance) {
  const GpcModel m(std_normal(1), 1, {0.0, 1.0});
  const auto a = sample_surrogate(m, 5000, 1);
  const auto b = sample_surrogate(m, 5000, 2);
  // 1.36 * sqrt(2/5000) is the 95% critical value.
  EXPECT_LE(ks_distance(a, b), 0.028);
  const GpcModel shifted(std_normal(1), 1, {0.5, 1.0});
  EXPECT_GT(ks_distance(a, sample_surrogate(shifted, 5000, 3)), 0.1);
}

TEST(GpcModel, JsonRoundTrip) {
  std::mt19937_64 rng(9);
  const auto model = random_model(oracle::mixed_space(3, 3), 2, rng);
  const auto doc = model.to_json();
  EXPECT_EQ(doc.at("p"), 2);
  EXPECT_EQ(doc.at("coeffs").size(), model.size());
  EXPECT_EQ(doc.at("coeffs")[1].at("alpha"), (std::vector<int>{1, 0, 0}));
  const auto back = GpcModel::from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.coeffs(), model.coeffs());
  EXPECT_EQ(back.order(), 2);
  EXPECT_EQ(back.indices(), model.indices());

  auto broken = doc;
  broken["coeffs"].erase(0);
  EXPECT_THROW(GpcModel::from_json(broken), Error);
}

TEST(GpcModel, Validation) {
  EXPECT_THROW(GpcModel(std_normal(2), 1, {1.0, 2.0}), Error);
  EXPECT_THROW(GpcModel(std_normal(1), 1, {1.0, INFINITY}), Error);
  const GpcModel m(std_normal(2), 1, {1.0, 2.0, 3.0});
  EXPECT_EQ(m.coefficient(MultiIndex{{0, 1}}), 3.0);
  EXPECT_THROW(m.coefficient(MultiIndex{{1, 1}}), Error);
}
