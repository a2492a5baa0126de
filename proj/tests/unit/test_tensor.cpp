#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tensoruq/error.hpp"
#include "tensoruq/tensor.hpp"

using namespace tensoruq;

namespace {

CpFactors rank1_2d(std::vector<double> u1, std::vector<double> u2) {
  Eigen::MatrixXd a(u1.size(), 1), b(u2.size(), 1);
  for (std::size_t i = 0; i < u1.size(); ++i) a(i, 0) = u1[i];
  for (std::size_t i = 0; i < u2.size(); ++i) b(i, 0) = u2[i];
  return CpFactors({a, b});
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

}  // namespace

TEST(CpEntry, Examples) {
  const auto x = rank1_2d({1, 2}, {3, 4});
  EXPECT_EQ(cp_entry(x, GridIndex{2, 1}), 6.0);

  CpFactors two({Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 2)});
  two.factor(0) << 1, 1, 2, 2;
  two.factor(1) << 3, 3, 4, 4;
  EXPECT_EQ(cp_entry(two, GridIndex{2, 1}), 12.0);

  two.factor(1).col(1).setZero();
  EXPECT_EQ(cp_entry(two, GridIndex{2, 1}), 6.0);

  EXPECT_THROW(cp_entry(x, GridIndex{3, 1}), Error);
  EXPECT_THROW(cp_entry(x, GridIndex{0, 1}), Error);
  EXPECT_THROW(cp_entry(x, GridIndex{1}), Error);
}

TEST(CpFactors, RejectsInconsistentShapes) {
  EXPECT_THROW(CpFactors({Eigen::MatrixXd::Ones(3, 2), Eigen::MatrixXd::Ones(3, 1)}), Error);
  EXPECT_THROW(CpFactors(std::vector<Eigen::MatrixXd>{}), Error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 1);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(CpFactors({bad}), Error);
}

TEST(SampleSet, Validation) {
  const std::vector<int> shape{3, 3};
  EXPECT_THROW(SampleSet({}, shape), Error);
  try {
    SampleSet({{GridIndex{1, 1}, 1.0}, {GridIndex{1, 1}, 2.0}}, shape);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::duplicate_index);
  }
  EXPECT_THROW(SampleSet({{GridIndex{4, 1}, 1.0}}, shape), Error);
  EXPECT_THROW(SampleSet({{GridIndex{1, 1}, std::nan("")}}, shape), Error);

  SampleSet s({{GridIndex{1, 3}, 1.0}, {GridIndex{2, 2}, 2.0}}, shape);
  EXPECT_EQ(s.offsets(1)[0], 2);
  EXPECT_EQ(s.offsets(0)[1], 1);
  const std::vector<std::size_t> rows{1};
  EXPECT_EQ(s.subset(rows)[0].value, 2.0);
}

TEST(ResidualOnOmega, Examples) {
  const auto x = rank1_2d({1, 2}, {3, 4});
  const std::vector<int> shape{2, 2};
  SampleSet exact({{GridIndex{1, 1}, 3.0}, {GridIndex{2, 2}, 8.0}}, shape);
  EXPECT_EQ(residual_on_omega(x, exact).norm(), 0.0);

  const auto zero = CpFactors::zeros(shape, 2);
  const auto r = residual_on_omega(zero, exact);
  EXPECT_EQ(r[0], -3.0);
  EXPECT_EQ(r[1], -8.0);

  SampleSet one({{GridIndex{2, 1}, 4.0}}, shape);
  EXPECT_EQ(residual_on_omega(x, one)[0], 2.0);
}

TEST(ResidualOnOmega, LinearInEachFactor) {
  std::mt19937_64 rng(11);
  const std::vector<int> shape{3, 4, 2};
  const auto x = oracle::random_factors(shape, 2, rng);
  const auto full = oracle::full_samples(oracle::random_factors(shape, 1, rng));
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const auto dir = oracle::random_factors(shape, 2, rng).factor(k);
    auto at = [&](double h) {
      CpFactors y = x;
      y.factor(k) += h * dir;
      return residual_on_omega(y, full);
    };
    const Eigen::VectorXd r0 = at(0.0);
    const Eigen::VectorXd slope_small = (at(1e-3) - r0) / 1e-3;
    const Eigen::VectorXd slope_large = (at(1.0) - r0) / 1.0;
    EXPECT_LE((slope_small - slope_large).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Rank1Inner, Examples) {
  const auto x = rank1_2d({1, 2}, {3, 4});
  Rank1Tensor t{{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}};
  EXPECT_EQ(rank1_inner(x, t), 4.0);

  const auto ones = rank1_2d({1, 1}, {1, 1});
  Rank1Tensor v{{Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4)}};
  EXPECT_EQ(rank1_inner(ones, v), 21.0);

  Rank1Tensor wrong{{Eigen::Vector3d(1, 2, 3), Eigen::Vector2d(3, 4)}};
  EXPECT_THROW(rank1_inner(x, wrong), Error);
}

TEST(Rank1Inner, MatchesDenseOnRandomInstances) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> qd(2, 5), rd(1, 3), dd(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> shape(dd(rng));
    for (auto& q : shape) q = qd(rng);
    const auto x = oracle::random_factors(shape, rd(rng), rng);
    const auto t = oracle::random_factors(shape, 1, rng);
    Rank1Tensor v;
    for (std::size_t k = 0; k < shape.size(); ++k) v.vectors.push_back(t.factor(k).col(0));
    long double dense = 0.0L;
    oracle::for_each_index(shape, [&](const std::vector<int>& idx) {
      dense += static_cast<long double>(oracle::entry(x, idx)) * oracle::entry(t, idx);
    });
    EXPECT_LE(rel(rank1_inner(x, v), (double)dense), 1e-10);
  }
}

TEST(CpInner, FrobeniusIdentity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<int> shape{3, 4, 5, 2};
    const auto x = oracle::random_factors(shape, 1 + trial % 3, rng);
    const auto dense = dense_materialize(x);
    long double ss = 0.0L;
    for (double v : dense.data) ss += (long double)v * v;
    EXPECT_LE(rel(std::sqrt(cp_inner(x, x)), std::sqrt((double)ss)), 1e-10);
  }
}

TEST(BasisRank1, Examples) {
  const auto space = oracle::mixed_space(3, 3);
  const auto b = build_basis(space, 2);
  const auto zero = basis_rank1(b, MultiIndex{{0, 0, 0}});
  for (std::size_t k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(zero.vectors[k][i], b.rules()[k].weights[i]);

  ParameterSpace one({{"x", Distribution::gaussian(0.0, 1.0), 3}});
  const auto b1 = build_basis(one, 2);
  const auto v = basis_rank1(b1, MultiIndex{{1}}).vectors[0];
  EXPECT_NEAR(v[0], -std::sqrt(3.0) / 6.0, 1e-15);
  EXPECT_NEAR(v[1], 0.0, 1e-15);
  EXPECT_NEAR(v[2], std::sqrt(3.0) / 6.0, 1e-15);

  EXPECT_THROW(basis_rank1(b, MultiIndex{{3, 0, 0}}), Error);
}

TEST(BasisRank1, DiscreteOrthonormality) {
  const auto space = oracle::mixed_space(2, 3);
  const auto b = build_basis(space, 2);
  for (const auto& alpha : b.indices()) {
    // Unweighted Psi_alpha on the grid is rank 1: columns of the node tables.
    std::vector<Eigen::MatrixXd> f;
    for (std::size_t k = 0; k < 2; ++k) f.push_back(b.node_table(k).col(alpha[k]));
    const CpFactors psi(f);
    for (const auto& beta : b.indices()) {
      const double ip = rank1_inner(psi, basis_rank1(b, beta));
      EXPECT_NEAR(ip, alpha == beta ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(DenseMaterialize, Examples) {
  const auto x = rank1_2d({1, 2}, {1, 1});
  const auto d = dense_materialize(x);
  EXPECT_EQ(d.data, (std::vector<double>{1, 1, 2, 2}));
  const auto z = dense_materialize(CpFactors::zeros(std::vector<int>{3, 3, 3}, 2));
  for (double v : z.data) EXPECT_EQ(v, 0.0);

  std::mt19937_64 rng(3);
  const std::vector<int> shape{3, 2, 4};
  const auto r = oracle::random_factors(shape, 3, rng);
  const auto dr = dense_materialize(r);
  oracle::for_each_index(shape, [&](const std::vector<int>& idx) {
    std::vector<int> idx1{idx[0] + 1, idx[1] + 1, idx[2] + 1};
    EXPECT_EQ(dr.at(idx1), cp_entry(r, GridIndex(idx1)));
  });

  EXPECT_THROW(dense_materialize(CpFactors::zeros(std::vector<int>(13, 3), 1)), Error);
}

TEST(GpcCoefficients, FactorizedMatchesDenseProjection) {
  std::mt19937_64 rng(99);
  for (int d = 1; d <= 3; ++d) {
    const auto space = oracle::mixed_space(d, 3);
    const auto b = build_basis(space, 2);
    const auto x = oracle::random_factors(space.quad_orders(), 2, rng);
    const auto fast = gpc_coefficients(x, b);
    const auto slow = oracle::dense_coefficients(x, b);
    for (std::size_t a = 0; a < slow.size(); ++a)
      EXPECT_NEAR(fast[a], slow[a], 1e-10 * std::max(1.0, std::abs(slow[a])));
  }
}
