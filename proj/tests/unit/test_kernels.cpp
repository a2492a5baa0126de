#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "tensoruq/error.hpp"
#include "tensoruq/kernels.hpp"

using namespace tensoruq;
namespace kn = tensoruq::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = -2.0,
                               double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool have_avx2() { return kn::isa_supported(kn::Isa::avx2); }

}  // namespace

TEST(Kernels, ScalarAlwaysSupported) {
  EXPECT_TRUE(kn::isa_supported(kn::Isa::scalar));
  const auto before = kn::active_isa();
  kn::set_isa(kn::Isa::scalar);
  EXPECT_EQ(kn::active_isa(), kn::Isa::scalar);
  kn::set_isa(before);
  if (!have_avx2()) EXPECT_THROW(kn::set_isa(kn::Isa::avx2), Error);
}

TEST(Kernels, ScalarReferenceValues) {
  std::vector<double> acc{1, 2, 3};
  const std::vector<double> table{10, 20};
  const std::vector<std::int32_t> off{1, 0, 1};
  kn::scalar::gather_multiply(acc, table, off);
  EXPECT_EQ(acc, (std::vector<double>{20, 20, 60}));

  EXPECT_EQ(kn::scalar::dot(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}), 32.0);

  const std::vector<double> cz{3.0, -0.5, 0.2};
  std::vector<double> w{0.0, 0.0, 0.0}, u{0.0, 0.0, 0.0};
  const auto st = kn::scalar::shrink_update(cz, w, u, 1.0);
  EXPECT_EQ(w, (std::vector<double>{2.0, 0.0, 0.0}));
  EXPECT_EQ(u, (std::vector<double>{1.0, -0.5, 0.2}));
  EXPECT_DOUBLE_EQ(st.primal_sq, 1.0 + 0.25 + 0.04);
  EXPECT_DOUBLE_EQ(st.change_sq, 4.0);
  EXPECT_DOUBLE_EQ(st.abs_sum, 3.7);

  // M = [1 3; 2 4], column-major.
  const std::vector<double> m{1, 2, 3, 4};
  std::vector<double> out(2), out2(2);
  kn::scalar::matvec(m, 2, std::vector<double>{1, -1}, out);
  EXPECT_EQ(out, (std::vector<double>{-2, -2}));
  kn::scalar::matvec_t2(m, 2, std::vector<double>{1, 0}, std::vector<double>{1, 1}, out, out2);
  EXPECT_EQ(out, (std::vector<double>{1, 3}));
  EXPECT_EQ(out2, (std::vector<double>{3, 7}));
}

TEST(Kernels, MatvecRejectsBadShapes) {
  const std::vector<double> m(6, 1.0);
  std::vector<double> out(2), out2(3), out4(4);
  EXPECT_THROW(kn::matvec(m, 4, std::vector<double>(2), out4), Error);
  EXPECT_THROW(kn::matvec(m, 2, std::vector<double>(2), out), Error);
  EXPECT_THROW(kn::matvec_t2(m, 2, std::vector<double>(2), std::vector<double>(3), out2, out2),
               Error);
}

#if defined(__x86_64__)

// Elementwise kernels must agree bitwise; reductions to rounding.
TEST(KernelEquivalence, GatherMultiplyIsBitwiseEqual) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 500u, 1031u}) {
    const auto table = random_vec(7, rng);
    std::uniform_int_distribution<std::int32_t> pick(0, 6);
    std::vector<std::int32_t> off(n);
    for (auto& o : off) o = pick(rng);
    auto a = random_vec(n, rng);
    auto b = a;
    kn::scalar::gather_multiply(a, table, off);
    kn::avx2::gather_multiply(b, table, off);
    EXPECT_EQ(a, b) << "n=" << n;
  }
}

TEST(KernelEquivalence, DotAgreesToRounding) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  std::mt19937_64 rng(2);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 64u, 1711u}) {
    const auto a = random_vec(n, rng), b = random_vec(n, rng);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
    EXPECT_NEAR(kn::scalar::dot(a, b), kn::avx2::dot(a, b), 1e-14 * (1.0 + mag)) << "n=" << n;
  }
}

TEST(KernelEquivalence, ShrinkUpdate) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 4u, 6u, 13u, 1128u, 1711u}) {
    const auto cz = random_vec(n, rng);
    auto w1 = random_vec(n, rng), u1 = random_vec(n, rng, -0.3, 0.3);
    auto w2 = w1, u2 = u1;
    const auto s1 = kn::scalar::shrink_update(cz, w1, u1, 0.7);
    const auto s2 = kn::avx2::shrink_update(cz, w2, u2, 0.7);
    EXPECT_EQ(w1, w2);
    EXPECT_EQ(u1, u2);
    EXPECT_NEAR(s1.primal_sq, s2.primal_sq, 1e-13 * (1.0 + s1.primal_sq));
    EXPECT_NEAR(s1.change_sq, s2.change_sq, 1e-13 * (1.0 + s1.change_sq));
    EXPECT_NEAR(s1.abs_sum, s2.abs_sum, 1e-13 * (1.0 + s1.abs_sum));
  }
}

TEST(KernelEquivalence, MatvecAgreesToRounding) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  std::mt19937_64 rng(4);
  const std::pair<std::size_t, std::size_t> shapes[] = {{1, 1}, {3, 2}, {8, 8},  {9, 5},
                                                        {17, 33}, {40, 3}, {1711, 6}, {6, 1711}};
  for (const auto& [rows, cols] : shapes) {
    const auto m = random_vec(rows * cols, rng);
    const auto x = random_vec(cols, rng);
    std::vector<double> a(rows), b(rows);
    kn::scalar::matvec(m, rows, x, a);
    kn::avx2::matvec(m, rows, x, b);
    for (std::size_t i = 0; i < rows; ++i) {
      double mag = 0.0;
      for (std::size_t j = 0; j < cols; ++j) mag += std::abs(m[i + j * rows] * x[j]);
      EXPECT_NEAR(a[i], b[i], 1e-14 * (1.0 + mag)) << rows << "x" << cols;
    }

    const auto v1 = random_vec(rows, rng), v2 = random_vec(rows, rng);
    std::vector<double> s1(cols), s2(cols), t1(cols), t2(cols);
    kn::scalar::matvec_t2(m, rows, v1, v2, s1, s2);
    kn::avx2::matvec_t2(m, rows, v1, v2, t1, t2);
    for (std::size_t j = 0; j < cols; ++j) {
      double mag1 = 0.0, mag2 = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        mag1 += std::abs(m[i + j * rows] * v1[i]);
        mag2 += std::abs(m[i + j * rows] * v2[i]);
      }
      EXPECT_NEAR(s1[j], t1[j], 1e-14 * (1.0 + mag1)) << rows << "x" << cols;
      EXPECT_NEAR(s2[j], t2[j], 1e-14 * (1.0 + mag2)) << rows << "x" << cols;
    }
  }
}

TEST(KernelEquivalence, DispatchFollowsSelectedIsa) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  const auto before = kn::active_isa();
  std::vector<double> x(9, 1.0), y(9, 1.0);
  kn::set_isa(kn::Isa::avx2);
  EXPECT_EQ(kn::dot(x, y), kn::avx2::dot(x, y));
  kn::set_isa(kn::Isa::scalar);
  EXPECT_EQ(kn::dot(x, y), kn::scalar::dot(x, y));
  kn::set_isa(before);
}

#endif
