#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "tensoruq/kernels.hpp"

namespace tensoruq::kernels::avx2 {
namespace {

inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void gather_multiply(std::span<double> acc, std::span<const double> table,
                     std::span<const std::int32_t> offsets) {
  const std::size_t n = acc.size();
  double* out = acc.data();
  const double* base = table.data();
  const std::int32_t* idx = offsets.data();
  std::size_t s = 0;
  for (; s + 4 <= n; s += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + s));
    const __m256d g = _mm256_i32gather_pd(base, vi, 8);
    _mm256_storeu_pd(out + s, _mm256_mul_pd(_mm256_loadu_pd(out + s), g));
  }
  for (; s < n; ++s) out[s] *= base[idx[s]];
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += pa[i] * pb[i];
  return sum;
}

ShrinkStats shrink_update(std::span<const double> cz, std::span<double> w, std::span<double> u,
                          double kappa) {
  const std::size_t n = cz.size();
  const __m256d hi = _mm256_set1_pd(kappa);
  const __m256d lo = _mm256_set1_pd(-kappa);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d primal = _mm256_setzero_pd();
  __m256d change = _mm256_setzero_pd();
  __m256d abs_sum = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(cz.data() + i);
    const __m256d v = _mm256_add_pd(c, _mm256_loadu_pd(u.data() + i));
    const __m256d w_new = _mm256_sub_pd(v, _mm256_min_pd(_mm256_max_pd(v, lo), hi));
    const __m256d r = _mm256_sub_pd(c, w_new);
    const __m256d dw = _mm256_sub_pd(w_new, _mm256_loadu_pd(w.data() + i));
    primal = _mm256_add_pd(primal, _mm256_mul_pd(r, r));
    change = _mm256_add_pd(change, _mm256_mul_pd(dw, dw));
    abs_sum = _mm256_add_pd(abs_sum, _mm256_andnot_pd(sign_mask, c));
    _mm256_storeu_pd(w.data() + i, w_new);
    _mm256_storeu_pd(u.data() + i, _mm256_sub_pd(v, w_new));
  }
  ShrinkStats stats{hsum(primal), hsum(change), hsum(abs_sum)};
  for (; i < n; ++i) {
    const double v = cz[i] + u[i];
    const double w_new = v - std::min(std::max(v, -kappa), kappa);
    const double r = cz[i] - w_new;
    const double dw = w_new - w[i];
    stats.primal_sq += r * r;
    stats.change_sq += dw * dw;
    stats.abs_sum += std::abs(cz[i]);
    w[i] = w_new;
    u[i] = v - w_new;
  }
  return stats;
}

void matvec(std::span<const double> mat, std::size_t rows, std::span<const double> x,
            std::span<double> out) {
  const std::size_t cols = x.size();
  const double* m = mat.data();
  double* o = out.data();
  constexpr std::size_t kMaxCached = 32;
  __m256d xb[kMaxCached];
  const std::size_t cached = std::min(cols, kMaxCached);
  for (std::size_t j = 0; j < cached; ++j) xb[j] = _mm256_set1_pd(x[j]);
  auto bcast = [&](std::size_t j) { return j < kMaxCached ? xb[j] : _mm256_set1_pd(x[j]); };

  std::size_t i = 0;
  for (; i + 8 <= rows; i += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < cols; ++j) {
      const double* col = m + j * rows + i;
      const __m256d xj = bcast(j);
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(col), xj, acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(col + 4), xj, acc1);
    }
    _mm256_storeu_pd(o + i, acc0);
    _mm256_storeu_pd(o + i + 4, acc1);
  }
  for (; i + 4 <= rows; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < cols; ++j)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(m + j * rows + i), bcast(j), acc);
    _mm256_storeu_pd(o + i, acc);
  }
  for (; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += m[j * rows + i] * x[j];
    o[i] = sum;
  }
}

void matvec_t2(std::span<const double> mat, std::size_t rows, std::span<const double> v1,
               std::span<const double> v2, std::span<double> out1, std::span<double> out2) {
  const double* p1 = v1.data();
  const double* p2 = v2.data();
  for (std::size_t j = 0; j < out1.size(); ++j) {
    const double* col = mat.data() + j * rows;
    __m256d a1 = _mm256_setzero_pd(), b1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), b2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= rows; i += 8) {
      const __m256d c0 = _mm256_loadu_pd(col + i);
      const __m256d c1 = _mm256_loadu_pd(col + i + 4);
      a1 = _mm256_fmadd_pd(c0, _mm256_loadu_pd(p1 + i), a1);
      b1 = _mm256_fmadd_pd(c1, _mm256_loadu_pd(p1 + i + 4), b1);
      a2 = _mm256_fmadd_pd(c0, _mm256_loadu_pd(p2 + i), a2);
      b2 = _mm256_fmadd_pd(c1, _mm256_loadu_pd(p2 + i + 4), b2);
    }
    for (; i + 4 <= rows; i += 4) {
      const __m256d c0 = _mm256_loadu_pd(col + i);
      a1 = _mm256_fmadd_pd(c0, _mm256_loadu_pd(p1 + i), a1);
      a2 = _mm256_fmadd_pd(c0, _mm256_loadu_pd(p2 + i), a2);
    }
    double s1 = hsum(_mm256_add_pd(a1, b1)), s2 = hsum(_mm256_add_pd(a2, b2));
    for (; i < rows; ++i) {
      s1 += col[i] * p1[i];
      s2 += col[i] * p2[i];
    }
    out1[j] = s1;
    out2[j] = s2;
  }
}

}  // namespace tensoruq::kernels::avx2
