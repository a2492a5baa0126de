#include <algorithm>
#include <cmath>

#include "tensoruq/kernels.hpp"

namespace tensoruq::kernels::scalar {

void gather_multiply(std::span<double> acc, std::span<const double> table,
                     std::span<const std::int32_t> offsets) {
  const std::size_t n = acc.size();
  for (std::size_t s = 0; s < n; ++s) acc[s] *= table[static_cast<std::size_t>(offsets[s])];
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

ShrinkStats shrink_update(std::span<const double> cz, std::span<double> w, std::span<double> u,
                          double kappa) {
  ShrinkStats stats;
  for (std::size_t i = 0; i < cz.size(); ++i) {
    const double v = cz[i] + u[i];
    // soft(v, kappa) == v - clamp(v, -kappa, kappa)
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
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double* col = mat.data() + j * rows;
    for (std::size_t i = 0; i < rows; ++i) out[i] += col[i] * x[j];
  }
}

void matvec_t2(std::span<const double> mat, std::size_t rows, std::span<const double> v1,
               std::span<const double> v2, std::span<double> out1, std::span<double> out2) {
  for (std::size_t j = 0; j < out1.size(); ++j) {
    const double* col = mat.data() + j * rows;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      s1 += col[i] * v1[i];
      s2 += col[i] * v2[i];
    }
    out1[j] = s1;
    out2[j] = s2;
  }
}

}  // namespace tensoruq::kernels::scalar
