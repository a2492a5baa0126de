#pragma once

#include <cstdint>
#include <span>

namespace tensoruq::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

/// Best supported ISA, unless TENSORUQ_ISA=scalar is set in the environment.
Isa active_isa() noexcept;
/// Throws tensoruq::Error if the ISA is not available on this CPU/build.
void set_isa(Isa isa);

struct ShrinkStats {
  double primal_sq = 0.0;  // sum (cz - w_new)^2
  double change_sq = 0.0;  // sum (w_new - w_old)^2
  double abs_sum = 0.0;    // sum |cz|
};

// Dispatched entry points.

/// acc[s] *= table[offsets[s]]
void gather_multiply(std::span<double> acc, std::span<const double> table,
                     std::span<const std::int32_t> offsets);

double dot(std::span<const double> a, std::span<const double> b);

/// Scaled ADMM update for the l1 block: w <- soft(cz + u, kappa); u <- u + cz - w.
ShrinkStats shrink_update(std::span<const double> cz, std::span<double> w,
                          std::span<double> u, double kappa);

/// out = M x for a column-major rows x (mat.size() / rows) matrix M.
void matvec(std::span<const double> mat, std::size_t rows, std::span<const double> x,
            std::span<double> out);

/// out1 = M^T v1 and out2 = M^T v2 in one pass over M.
void matvec_t2(std::span<const double> mat, std::size_t rows, std::span<const double> v1,
               std::span<const double> v2, std::span<double> out1, std::span<double> out2);

namespace scalar {
void gather_multiply(std::span<double> acc, std::span<const double> table,
                     std::span<const std::int32_t> offsets);
double dot(std::span<const double> a, std::span<const double> b);
ShrinkStats shrink_update(std::span<const double> cz, std::span<double> w,
                          std::span<double> u, double kappa);
void matvec(std::span<const double> mat, std::size_t rows, std::span<const double> x,
            std::span<double> out);
void matvec_t2(std::span<const double> mat, std::size_t rows, std::span<const double> v1,
               std::span<const double> v2, std::span<double> out1, std::span<double> out2);
}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
void gather_multiply(std::span<double> acc, std::span<const double> table,
                     std::span<const std::int32_t> offsets);
double dot(std::span<const double> a, std::span<const double> b);
ShrinkStats shrink_update(std::span<const double> cz, std::span<double> w,
                          std::span<double> u, double kappa);
void matvec(std::span<const double> mat, std::size_t rows, std::span<const double> x,
            std::span<double> out);
void matvec_t2(std::span<const double> mat, std::size_t rows, std::span<const double> v1,
               std::span<const double> v2, std::span<double> out1, std::span<double> out2);
}  // namespace avx2
#endif

}  // namespace tensoruq::kernels
