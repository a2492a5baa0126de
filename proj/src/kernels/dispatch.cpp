#include <atomic>
#include <cstdlib>
#include <cstring>

#include "tensoruq/error.hpp"
#include "tensoruq/kernels.hpp"

namespace tensoruq::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(TENSORUQ_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa default_isa() noexcept {
  if (const char* env = std::getenv("TENSORUQ_ISA"); env && std::strcmp(env, "scalar") == 0)
    return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{default_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa))
    throw Error(ErrorCode::invalid_argument,
                std::string("instruction set not available: ") + isa_name(isa));
  current().store(isa, std::memory_order_relaxed);
}

void gather_multiply(std::span<double> acc, std::span<const double> table,
                     std::span<const std::int32_t> offsets) {
#if defined(TENSORUQ_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::gather_multiply(acc, table, offsets);
#endif
  scalar::gather_multiply(acc, table, offsets);
}

double dot(std::span<const double> a, std::span<const double> b) {
#if defined(TENSORUQ_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

ShrinkStats shrink_update(std::span<const double> cz, std::span<double> w, std::span<double> u,
                          double kappa) {
#if defined(TENSORUQ_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::shrink_update(cz, w, u, kappa);
#endif
  return scalar::shrink_update(cz, w, u, kappa);
}

void matvec(std::span<const double> mat, std::size_t rows, std::span<const double> x,
            std::span<double> out) {
  if (mat.size() != rows * x.size() || out.size() != rows)
    throw Error(ErrorCode::shape_mismatch, "matvec operands are not conformable");
#if defined(TENSORUQ_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::matvec(mat, rows, x, out);
#endif
  scalar::matvec(mat, rows, x, out);
}

void matvec_t2(std::span<const double> mat, std::size_t rows, std::span<const double> v1,
               std::span<const double> v2, std::span<double> out1, std::span<double> out2) {
  if (mat.size() != rows * out1.size() || out2.size() != out1.size() || v1.size() != rows ||
      v2.size() != rows)
    throw Error(ErrorCode::shape_mismatch, "matvec_t2 operands are not conformable");
#if defined(TENSORUQ_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::matvec_t2(mat, rows, v1, v2, out1, out2);
#endif
  scalar::matvec_t2(mat, rows, v1, v2, out1, out2);
}

}  // namespace tensoruq::kernels
