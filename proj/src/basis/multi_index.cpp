#include <limits>
#include <numeric>

#include "tensoruq/basis.hpp"
#include "tensoruq/error.hpp"

namespace tensoruq {
namespace {

void fill_degree(std::vector<int>& alpha, std::size_t pos, int remaining,
                 std::vector<MultiIndex>& out) {
  if (pos + 1 == alpha.size()) {
    alpha[pos] = remaining;
    out.push_back(MultiIndex{alpha});
    alpha[pos] = 0;
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    alpha[pos] = a;
    fill_degree(alpha, pos + 1, remaining - a, out);
  }
  alpha[pos] = 0;
}

}  // namespace

int MultiIndex::total() const noexcept { return std::accumulate(alpha.begin(), alpha.end(), 0); }

std::uint64_t multi_index_count(int d, int p) noexcept {
  if (d < 1 || p < 0) return 0;
  // C(p+d, p) built incrementally; every partial product is itself a binomial.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 c = 1;
  for (int i = 1; i <= p; ++i) {
    c = c * static_cast<unsigned>(d + i) / static_cast<unsigned>(i);
    if (c > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<MultiIndex> enumerate_multi_indices(int d, int p, std::size_t cap) {
  if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
  if (p < 0) throw Error(ErrorCode::invalid_argument, "order must be >= 0");
  const std::uint64_t count = multi_index_count(d, p);
  if (count > cap)
    throw Error(ErrorCode::basis_too_large,
                "basis of " + std::to_string(count) + " terms exceeds cap " + std::to_string(cap));

  std::vector<MultiIndex> out;
  out.reserve(count);
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  for (int degree = 0; degree <= p; ++degree) fill_degree(alpha, 0, degree, out);
  return out;
}

}  // namespace tensoruq
