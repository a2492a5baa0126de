#include "tensoruq/error.hpp"
#include "tensoruq/pipeline.hpp"

namespace tensoruq {

BigInt grid_size(const ParameterSpace& space) {
  BigInt total = 1;
  for (const auto& p : space.params()) total *= p.quad_order;
  return total;
}

std::string grid_size_decimal(const ParameterSpace& space) { return grid_size(space).str(); }

std::string scientific_string(const std::string& decimal, int digits) {
  if (decimal.empty() || digits < 1 ||
      decimal.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::invalid_argument, "not a non-negative decimal integer: " + decimal);
  const auto first = decimal.find_first_not_of('0');
  if (first == std::string::npos) return "0";
  const std::string s = decimal.substr(first);
  int exponent = static_cast<int>(s.size()) - 1;

  // Round half up to `digits` significant digits.
  std::string mant = s.substr(0, std::min<std::size_t>(s.size(), digits));
  mant.resize(static_cast<std::size_t>(digits), '0');
  if (s.size() > static_cast<std::size_t>(digits) && s[digits] >= '5') {
    int i = digits - 1;
    while (i >= 0 && mant[i] == '9') mant[i--] = '0';
    if (i >= 0) {
      ++mant[i];
    } else {
      mant.insert(mant.begin(), '1');
      mant.pop_back();
      ++exponent;
    }
  }
  std::string out(1, mant[0]);
  if (digits > 1) out += "." + mant.substr(1);
  return out + "e" + std::to_string(exponent);
}

}  // namespace tensoruq
