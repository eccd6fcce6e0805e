#ifndef COMMITPAY_SRC_GRID_SUPPORT_HPP
#define COMMITPAY_SRC_GRID_SUPPORT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "commitpay/errors.hpp"
#include "commitpay/rational.hpp"

namespace commitpay::detail {

/// 1/step when that is a positive integer.
inline long grid_divisions(const Rational& step) {
  if (step <= 0 || step > 1) throw SchemaError("grid step must lie in (0, 1]");
  const Rational inv = 1 / step;
  if (denominator(inv) != 1) throw SchemaError("grid step must be 1/k for an integer k");
  return numerator(inv).convert_to<long>();
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t out = 1;
  for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

/// All points of the probability simplex in `dims` coordinates whose entries
/// are multiples of 1/divisions, in lexicographically decreasing order of the
/// first coordinate.
inline std::vector<VectorXq> simplex_grid(int dims, long divisions, std::size_t budget) {
  const std::size_t count = binomial(divisions + dims - 1, dims - 1);
  if (count > budget)
    throw SizeError("simplex grid has " + std::to_string(count) + " points, above the budget of " +
                    std::to_string(budget));
  std::vector<VectorXq> out;
  std::vector<long> parts(dims, 0);
  auto rec = [&](auto&& self, int pos, long left) -> void {
    if (pos == dims - 1) {
      parts[pos] = left;
      VectorXq v(dims);
      for (int i = 0; i < dims; ++i) v[i] = Rational(parts[i], divisions);
      out.push_back(std::move(v));
      return;
    }
    for (long k = left; k >= 0; --k) {
      parts[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, divisions);
  return out;
}

/// 0, step, 2 step, ... up to cap.
inline std::vector<Rational> payment_levels(const Rational& step, const Rational& cap) {
  if (cap < 0) throw SchemaError("payment cap must be nonnegative");
  std::vector<Rational> out;
  for (Rational v = 0; v <= cap; v += step) out.push_back(v);
  return out;
}

}  // namespace commitpay::detail

#endif  // COMMITPAY_SRC_GRID_SUPPORT_HPP
