#ifndef COMMITPAY_OPTIONS_HPP
#define COMMITPAY_OPTIONS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "commitpay/lp.hpp"
#include "commitpay/rational.hpp"

namespace commitpay {

struct SolverOptions {
  /// When false every payment variable gets an upper bound of zero.
  bool allow_payments = true;
  /// Worker threads for independent subproblems; 0 picks the hardware count.
  unsigned threads = 0;
  /// Guard on the number of action profiles (times leader types) fed to the
  /// signaling LPs.
  std::size_t profile_limit = 100000;
  /// Guard on type-assignment / action-function enumeration.
  std::size_t enumeration_budget = 1000000;
  /// Called with every LP before it is solved. May be invoked from worker
  /// threads; the callee synchronizes.
  std::function<void(const LinearProgram&, const std::string&)> on_lp;
};

struct GridOptions {
  Rational step = Rational(1, 8);
  /// Largest payment tried; unset means the follower utility range.
  std::optional<Rational> payment_cap;
  /// Number of payment coordinates allowed to be nonzero at once.
  int max_payment_support = 1;
  /// Upper limit on evaluated grid points.
  std::size_t budget = 2000000;
  unsigned threads = 0;
  /// Action cap for the equilibrium enumeration used inside the grid.
  int nash_cap = 6;
};

}  // namespace commitpay

#endif  // COMMITPAY_OPTIONS_HPP
