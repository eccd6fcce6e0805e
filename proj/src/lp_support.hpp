#ifndef COMMITPAY_SRC_LP_SUPPORT_HPP
#define COMMITPAY_SRC_LP_SUPPORT_HPP

#include <stdexcept>
#include <string>

#include "commitpay/lp.hpp"
#include "commitpay/options.hpp"

namespace commitpay::detail {

/// Solves an LP built by one of the solvers, checking the optimality
/// certificate. A failed check is a bug, never an input problem.
inline LpSolution solve_checked(const LinearProgram& lp, const SolverOptions& options,
                                const std::string& title) {
  if (options.on_lp) options.on_lp(lp, title);
  LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Optimal && !check_optimality_certificate(lp, sol))
    throw std::logic_error("optimality certificate rejected for LP " + title);
  return sol;
}

inline std::optional<Rational> payment_upper(const SolverOptions& options) {
  return options.allow_payments ? std::nullopt : std::optional<Rational>(Rational(0));
}

}  // namespace commitpay::detail

#endif  // COMMITPAY_SRC_LP_SUPPORT_HPP
