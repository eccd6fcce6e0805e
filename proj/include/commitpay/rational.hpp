#ifndef COMMITPAY_RATIONAL_HPP
#define COMMITPAY_RATIONAL_HPP

#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace commitpay {

/// Exact rational scalar used by every solver path. Always kept in lowest
/// terms with a positive denominator by the GMP backend.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXq = VectorX<Rational>;
using MatrixXq = MatrixX<Rational>;

/// Parses "p/q" or "p" (optional leading '-'). Floats, exponents, whitespace
/// and zero denominators are rejected with std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written without a denominator.
std::string to_string(const Rational& value);

/// The two-argument GMP constructor takes the denominator as unsigned, so a
/// negative one must go through division.
inline Rational rational(long num, long den = 1) { return Rational(num) / Rational(den); }

}  // namespace commitpay

#endif  // COMMITPAY_RATIONAL_HPP
