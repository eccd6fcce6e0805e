#ifndef COMMITPAY_TESTS_HELPERS_HPP
#define COMMITPAY_TESTS_HELPERS_HPP

#include <string>

#include "commitpay/io.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline commitpay::NormalFormGame fixture_game(const std::string& name) {
  return commitpay::as_normal_form(commitpay::parse_game(commitpay::read_json_file(fixture_path(name))));
}

inline commitpay::Rational q(long num, long den = 1) { return commitpay::Rational(num) / commitpay::Rational(den); }

inline commitpay::VectorXq vec(std::initializer_list<commitpay::Rational> values) {
  commitpay::VectorXq out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& v : values) out[i++] = v;
  return out;
}

}  // namespace testing_support

#endif  // COMMITPAY_TESTS_HELPERS_HPP
