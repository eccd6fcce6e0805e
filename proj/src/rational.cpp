#include "commitpay/rational.hpp"

#include <regex>
#include <stdexcept>

namespace commitpay {

Rational parse_rational(std::string_view text) {
  static const std::regex pattern(R"(-?[0-9]+(/[0-9]+)?)");
  const std::string str(text);
  if (!std::regex_match(str, pattern)) {
    throw std::invalid_argument("not a rational literal: \"" + str + "\"");
  }
  const auto slash = str.find('/');
  if (slash != std::string::npos &&
      str.find_first_not_of('0', slash + 1) == std::string::npos) {
    throw std::invalid_argument("zero denominator: \"" + str + "\"");
  }
  return Rational(str);
}

std::string to_string(const Rational& value) { return value.str(); }

}  // namespace commitpay
