#ifndef COMMITPAY_ERRORS_HPP
#define COMMITPAY_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace commitpay {

/// Structural problem with an input document or with arguments passed to an
/// operation. Carries every violation found, not just the first.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  explicit SchemaError(const std::string& violation)
      : SchemaError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// An enumeration or LP family would exceed its configured budget.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace commitpay

#endif  // COMMITPAY_ERRORS_HPP
