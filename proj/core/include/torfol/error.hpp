#ifndef TORFOL_ERROR_HPP
#define TORFOL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace torfol {

// Library-wide exception. `code` is a stable machine-readable tag
// ("NotSimplicial", "Unbounded", ...); `what()` carries the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace torfol

#endif
