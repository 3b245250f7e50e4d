#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leakwarden {

// Raised when a caller breaks a documented precondition (bad span, length
// mismatch between parallel lists, empty metric list, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DocumentTooLarge : public std::runtime_error {
 public:
  DocumentTooLarge(std::size_t size, std::size_t limit)
      : std::runtime_error("document of " + std::to_string(size) +
                           " bytes exceeds limit of " + std::to_string(limit) + " bytes"),
        size_(size),
        limit_(limit) {}

  std::size_t size() const noexcept { return size_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t size_;
  std::size_t limit_;
};

}  // namespace leakwarden
