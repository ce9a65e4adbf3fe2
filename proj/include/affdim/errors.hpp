#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affdim {

enum class ErrorKind {
  validation,    // malformed input or violated system invariant
  domain,        // argument outside the mathematical domain of an operation
  invalid_word,  // word index out of range
  resource,      // enumeration cap exceeded
  scale_order,   // covering-number scale preconditions violated
  range,         // parameter outside a theorem's validity range
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class InvalidWordError : public Error {
 public:
  explicit InvalidWordError(const std::string& what) : Error(ErrorKind::invalid_word, what) {}
};

class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t cap)
      : Error(ErrorKind::resource, what + " (cap " + std::to_string(cap) + ", override with AFFINE_DIM_CAP)"),
        cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class ScaleOrderError : public Error {
 public:
  explicit ScaleOrderError(const std::string& what) : Error(ErrorKind::scale_order, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorKind::range, what) {}
};

/// Enumeration cap shared by every exhaustive search. Defaults to 10^7 and
/// can be overridden through the AFFINE_DIM_CAP environment variable.
std::size_t enumeration_cap();

/// Throws ResourceError when `count` exceeds `cap`.
void check_cap(std::size_t count, std::size_t cap, const char* what);

}  // namespace affdim
