#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plancurate {

// Broad class of a failure; the CLI maps it onto its exit code.
enum class ErrorCategory { kUsage, kData, kResource };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

// Invalid configuration or specification values (GenSpec, ImbalanceSpec, ...).
class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

// A value violates the invariants of its domain type.
class InvalidValue : public Error {
 public:
  explicit InvalidValue(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

// Fewer distinct tasks exist (or could be found) than were requested.
class ExhaustionError : public Error {
 public:
  explicit ExhaustionError(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class LayoutMismatch : public Error {
 public:
  explicit LayoutMismatch(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class UnknownId : public Error {
 public:
  explicit UnknownId(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::kData, what) {}
};

class ResourceLimitError : public Error {
 public:
  explicit ResourceLimitError(const std::string& what)
      : Error(ErrorCategory::kResource, what) {}
};

// Malformed record in a line-oriented file. `line` is 1-based.
class FormatError : public Error {
 public:
  FormatError(std::string file, std::size_t line, const std::string& reason)
      : Error(ErrorCategory::kData,
              (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) +
                  ": " + reason),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace plancurate
