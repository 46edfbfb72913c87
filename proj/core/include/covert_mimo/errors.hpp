#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace covert_mimo {

// Coarse classification used by callers (e.g. the CLI) to map failures to
// exit codes: config errors are caller mistakes, numerical errors are
// data-dependent breakdowns of an otherwise valid request.
enum class ErrorCategory { config, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class RankDeficient : public Error {
public:
  RankDeficient(std::string which, std::int64_t numerical_rank,
                const std::string& what)
      : Error(ErrorCategory::numerical, what),
        which_(std::move(which)),
        numerical_rank_(numerical_rank) {}
  const std::string& which() const noexcept { return which_; }
  std::int64_t numerical_rank() const noexcept { return numerical_rank_; }

private:
  std::string which_;
  std::int64_t numerical_rank_;
};

class ConvergenceFailure : public Error {
public:
  explicit ConvergenceFailure(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

class InfeasibleBudget : public Error {
public:
  explicit InfeasibleBudget(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class BudgetExceeded : public Error {
public:
  explicit BudgetExceeded(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class IndexOutOfRange : public Error {
public:
  explicit IndexOutOfRange(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class EmptyCodebook : public Error {
public:
  explicit EmptyCodebook(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class KeySizeNegative : public Error {
public:
  explicit KeySizeNegative(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class DepthTooLarge : public Error {
public:
  explicit DepthTooLarge(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

class ParseError : public Error {
public:
  ParseError(std::int64_t line, const std::string& what)
      : Error(ErrorCategory::config, what), line_(line) {}
  std::int64_t line() const noexcept { return line_; }

private:
  std::int64_t line_;
};

class ValidationError : public Error {
public:
  ValidationError(std::string field, const std::string& what)
      : Error(ErrorCategory::config, what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

}  // namespace covert_mimo
