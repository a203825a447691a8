#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace argexp {

// Process exit codes; stable contract for scripting.
enum class ExitCode : int {
  ok = 0,
  input_error = 2,
  query_error = 3,
  internal_error = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Unreadable files, malformed datasets or configs, stale artifacts.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ExitCode::input_error, what) {}
};

/// A dataset or config file that failed validation at a given line.
class LoadError : public InputError {
 public:
  LoadError(const std::string& path, std::size_t line, const std::string& what)
      : InputError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Weighting requested over a tensor with no observations.
class UndefinedModelError : public InputError {
 public:
  explicit UndefinedModelError(const std::string& what) : InputError(what) {}
};

class QueryError : public Error {
 public:
  explicit QueryError(const std::string& what) : Error(ExitCode::query_error, what) {}
};

class OutOfVocabularyError : public QueryError {
 public:
  explicit OutOfVocabularyError(std::string token)
      : QueryError("out of vocabulary: " + token), token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class EmptyPrototypeError : public QueryError {
 public:
  EmptyPrototypeError(std::string input, std::string slot)
      : QueryError("no fillers for (" + input + ", " + slot + ")"),
        input_(std::move(input)),
        slot_(std::move(slot)) {}
  const std::string& input() const noexcept { return input_; }
  const std::string& slot() const noexcept { return slot_; }

 private:
  std::string input_;
  std::string slot_;
};

/// Broken internal invariant (e.g. an observed triple with zero expectation).
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(ExitCode::internal_error, what) {}
};

class SpaceMismatchError : public ConsistencyError {
 public:
  explicit SpaceMismatchError(const std::string& what) : ConsistencyError(what) {}
};

}  // namespace argexp
