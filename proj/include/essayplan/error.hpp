// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace essayplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Structurally valid input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A single queried word is missing from a vocabulary.
class OovError : public Error {
 public:
  explicit OovError(const std::string& word, const std::string& where = "vocabulary")
      : Error("word '" + word + "' is not in the " + where), word_(word) {}

  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

/// Numerical training failure.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace essayplan
