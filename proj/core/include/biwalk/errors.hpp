#pragma once

#include <stdexcept>
#include <string>

namespace biwalk {

// Base class for all library errors. Subclasses map onto CLI exit codes:
// data-shaped problems (parse/validation/lookup/range/config) exit 2,
// numeric failures exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (bad field count, bad header, unparsable number).
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what) {}
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Input is well-formed but violates a contract (self-loop, unknown language,
// referential integrity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configuration that can never produce a result (no lexicalized concepts,
// empty vocabulary, missing required input).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unknown key in a lookup (concept, word).
class LookupError : public Error {
 public:
  using Error::Error;
};

// Out-of-range request (budget larger than available tokens).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Numeric failure: degenerate fit, undefined correlation, non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace biwalk
