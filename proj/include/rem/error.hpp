#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rem {

class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(const std::string &symbol) : Error("unknown symbol '" + symbol + "'") {}
};

class ArityError : public Error {
  using Error::Error;
};

class InvalidId : public Error {
  using Error::Error;
};

/// The e-graph has unions that have not been propagated by rebuild().
class DirtyEGraph : public Error {
  using Error::Error;
};

class InvalidOrdering : public Error {
  using Error::Error;
};

class MissingTrie : public Error {
  using Error::Error;
};

/// Raised by the naive evaluator when the enumeration exceeds its budget.
class SearchSpaceTooLarge : public Error {
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  [[nodiscard]] auto offset() const -> std::size_t { return offset_; }

 private:
  std::size_t offset_;
};

/// Two engines produced different match sets for the same input.
class EngineDisagreement : public Error {
  using Error::Error;
};

}  // namespace rem
