#pragma once

#include <stdexcept>
#include <string>

namespace tangle_forge {

// Failure classes. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  parse,         // malformed input file
  axiom,         // separation system axioms violated
  precondition,  // algorithm precondition violated (family, caps, provenance)
  canonicity,    // relabeling changed the output
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error parse_error(const std::string& what) {
  return Error(ErrorKind::parse, what);
}

inline Error axiom_error(const std::string& what) {
  return Error(ErrorKind::axiom, what);
}

inline Error precondition_error(const std::string& what) {
  return Error(ErrorKind::precondition, what);
}

// Enumeration limits (vertex cap, separation cap) are preconditions of the
// exponential enumerators.
inline Error size_limit_error(const std::string& what) {
  return Error(ErrorKind::precondition, "size limit exceeded: " + what);
}

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return 2;
    case ErrorKind::axiom: return 3;
    case ErrorKind::precondition: return 4;
    case ErrorKind::canonicity: return 5;
    case ErrorKind::io: return 1;
  }
  return 1;
}

}  // namespace tangle_forge
