#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rifp {

// Base class for everything the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grammar-level failure. `position` is a 0-based byte offset into the input;
// for proof files it is a 1-based line number instead.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position(position) {}
  std::size_t position;
};

// A path does not address the kind of node an operation needs: out of range,
// a literal where an oconnective is required, or a nested pair given to nca.
struct PathError : Error {
  using Error::Error;
};

// Precondition violations outside of rule application: rank mismatches,
// missing atoms or ranks, non-classical input to formula-only operations,
// invalid pins, and the like.
struct DomainError : Error {
  using Error::Error;
};

// A rule application does not fit: schema mismatch, violated side condition,
// fresh-ID collision, or an ill-formed result. The message names the reason.
struct RuleError : Error {
  using Error::Error;
};

// An enumeration cap (atom or cluster count) was exceeded.
struct CapExceeded : Error {
  using Error::Error;
};

// An internal invariant failed. The synthesis procedure treats a blocked
// prescribed rewrite or a non-decreasing termination measure as this, never
// as something to paper over.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace rifp
