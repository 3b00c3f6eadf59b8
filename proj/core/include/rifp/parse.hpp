#pragma once

#include <string>
#include <string_view>

#include "rifp/cirquent.hpp"

namespace rifp {

// Grammar:
//   cirquent := literal | '(' cirquent op cirquent ')'
//   literal  := ['~'] atom            atom: [a-z][a-z0-9_]*
//   op       := '&[' nat ':' nat ']' | '|[' nat ':' nat ']'   (cluster:rank)
// Whitespace between tokens is ignored. Only grammar errors are rejected
// here; homogeneity is validate()'s job.
Cirquent parse_cirquent(std::string_view text);

// Canonical form: fully parenthesized, single spaces around op tokens,
// '~' directly in front of negated atoms.
std::string render(const Cirquent& c);

}  // namespace rifp
