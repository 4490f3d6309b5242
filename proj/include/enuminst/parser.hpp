#pragma once

#include <string_view>

#include "enuminst/terms.hpp"

namespace enuminst {

/// Parses the supported SMT-LIB subset: declare-sort (arity 0), declare-fun,
/// declare-const, assert with an optional top-level forall, check-sat.
/// Ground assertions and quantifier bodies are returned in clause form.
/// Throws ParseError; nested or existential quantifiers are reported as
/// ParseErrorKind::Unsupported.
Problem parse_problem(std::string_view text);

}  // namespace enuminst
