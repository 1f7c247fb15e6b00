#pragma once

#include <string>

#include "subsig/structure.hpp"

namespace subsig {

/// Parses a monotone structure formula and tabulates it on n components.
///
/// Grammar (whitespace insignificant):
///   expr   := term ("|" term)*
///   term   := factor ("&" factor)*
///   factor := var | "(" expr ")" | "k-of-n(" int ";" var ("," var)* ")"
///   var    := "x" int
///
/// "&" is the product, "|" the coproduct x amalg y = 1-(1-x)(1-y), and
/// "k-of-n(k; ...)" is 1 when at least k of the listed variables are 1.
/// The grammar admits no negation, so the result is always monotone with
/// phi(empty)=0 and phi(C)=1.
///
/// Throws ParseError (with offset) on bad syntax, variable indices
/// outside 1..n, or a k-of-n threshold outside 1..#variables;
/// CapabilityError when n exceeds the component cap.
StructureFunction parse_structure(const std::string& expr, int n);

}  // namespace subsig
