#pragma once

#include <string_view>

#include "istat/ideal.hpp"
#include "istat/index_set.hpp"

namespace istat::cli {

/// Set expressions:
///   empty | all | evens | odds | squares | ap(a,d) | powers(b) | residue(m,r)
///   | val(b,l) | val(b,lo,hi) | val(b,lo,inf) | blocks(L,U) | finite{1,5,10..20}
///   | union(S,S,...) | inter(S,S,...) | comp(S) | symdiff(S,S)
/// L and U are integer terms in i with + - * ^ and parentheses.
/// Throws ParseError with a byte offset into `text`.
IndexSet parse_set(std::string_view text);

IntExpr parse_int_expr(std::string_view text);

/// fin | density0 | summable | trace(<set>)
Ideal parse_ideal(std::string_view text);

}  // namespace istat::cli
