#pragma once

#include <string_view>

#include "atccs/term.hpp"

namespace atccs {

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int col);
    int line;
    int col;
};

// Concrete syntax:
//   proc ::= "0" | a! | a?.proc | *a?.proc | proc "|" proc | (proc)
//          | proc \ a[:n] | atomic(expr) | branch ("+" branch)+
//   branch ::= a?.proc | a!.proc
//   expr ::= end | retry | a?.expr | a!.expr | expr orElse expr | (expr)
// Prefix binds tighter than '+', which binds tighter than '|'; '\' is postfix
// on the closest primary.  orElse is right-associative.  '#' starts a comment.
Proc parse(std::string_view text);
Expr parseExpr(std::string_view text);

}  // namespace atccs
