#pragma once

#include <string>
#include <string_view>

#include "specmc/system.hpp"

namespace specmc {

// Parse a complete system description:
//
//   globals {
//     x = 0
//     A[4] = [1, 2, 3, 4]
//     B[8]                      # zero-filled
//     alias k = A[4] = 5        # scalar at addr(A)+4, initialised to 5
//   }
//   process P1 {
//     locals { r1 = 0 }
//     code { x := 1 ; r1 := y ;; [r1 = 0] }
//   }
//
// Commands: `;` reorderable prefix, `;;` strict prefix, `|~|` choice,
// `if e then c [else c] fi`, `while e do c od`, `skip`, `fence`,
// `fetch(loc)`, `flush`, `[e]` guards.  Expressions use
// + - < <= = != && ! and in_cache(loc); `#A` is the declared length of A.
//
// Throws Diagnostic with line/column on syntax errors, duplicate
// declarations and undeclared names.  Seq/If sugar is normalized.
Program parse_program(std::string_view text);

// Parse a reachability predicate over final valuations.  Identifiers may
// be globals, `proc.reg`, or bare register names unique to one process.
ExprPtr parse_predicate(std::string_view text, const Program& prog);

}  // namespace specmc
