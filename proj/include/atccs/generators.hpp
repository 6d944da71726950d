#pragma once

// Seeded random terms for property checks and the CLI's randomized verbs.

#include <cstdint>
#include <random>
#include <vector>

#include "atccs/encodings.hpp"
#include "atccs/term.hpp"

namespace atccs {

using Rng = std::mt19937_64;

struct ExprShape {
    int depth = 3;
    std::vector<Name> names{"a", "b", "c"};
};
Expr randomExpr(Rng& rng, const ExprShape& shape);
Action randomAction(Rng& rng, const std::vector<Name>& names);

struct ProcShape {
    int depth = 3;
    std::vector<Name> names{"a", "b", "c"};
    bool atomics = true;   // atomic blocks with expressions of depth <= 2
    bool hiding = false;
    bool replication = false;
    bool choice = false;
};
Proc randomProc(Rng& rng, const ProcShape& shape);

// An orElse of up to `maxBranches` random prefix chains, normalized.
Expr randomNormalForm(Rng& rng, int maxBranches, const std::vector<Name>& names);

// 1..maxBranches branches with continuations of depth <= 1 and no choice.
std::vector<Branch> randomChoice(Rng& rng, int maxBranches, const std::vector<Name>& names);
JoinSpec randomJoin(Rng& rng, int maxElements, const std::vector<Name>& names);

// A multiset over `names` with each count in [0, k].
State randomState(Rng& rng, const std::vector<Name>& names, int k);

}  // namespace atccs
