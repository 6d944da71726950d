#pragma once

// Evaluation of atomic expressions against explicit states, the atomic
// preorder and equivalence over finite state universes, and normal forms.

#include <optional>
#include <set>
#include <vector>

#include "atccs/term.hpp"

namespace atccs {

struct Outcome {
    bool committed = false;
    Log log;  // meaningful only when committed

    static Outcome commit(Log l) { return {true, std::move(l)}; }
    static Outcome abort() { return {false, {}}; }
};

// Left-first deterministic evaluation of [m]_{σ;ε}.
Outcome evalAtomic(const Expr& m, const State& s);

// Every outcome reachable through some interleaving of the ongoing rules.
std::vector<Outcome> allOutcomes(const Expr& m, const State& s);

// All multisets over `names` with each count in [0, k], in lexicographic
// order of count vectors (names sorted).
class StateUniverse {
public:
    StateUniverse(std::set<Name> names, int k);
    const std::vector<Name>& names() const { return names_; }
    int maxMultiplicity() const { return k_; }
    std::size_t size() const;
    const std::vector<State>& states() const;

private:
    std::vector<Name> names_;
    int k_;
    mutable std::vector<State> cache_;
};

// Names of both expressions, k = the larger maximal read multiplicity.
StateUniverse autoUniverse(const Expr& m, const Expr& n);

// m ⊒ n: at every state, n aborts or both commit.
bool atomicPreorder(const Expr& m, const Expr& n, const StateUniverse& u);

struct EquivVerdict {
    bool equivalent;
    std::optional<State> witness;
    std::string reason;
};
EquivVerdict atomicEquiv(const Expr& m, const Expr& n, const StateUniverse& u);

Expr normalize(const Expr& m);
bool isNormalForm(const Expr& m);

// Branches of a normal form, left to right; empty for retry.
std::vector<Expr> normalFormBranches(const Expr& m);
// Actions of an end-terminated prefix chain.
Log chainActions(const Expr& k);

}  // namespace atccs
