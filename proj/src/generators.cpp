#include "atccs/generators.hpp"

#include "atccs/atomic.hpp"

namespace atccs {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

const Name& pick(Rng& rng, const std::vector<Name>& names) {
    return names[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(names.size()) - 1))];
}

Expr chainOf(Rng& rng, const std::vector<Name>& names, int maxLen) {
    Expr e = mkEnd();
    for (int i = uniform(rng, 0, maxLen); i > 0; --i) e = mkPrefix(randomAction(rng, names), e);
    return e;
}

}  // namespace

Action randomAction(Rng& rng, const std::vector<Name>& names) {
    const Name& a = pick(rng, names);
    return uniform(rng, 0, 1) == 0 ? Action::rd(a) : Action::wr(a);
}

Expr randomExpr(Rng& rng, const ExprShape& shape) {
    int choice = shape.depth <= 0 ? uniform(rng, 0, 1) : uniform(rng, 0, 5);
    switch (choice) {
        case 0:
            return mkEnd();
        case 1:
            return mkRetry();
        case 2:
        case 3:
        case 4:
            return mkPrefix(randomAction(rng, shape.names), randomExpr(rng, {shape.depth - 1, shape.names}));
        default:
            return mkOrElse(randomExpr(rng, {shape.depth - 1, shape.names}), randomExpr(rng, {shape.depth - 1, shape.names}));
    }
}

Proc randomProc(Rng& rng, const ProcShape& shape) {
    if (shape.depth <= 0) return uniform(rng, 0, 2) == 0 ? mkNil() : mkOutput(pick(rng, shape.names));
    ProcShape sub = shape;
    sub.depth = shape.depth - 1;
    for (;;) {
        switch (uniform(rng, 0, 8)) {
            case 0:
                return mkNil();
            case 1:
                return mkOutput(pick(rng, shape.names));
            case 2:
            case 3:
                return mkInput(pick(rng, shape.names), randomProc(rng, sub));
            case 4:
            case 5:
                return mkPar(randomProc(rng, sub), randomProc(rng, sub));
            case 6:
                if (!shape.atomics) continue;
                return mkAtomic(randomExpr(rng, {std::min(2, shape.depth), shape.names}));
            case 7:
                if (shape.hiding) return mkHide(randomProc(rng, sub), pick(rng, shape.names), uniform(rng, 0, 1));
                if (shape.replication) return mkRepl(pick(rng, shape.names), randomProc(rng, sub));
                continue;
            default:
                if (!shape.choice) continue;
                return mkChoice(randomChoice(rng, 2, shape.names));
        }
    }
}

Expr randomNormalForm(Rng& rng, int maxBranches, const std::vector<Name>& names) {
    std::vector<Expr> chains;
    for (int i = uniform(rng, 1, maxBranches); i > 0; --i) chains.push_back(chainOf(rng, names, 3));
    return normalize(mkOrElseChain(chains));
}

std::vector<Branch> randomChoice(Rng& rng, int maxBranches, const std::vector<Name>& names) {
    ProcShape cont{1, names, false, false, false, false};
    std::vector<Branch> bs;
    for (int i = uniform(rng, 1, maxBranches); i > 0; --i)
        bs.push_back({uniform(rng, 0, 1) == 0 ? Polarity::In : Polarity::Out, pick(rng, names), randomProc(rng, cont)});
    return bs;
}

JoinSpec randomJoin(Rng& rng, int maxElements, const std::vector<Name>& names) {
    ProcShape cont{1, names, false, false, false, false};
    JoinSpec j;
    for (int i = uniform(rng, 1, maxElements); i > 0; --i)
        j.pattern.emplace_back(uniform(rng, 0, 2) == 0 ? Polarity::Out : Polarity::In, pick(rng, names));
    j.cont = randomProc(rng, cont);
    return j;
}

State randomState(Rng& rng, const std::vector<Name>& names, int k) {
    State s;
    for (const auto& n : names)
        if (int c = uniform(rng, 0, k); c > 0) s.add(n, c);
    return s;
}

}  // namespace atccs
