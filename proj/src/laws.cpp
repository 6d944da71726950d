#include "atccs/laws.hpp"

#include <functional>

#include "atccs/generators.hpp"

namespace atccs {

const std::vector<std::string>& lawNames() {
    static const std::vector<std::string> names{"comm", "dist",  "ass",    "idem", "absRt1",
                                                "absRt2", "absEnd", "asy", "a-asy", "a-1"};
    return names;
}

namespace {

using Instance = std::vector<std::pair<Expr, Expr>>;

// Each law yields one or more equations per random instantiation.
Instance atomicInstance(const std::string& law, Rng& rng, const LawOptions& o) {
    ExprShape shape{o.depth, o.names};
    auto m = [&] { return randomExpr(rng, shape); };
    auto act = [&] { return randomAction(rng, o.names); };
    if (law == "comm") {
        Action x = act(), y = act();
        Expr e = m();
        return {{mkPrefix(x, mkPrefix(y, e)), mkPrefix(y, mkPrefix(x, e))}};
    }
    if (law == "dist") {
        Action x = act();
        Expr l = m(), r = m();
        return {{mkPrefix(x, mkOrElse(l, r)), mkOrElse(mkPrefix(x, l), mkPrefix(x, r))}};
    }
    if (law == "ass") {
        Expr a = m(), b = m(), c = m();
        return {{mkOrElse(a, mkOrElse(b, c)), mkOrElse(mkOrElse(a, b), c)}};
    }
    if (law == "idem") {
        Expr e = m();
        return {{mkOrElse(e, e), e}};
    }
    if (law == "absRt1") return {{mkPrefix(act(), mkRetry()), mkRetry()}};
    if (law == "absRt2") {
        Expr e = m();
        return {{mkOrElse(mkRetry(), e), e}, {e, mkOrElse(e, mkRetry())}};
    }
    if (law == "absEnd") return {{mkOrElse(mkEnd(), m()), mkEnd()}};
    if (law == "perturbed") return {{mkOrElse(mkEnd(), m()), mkRetry()}};
    throw PreconditionViolated("unknown law '" + law + "'");
}

std::vector<std::pair<Proc, Proc>> processInstances(const std::string& law, const LawOptions& o) {
    std::vector<std::pair<Proc, Proc>> out;
    for (const auto& a : o.names) {
        if (law == "asy") out.emplace_back(mkInput(a, mkOutput(a)), mkNil());
        if (law == "a-asy") out.emplace_back(mkAtomic(mkRead(a, mkWrite(a, mkEnd()))), mkNil());
        if (law == "a-1") out.emplace_back(mkAtomic(mkRead(a, mkEnd())), mkInput(a, mkNil()));
    }
    return out;
}

}  // namespace

LawResult checkLaw(const std::string& name, const LawOptions& opts) {
    if (opts.names.empty()) throw PreconditionViolated("laws need at least one name");
    LawResult r;
    r.name = name;
    if (name == "asy" || name == "a-asy" || name == "a-1") {
        r.atomic = false;
        for (const auto& [p, q] : processInstances(name, opts)) {
            ++r.instances;
            BisimVerdict v = weakAsyncBisim(p, q, defaultEnv({p, q}, opts.k), opts.budget);
            if (v.bisimilar()) {
                ++r.passed;
                continue;
            }
            if (v.kind == BisimVerdict::Kind::Unknown) ++r.unknown;
            if (!r.failure) r.failure = LawFailure{print(p), print(q), kindName(v.kind) + (v.reason.empty() ? "" : ": " + v.reason)};
        }
        return r;
    }
    Rng rng(opts.seed);
    StateUniverse u({opts.names.begin(), opts.names.end()}, opts.k);
    for (int i = 0; i < opts.instances; ++i) {
        for (const auto& [m, n] : atomicInstance(name, rng, opts)) {
            ++r.instances;
            EquivVerdict v = atomicEquiv(m, n, u);
            if (v.equivalent) {
                ++r.passed;
                continue;
            }
            if (!r.failure) {
                std::string at = v.witness ? " at " + v.witness->str() : "";
                r.failure = LawFailure{print(m), print(n), "not equivalent" + at + (v.reason.empty() ? "" : ": " + v.reason)};
            }
        }
    }
    return r;
}

}  // namespace atccs
