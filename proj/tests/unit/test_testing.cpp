#include "doctest.h"

#include "atccs/parser.hpp"
#include "atccs/testing.hpp"

using namespace atccs;

namespace {

Trace T(const char* s) { return parseTrace(s); }

AltVerdict alt(const char* p, const char* q) {
    Proc a = parse(p), b = parse(q);
    return altPreorder(a, b, defaultEnv({a, b}));
}

}  // namespace

TEST_CASE("trace syntax") {
    CHECK(print(T("")) == "eps");
    CHECK(print(T("a! {b,a} c")) == "a! {a,b} {c}");
    CHECK_THROWS(T("{a"));
    CHECK_THROWS(T("A!"));
}

TEST_CASE("cotrace") {
    CHECK(cotrace({}).empty());
    CHECK(cotrace(T("a!")) == T("{a}"));
    CHECK(cotrace(T("{a,b}")) == T("a! b!"));
}

TEST_CASE("rewrite preorder examples") {
    CHECK(tracePreorderRewrite(T("c! b!"), T("c! {a} b!")));
    CHECK(tracePreorderRewrite(T("{a} {b} {c}"), T("{a,b,c}")));
    CHECK(tracePreorderRewrite(T("{a,b,c}"), T("{a} {b} {c}")));
    CHECK(tracePreorderRewrite(T("a! {b}"), T("a! {b}")));
    CHECK(tracePreorderRewrite(T("b! {a}"), T("{a} b!")));
    CHECK_FALSE(tracePreorderRewrite(T("{a} b!"), T("b! {a}")));
    CHECK(tracePreorderRewrite(T("b!"), T("b! {a} a!")));
    CHECK_FALSE(tracePreorderRewrite(T("eps"), T("a!")));
    CHECK_FALSE(tracePreorderRewrite(T("a!"), T("{a}")));
}

TEST_CASE("observers") {
    CHECK(print(observer({})) == "w!");
    CHECK(print(observer(T("a! {b}"))) == "a?.(b! | w!)");
    CHECK(print(canonicalize(observer(T("{a,b}")))) == "a! | b! | w!");
}

TEST_CASE("observer preorder examples") {
    CHECK(tracePreorderObserver(T("{a}"), T("{a} a! {a}")));
    CHECK(tracePreorderRewrite(T("{a}"), T("{a} a! {a}")));
    CHECK_FALSE(tracePreorderObserver(T("a!"), T("{a}")));
    CHECK(tracePreorderObserver(T("eps"), T("{a} {b}")));
    CHECK(tracePreorderRewrite(T("eps"), T("{a} {b}")));
}

TEST_CASE("both decision procedures agree on short traces") {
    std::vector<Label> alphabet{Label::out("a"), Label::out("b"), Label::block(Multiset{"a"}),
                                Label::block(Multiset{"b"}), Label::block(Multiset{"a", "b"})};
    std::vector<Trace> traces{{}};
    for (std::size_t i = 0; i < traces.size(); ++i)
        if (traces[i].size() < 2)
            for (const auto& l : alphabet) {
                Trace t = traces[i];
                t.push_back(l);
                traces.push_back(t);
            }
    for (const auto& s : traces)
        for (const auto& r : traces) {
            CAPTURE(print(r));
            CAPTURE(print(s));
            REQUIRE(tracePreorderRewrite(r, s) == tracePreorderObserver(r, s));
        }
}

TEST_CASE("may testing examples") {
    CHECK(mayPasses(parse("a!"), parse("a?.w!")).passes);
    CHECK(mayPasses(mkNil(), parse("w!")).passes);
    MayVerdict v = mayPasses(mkNil(), parse("a?.w!"));
    CHECK_FALSE(v.passes);
    CHECK_FALSE(v.truncated);
}

TEST_CASE("alternative preorder examples") {
    CHECK(alt("a?.b! | c!", "a?.b! | c!").kind == AltVerdict::Kind::Holds);
    CHECK(alt("a?.0", "0").kind == AltVerdict::Kind::Holds);
    AltVerdict f = alt("a!", "0");
    REQUIRE(f.kind == AltVerdict::Kind::Fails);
    REQUIRE(f.witness);
    CHECK(print(*f.witness) == "a!");
    CHECK(alt("atomic(a?.b?.c!.end)", "a?.b?.c!").kind == AltVerdict::Kind::Holds);
    CHECK(alt("a?.b?.c!", "atomic(a?.b?.c!.end)").kind == AltVerdict::Kind::Holds);
}

TEST_CASE("translation of normal forms") {
    CHECK(ccsTranslation(parseExpr("end"))->kind == ProcKind::Nil);
    CHECK(ccsTranslation(parseExpr("retry"))->kind == ProcKind::Nil);
    CHECK(print(ccsTranslation(parseExpr("a?.b!.end"))) == "a?.b!");
    // Read-free branches release their outputs in any order.
    CHECK(print(ccsTranslation(parseExpr("b!.c!.end"))) == "b! | c!");
    Proc two = ccsTranslation(parseExpr("a?.end orElse b?.c!.end"));
    REQUIRE(two->kind == ProcKind::Hide);
    CHECK(two->count == 1);
    CHECK(parComponents(two->left).size() == 2);
    CHECK_THROWS_AS(ccsTranslation(parseExpr("a?.end orElse a?.b?.end")), NotNormalForm);
}

TEST_CASE("translated summands are freely chosen") {
    // Both summands start with a; the second must stay reachable.
    Expr m = parseExpr("c?.c?.a?.end orElse a?.b!.a?.end");
    Proc c = ccsTranslation(m);
    StateUniverse env = defaultEnv({c, mkAtomic(m)});
    Lts lts(env, Bounds{});
    TraceSet ts = weakTraces(lts, lts.intern(c), 3);
    CHECK(ts.traces.count(parseTrace("a a b!")) == 1);
    CHECK(ts.traces.count(parseTrace("a c c")) == 1);
}
