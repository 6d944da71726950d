#include "atccs/generators.hpp"
#include "atccs/laws.hpp"
#include "atccs/parser.hpp"
#include "atccs/report.hpp"
#include "doctest.h"

using namespace atccs;

TEST_CASE("generators are deterministic in the seed") {
    Rng a(7), b(7);
    for (int i = 0; i < 20; ++i) {
        CHECK(equal(randomExpr(a, {}), randomExpr(b, {})));
        CHECK(equal(randomProc(a, {}), randomProc(b, {})));
    }
}

TEST_CASE("generated terms respect their shape") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        Expr e = randomExpr(rng, {2, {"a"}});
        CHECK(exprDepth(e) <= 2);
        for (const auto& n : freeNames(mkAtomic(e))) CHECK(n == "a");
        Proc p = randomProc(rng, {2, {"a", "b"}, false, false, false, false});
        for (const auto& n : freeNames(p)) CHECK((n == "a" || n == "b"));
        CHECK(print(p).find("atomic") == std::string::npos);
        State s = randomState(rng, {"a", "b"}, 2);
        CHECK(s.count("a") <= 2);
        CHECK(s.count("b") <= 2);
        CHECK(s.count("c") == 0);
        Expr nf = randomNormalForm(rng, 3, {"a", "b"});
        CHECK(isNormalForm(nf));
        CHECK(normalFormBranches(nf).size() <= 3);
        auto bs = randomChoice(rng, 3, {"a", "b"});
        CHECK(!bs.empty());
        CHECK(bs.size() <= 3);
        JoinSpec j = randomJoin(rng, 3, {"a", "b"});
        CHECK(!j.pattern.empty());
        CHECK(j.pattern.size() <= 3);
    }
}

TEST_CASE("every law holds on a few instances") {
    LawOptions o;
    o.instances = 8;
    for (const auto& law : lawNames()) {
        LawResult r = checkLaw(law, o);
        CAPTURE(law);
        CHECK(r.instances > 0);
        CHECK(r.ok());
        CHECK_FALSE(r.failure.has_value());
    }
}

TEST_CASE("a wrong law is caught") {
    LawOptions o;
    o.instances = 3;
    LawResult r = checkLaw("perturbed", o);
    CHECK_FALSE(r.ok());
    REQUIRE(r.failure.has_value());
    CHECK(r.failure->right == "retry");
    CHECK_THROWS_AS(checkLaw("nonsense", o), PreconditionViolated);
}

TEST_CASE("labels parse back from their printed form") {
    CHECK(parseLabel("tau").isTau());
    CHECK(parseLabel("a!") == Label::out("a"));
    CHECK(parseLabel("{a,b,a}") == Label::block(Multiset{"a", "a", "b"}));
    for (const Label& l : {Label::tau(), Label::out("x"), Label::block(Multiset{"b", "c"})}) CHECK(parseLabel(l.str()) == l);
    CHECK_THROWS(parseLabel("a?"));
    CHECK_THROWS(parseLabel("{a,}"));
    CHECK_THROWS(parseLabel("1!"));
}

TEST_CASE("terms serialize as trees") {
    Json j = toJson(parse("(a?.b! | atomic(c?.end orElse retry)) \\ c:1"));
    CHECK(j.at("kind") == "hide");
    CHECK(j.at("name") == "c");
    CHECK(j.at("count") == 1);
    Json e = toJson(parseExpr("a?.b!.end"));
    CHECK(e.at("kind") == "read");
    CHECK(e.at("next").at("kind") == "write");
}

TEST_CASE("graphs serialize with deadlocks") {
    ReachGraph g = explore({parse("a?.0 | b!"), State{}});
    Json j = toJson(g);
    CHECK(j.at("nodes").size() == g.nodes.size());
    CHECK(j.at("edges").size() == g.edges.size());
    CHECK(j.at("truncated") == false);
    std::string dot = toDot(g);
    CHECK(dot.rfind("digraph", 0) == 0);
}

TEST_CASE("a distinguishing witness replays") {
    Proc p = parse("a?.b!"), q = parse("a?.c!");
    StateUniverse env = defaultEnv({p, q});
    BisimVerdict v = weakAsyncBisim(p, q, env);
    REQUIRE(v.distinguished());
    REQUIRE(v.witness);
    Json w = toJson(*v.witness);
    {
        Lts lts(env, BisimBudget{}.lts);
        ReplayResult r = replayAttack(w, p, q, lts, GameMode::WeakAsync);
        CHECK_MESSAGE(r.ok, r.detail);
    }
    {
        Lts lts(env, BisimBudget{}.lts);
        CHECK_FALSE(replayAttack(w, q, p, lts, GameMode::WeakAsync).ok);
    }
    {
        Json bad = w;
        bad["label"] = "z!";
        Lts lts(env, BisimBudget{}.lts);
        CHECK_FALSE(replayAttack(bad, p, q, lts, GameMode::WeakAsync).ok);
    }
}

TEST_CASE("verdicts serialize") {
    Proc p = parse("a!"), q = parse("0");
    Json j = toJson(weakAsyncBisim(p, q, defaultEnv({p, q})));
    CHECK(j.at("verdict") == "distinguished");
    CHECK(j.contains("witness"));
    LawOptions o;
    o.instances = 2;
    Json l = toJson(checkLaw("idem", o));
    CHECK(l.at("law") == "idem");
}
