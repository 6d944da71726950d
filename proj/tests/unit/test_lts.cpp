#include <algorithm>

#include "doctest.h"

#include "atccs/lts.hpp"
#include "atccs/parser.hpp"

using namespace atccs;

namespace {

bool has(const std::vector<LabeledStep>& ss, const Label& l, const char* target) {
    Proc t = canonicalize(parse(target));
    return std::any_of(ss.begin(), ss.end(), [&](const LabeledStep& s) { return s.label == l && equal(s.next, t); });
}

StateUniverse envOf(std::initializer_list<Proc> ps) { return defaultEnv(std::vector<Proc>(ps)); }

}  // namespace

TEST_CASE("labels print canonically") {
    CHECK(Label::tau().str() == "tau");
    CHECK(Label::out("a").str() == "a!");
    CHECK(Label::block(Multiset{"b", "a"}).str() == "{a,b}");
}

TEST_CASE("labeled successors") {
    Proc out = parse("a!");
    auto s1 = labeledSuccessors(out, envOf({out}));
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].label == Label::out("a"));
    CHECK(s1[0].next->kind == ProcKind::Nil);

    Proc in = parse("a?.b!");
    auto s2 = labeledSuccessors(in, envOf({in}));
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].label == Label::block(Multiset{"a"}));

    Proc com = parse("a! | a?.0");
    CHECK(has(labeledSuccessors(com, envOf({com})), Label::tau(), "0 | 0"));
}

TEST_CASE("buildLts examples") {
    auto nil = buildLts(mkNil(), envOf({mkNil()}));
    CHECK(nil->size() == 1);
    CHECK(nil->edges().empty());

    Proc blk = parse("atomic(a?.end)");
    auto lts = buildLts(blk, envOf({blk}));
    int root = lts->intern(blk), zero = lts->intern(mkNil());
    const auto& weak = lts->weakSuccessors(root);
    CHECK(std::find(weak.begin(), weak.end(), std::pair<Label, int>{Label::block(Multiset{"a"}), zero}) != weak.end());

    Proc aa = parse("a?.a!");
    auto l2 = buildLts(aa, envOf({aa}));
    int r = l2->intern(aa), mid = l2->intern(parse("a!"));
    CHECK(l2->successors(r) == std::vector<std::pair<Label, int>>{{Label::block(Multiset{"a"}), mid}});
    CHECK(l2->successors(mid) == std::vector<std::pair<Label, int>>{{Label::out("a"), l2->intern(mkNil())}});
}

TEST_CASE("weak asynchronous bisimulation examples") {
    auto check = [](const char* p, const char* q, BisimVerdict::Kind k) {
        Proc a = parse(p), b = parse(q);
        BisimVerdict v = weakAsyncBisim(a, b, envOf({a, b}));
        CAPTURE(p);
        CAPTURE(q);
        CAPTURE(v.reason);
        CHECK(v.kind == k);
    };
    check("a?.a!", "0", BisimVerdict::Kind::Bisimilar);
    check("atomic(a?.a!.end)", "0", BisimVerdict::Kind::Bisimilar);
    check("atomic(a?.end)", "a?.0", BisimVerdict::Kind::Bisimilar);
    check("a!", "0", BisimVerdict::Kind::Distinguished);
    check("a?.b!", "0", BisimVerdict::Kind::Distinguished);
    check("a! | b!", "b! | a!", BisimVerdict::Kind::Bisimilar);
}

TEST_CASE("weak bisimulation examples") {
    Proc p = parse("b?.0");
    BisimVerdict same = weakBisim(p, p, envOf({p}));
    CHECK(same.bisimilar());
    CHECK_FALSE(same.relation.empty());

    Proc l = parse("(b?.0 | a!) \\ a:0"), r = parse("(b?.0) \\ a:1");
    CHECK(weakBisim(l, r, envOf({l, r})).bisimilar());

    Proc x = parse("a?.a!");
    BisimVerdict d = weakBisim(x, mkNil(), envOf({x}));
    REQUIRE(d.distinguished());
    REQUIRE(d.witness);
    CHECK(d.witness->label == Label::block(Multiset{"a"}));
}

TEST_CASE("witnesses replay") {
    Proc p = parse("a! | b?.c!"), q = parse("a! | b?.0");
    StateUniverse env = envOf({p, q});
    for (GameMode mode : {GameMode::Strong, GameMode::Weak, GameMode::WeakAsync}) {
        Lts lts(env, defaultGameBounds());
        BisimVerdict v = bisimulationGame(p, q, lts, mode, BisimBudget{});
        REQUIRE(v.distinguished());
        REQUIRE(v.witness);
        CHECK(replayWitness(*v.witness, lts, mode));
    }
}

TEST_CASE("budgets give Unknown rather than a wrong verdict") {
    Proc p = parse("*a?.(a! | a!)"), q = parse("*a?.(a! | a! | a!)");
    BisimBudget b;
    b.maxPairs = 20;
    BisimVerdict v = weakAsyncBisim(p, q, envOf({p, q}), b);
    CHECK(v.kind != BisimVerdict::Kind::Bisimilar);
}
