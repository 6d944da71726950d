#include <algorithm>

#include "atccs/encodings.hpp"
#include "atccs/generators.hpp"
#include "atccs/parser.hpp"
#include "doctest.h"

using namespace atccs;

namespace {

int countKind(const Proc& p, ProcKind k) {
    int n = p->kind == k ? 1 : 0;
    if (p->left) n += countKind(p->left, k);
    if (p->right) n += countKind(p->right, k);
    for (const auto& b : p->branches) n += countKind(b.cont, k);
    return n;
}

bool allOk(const std::vector<EncodingCheck>& cs) {
    return std::all_of(cs.begin(), cs.end(), [](const EncodingCheck& c) { return c.ok; });
}

// Pending outputs on `a` plus the count of a in the state.
int outputsOn(const Configuration& c, const Name& a) {
    int n = c.state.count(a);
    for (const auto& part : parComponents(c.proc))
        if (part->kind == ProcKind::Output && part->name == a) ++n;
    return n;
}

}  // namespace

TEST_CASE("fresh names are never reused") {
    FreshSupply fresh;
    CHECK(fresh.next("k") == "$k1");
    CHECK(fresh.next("k") == "$k2");
    CHECK(fresh.next("r") == "$r1");
    CHECK(fresh.issued().size() == 3);
    CHECK_FALSE(isValidName("$k1"));
}

TEST_CASE("choice encoding shape") {
    FreshSupply fresh;
    Proc c = parse("a?.b! + c!.0");
    REQUIRE(c->kind == ProcKind::Choice);
    Proc e = encodeChoice(c->branches, fresh);
    CHECK(countKind(e, ProcKind::Choice) == 0);
    CHECK(countKind(e, ProcKind::Atomic) == 1);
    CHECK(countKind(e, ProcKind::Hide) == 2);
    CHECK_THROWS_AS(encodeChoice({}, fresh), PreconditionViolated);
    // Nested choices inside continuations are encoded too.
    Proc nested = encodeChoices(parse("a?.(b?.0 + c?.0) + d!.0"), fresh);
    CHECK(countKind(nested, ProcKind::Choice) == 0);
    CHECK(countKind(nested, ProcKind::Atomic) == 2);
}

TEST_CASE("fresh names clashing with a continuation are rejected") {
    FreshSupply fresh;
    std::vector<Branch> bs{{Polarity::In, "a", mkOutput("$k1")}};
    CHECK_THROWS_AS(encodeChoice(bs, fresh), FreshNameClash);
}

TEST_CASE("choice encoding follows the native rules") {
    for (const char* text : {"a?.b! + c!.0", "a?.0 + a?.b!", "a!.0 + b?.c!", "a?.b! + b?.a! + c?.0"}) {
        Proc c = parse(text);
        REQUIRE(c->kind == ProcKind::Choice);
        CAPTURE(text);
        CHECK(allOk(checkChoiceEncoding(c->branches, 1)));
    }
}

TEST_CASE("choice encoding on random choices") {
    Rng rng(31);
    for (int i = 0; i < 15; ++i) {
        std::vector<Branch> bs = randomChoice(rng, 3, {"a", "b", "c"});
        CAPTURE(print(mkChoice(bs)));
        CHECK(allOk(checkChoiceEncoding(bs, 1)));
    }
}

TEST_CASE("join encoding fires only on the whole pattern") {
    JoinSpec j{{{Polarity::In, "a"}, {Polarity::In, "b"}}, mkOutput("c")};
    CHECK(allOk(checkJoinEncoding(j, State{})));
    CHECK(allOk(checkJoinEncoding(j, State{"a"})));
    FreshSupply fresh;
    Proc e = encodeJoin(j, fresh);
    ReachGraph g = explore({e, State{"a"}});
    CHECK(std::none_of(g.nodes.begin(), g.nodes.end(), [](const Configuration& c) { return outputsOn(c, "c") > 0; }));
    JoinSpec empty{{}, mkNil()};
    CHECK_THROWS_AS(encodeJoin(empty, fresh), PreconditionViolated);
}

TEST_CASE("join patterns with outputs") {
    JoinSpec j{{{Polarity::In, "a"}, {Polarity::Out, "d"}}, mkOutput("c")};
    CHECK(allOk(checkJoinEncoding(j, State{})));
    CHECK(allOk(checkJoinEncoding(j, State{"b"})));
}

TEST_CASE("replicated join fires once per match") {
    JoinSpec j{{{Polarity::In, "a"}, {Polarity::In, "b"}}, mkOutput("c"), true};
    FreshSupply fresh;
    Proc e = encodeJoin(j, fresh);
    CHECK(countKind(e, ProcKind::Repl) == 2);
    Bounds b;
    b.maxReplUnfold = -1;
    ReachGraph g = explore({e, State::fromEntries({{"a", 2}, {"b", 2}})}, b);
    int most = 0;
    for (const auto& c : g.nodes) most = std::max(most, outputsOn(c, "c"));
    CHECK(most == 2);
    for (const auto& c : g.nodes) CHECK(outputsOn(c, "c") + std::min(c.state.count("a"), c.state.count("b")) <= 2);
}

TEST_CASE("join definitions share triggers between equal continuations") {
    FreshSupply fresh;
    std::vector<JoinSpec> defs{{{{Polarity::In, "a"}}, mkOutput("c")},
                               {{{Polarity::In, "b"}}, mkOutput("c")},
                               {{{Polarity::In, "d"}}, mkOutput("e")}};
    Proc e = encodeJoinDefinition(defs, fresh);
    CHECK(countKind(e, ProcKind::Hide) == 2);
    CHECK(countKind(e, ProcKind::Atomic) == 1);
    CHECK_THROWS_AS(encodeJoinDefinition({defs.front()}, fresh), PreconditionViolated);
    // The leftmost matching pattern wins.
    ReachGraph g = explore({e, State{"a", "d"}});
    bool sawC = false, sawE = false;
    for (const auto& c : g.nodes) {
        sawC = sawC || outputsOn(c, "c") > 0;
        sawE = sawE || outputsOn(c, "e") > 0;
    }
    CHECK(sawC);
    CHECK_FALSE(sawE);
}

TEST_CASE("a private trigger nobody sends on is garbage") {
    Rng rng(32);
    for (int i = 0; i < 10; ++i) {
        Proc p = randomProc(rng, {2, {"a", "b"}, true, false, false, false});
        Proc q = randomProc(rng, {1, {"a", "b"}, true, false, false, false});
        Proc l = mkHide(mkPar(p, mkInput("k", q)), "k", 0);
        CAPTURE(print(l));
        CHECK(weakAsyncBisim(l, p, defaultEnv({l, p})).bisimilar());
    }
}

TEST_CASE("example systems") {
    CHECK_THROWS_AS(leaderElection(1), PreconditionViolated);
    Proc le = leaderElection(2);
    CHECK(countKind(le, ProcKind::Atomic) == 2);
    CHECK(freeNames(le) == std::set<Name>{"t", "win_1", "win_2", "loose_1", "loose_2"});
    Proc lc = leaderElectionChoice(3);
    CHECK(countKind(lc, ProcKind::Choice) == 3);
    Proc d = diningPhilosophers();
    CHECK(countKind(d, ProcKind::Atomic) == 4);
    for (int i = 0; i < 4; ++i) CHECK(freeNames(d).count(chopstickName(i)) == 0);
    CHECK(chopstickName(-1) == chopstickName(3));
}
