#include <algorithm>
#include <set>

#include "doctest.h"

#include "atccs/parser.hpp"
#include "atccs/reduction.hpp"

using namespace atccs;

namespace {

std::set<std::string> rules(const std::vector<Step>& steps) {
    std::set<std::string> out;
    for (const auto& s : steps) out.insert(s.rule);
    return out;
}

bool hasStep(const std::vector<Step>& steps, const std::string& rule, const std::string& proc, const State& st) {
    Proc p = parse(proc);
    return std::any_of(steps.begin(), steps.end(), [&](const Step& s) {
        return s.rule == rule && equal(canonicalize(s.next.proc), canonicalize(p)) && s.next.state == st;
    });
}

}  // namespace

TEST_CASE("process rules") {
    auto out = stepConfig({parse("a!"), {}});
    REQUIRE(out.size() == 1);
    CHECK(out[0].rule == "out");
    CHECK(out[0].next.proc->kind == ProcKind::Nil);
    CHECK(out[0].next.state == Multiset{"a"});

    auto in = stepConfig({parse("a?.0"), Multiset{"a"}});
    REQUIRE(in.size() == 1);
    CHECK(in[0].rule == "in");
    CHECK(in[0].next.state.empty());
    CHECK(stepConfig({parse("a?.0"), {}}).empty());
    CHECK(stepConfig({mkNil(), {}}).empty());

    auto rep = stepConfig({parse("*a?.b!"), Multiset{"a"}});
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].rule == "rep");
    CHECK(print(rep[0].next.proc) == "b! | *{1}a?.b!");
}

TEST_CASE("atSt captures the current state") {
    Expr m = parseExpr("a?.end");
    auto st = stepConfig({mkAtomic(m), Multiset{"a", "b"}});
    REQUIRE(st.size() == 1);
    CHECK(st[0].rule == "atSt");
    const Proc& o = st[0].next.proc;
    REQUIRE(o->kind == ProcKind::Ongoing);
    CHECK(o->ongoing->init == Multiset{"a", "b"});
    CHECK(equal(o->expr, m));
    CHECK(st[0].next.state == Multiset{"a", "b"});
}

TEST_CASE("ongoing rules") {
    auto ok = stepOngoing(mkRunning(parseExpr("a?.end"), Multiset{"a"}, {}));
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].rule == "ARdOk");
    CHECK(ok[0].next->log == Log{Action::rd("a")});
    CHECK(ok[0].next->expr->kind == ExprKind::End);

    auto fail = stepOngoing(mkRunning(parseExpr("a?.end"), {}, {}));
    REQUIRE(fail.size() == 1);
    CHECK(fail[0].rule == "ARdF");
    CHECK(fail[0].next->expr->kind == ExprKind::Retry);

    Ongoing b = mkRunning(parseExpr("b!.end"), {}, {});
    // The right branch may also advance on its own (AOR).
    auto aof = stepOngoing(mkOngoingOrElse(mkRunning(mkRetry(), {}, {}), b));
    REQUIRE(aof.size() == 2);
    CHECK(aof[0].rule == "AOF");
    CHECK(compare(aof[0].next, b) == 0);
    CHECK(aof[1].rule == "AOR");

    Ongoing done = mkRunning(mkEnd(), Multiset{"a"}, {Action::wr("c")});
    auto aoe = stepOngoing(mkOngoingOrElse(done, b));
    REQUIRE(aoe.size() == 2);
    CHECK(aoe[0].rule == "AOE");
    CHECK(compare(aoe[0].next, done) == 0);

    CHECK(stepOngoing(mkRunning(mkEnd(), {}, {})).empty());
}

TEST_CASE("commit, fail and restart") {
    // Block finished with log rd a . wr b . wr b, committing from {a, c}.
    Ongoing fin = mkRunning(mkEnd(), Multiset{"a"}, {Action::rd("a"), Action::wr("b"), Action::wr("b")});
    Expr orig = parseExpr("a?.b!.b!.end");
    auto commit = stepConfig({mkOngoing(fin, orig), Multiset{"a", "c"}});
    REQUIRE(commit.size() == 1);
    CHECK(commit[0].rule == "atOk");
    CHECK(commit[0].next.state == Multiset{"c"});
    CHECK(print(commit[0].next.proc) == "b! | b!");

    // The read set is no longer present: the block restarts.
    auto fail = stepConfig({mkOngoing(fin, orig), Multiset{"c"}});
    REQUIRE(fail.size() == 1);
    CHECK(fail[0].rule == "atFail");
    CHECK(equal(fail[0].next.proc, mkAtomic(orig)));

    auto re = stepConfig({mkOngoing(mkRunning(mkRetry(), {}, {}), orig), {}});
    REQUIRE(re.size() == 1);
    CHECK(re[0].rule == "atRe");
    CHECK(equal(re[0].next.proc, mkAtomic(orig)));
}

TEST_CASE("parallel composition and communication") {
    auto s = stepConfig({parse("a! | a?.0"), {}});
    CHECK(rules(s) == std::set<std::string>{"parL", "com"});
    CHECK(hasStep(s, "com", "0 | 0", {}));
    CHECK(hasStep(s, "parL", "0 | a?.0", Multiset{"a"}));

    auto t = stepConfig({parse("a?.0 | a!"), Multiset{"a"}});
    CHECK(rules(t) == std::set<std::string>{"parL", "parR", "com"});
    for (const auto& st : t)
        if (st.rule == "parR") CHECK(st.derivation == std::vector<std::string>{"parR", "out"});
}

TEST_CASE("hiding keeps local outputs out of the global state") {
    auto s = stepConfig({parse("(a! | b?.0) \\ a:0"), {}});
    REQUIRE(s.size() == 1);
    CHECK(s[0].rule == "hid");
    CHECK(s[0].next.state.empty());
    CHECK(s[0].next.proc->count == 1);

    // A global a is invisible inside the scope.
    CHECK(stepConfig({parse("(a?.0) \\ a:0"), Multiset{"a"}}).empty());
    auto in = stepConfig({parse("(a?.0) \\ a:1"), Multiset{"a"}});
    REQUIRE(in.size() == 1);
    CHECK(in[0].next.state == Multiset{"a"});
    CHECK(in[0].next.proc->count == 0);
}

TEST_CASE("choice rules") {
    auto ci = stepConfig({parse("a?.c! + b?.d!"), Multiset{"a", "b"}});
    REQUIRE(ci.size() == 1);
    CHECK(ci[0].rule == "c-inp");
    CHECK(print(ci[0].next.proc) == "c!");

    auto pass = stepConfig({parse("a?.c! + b?.d!"), Multiset{"b"}});
    REQUIRE(pass.size() == 1);
    CHECK(pass[0].rule == "c-pass");
    CHECK(print(pass[0].next.proc) == "d!");

    auto co = stepConfig({parse("a!.c! + b?.d!"), {}});
    REQUIRE(co.size() == 1);
    CHECK(co[0].rule == "c-out");
    CHECK(co[0].next.state == Multiset{"a"});

    CHECK(stepConfig({parse("a?.c! + b?.d!"), {}}).empty());
}

TEST_CASE("explore examples") {
    ReachGraph g = explore({parse("a! | a?.0"), {}});
    CHECK_FALSE(g.truncated);
    bool terminal = false;
    for (const auto& n : g.nodes)
        if (n.proc->kind == ProcKind::Nil && n.state.empty()) terminal = true;
    CHECK(terminal);
    REQUIRE(g.deadlocks.size() == 1);
    CHECK(g.nodes[static_cast<std::size_t>(g.deadlocks[0])].proc->kind == ProcKind::Nil);

    ReachGraph nil = explore({mkNil(), {}});
    CHECK(nil.nodes.size() == 1);
    CHECK(nil.edges.empty());
    CHECK(nil.deadlocks == std::vector<int>{0});

    ReachGraph cyc = explore({parse("atomic(retry)"), {}});
    CHECK(cyc.nodes.size() == 2);
    CHECK(cyc.deadlocks.empty());
    std::set<std::string> rs;
    for (const auto& e : cyc.edges) rs.insert(e.rule);
    CHECK(rs == std::set<std::string>{"atSt", "atRe"});
}

TEST_CASE("explore prunes at the bounds") {
    Bounds b;
    b.maxReplUnfold = 2;
    ReachGraph g = explore({parse("*a?.a! | a!"), {}}, b);
    CHECK(g.truncated);
    Bounds m;
    m.maxMultiplicity = 2;
    ReachGraph h = explore({parse("*a?.(b! | a!) | a!"), {}}, m);
    CHECK(h.truncated);
    for (const auto& n : h.nodes) CHECK(n.state.count("b") <= 2);

    Bounds cap;
    cap.maxNodes = 3;
    CHECK_THROWS_AS(explore({parse("a! | b! | c! | d!"), {}}, cap), ResourceExhausted);
}

TEST_CASE("parallel exploration matches sequential") {
    Proc p = parse("(atomic(a?.b!.end orElse c!.end) | a! | b?.a!) \\ c");
    Bounds seq, par;
    par.jobs = 4;
    ReachGraph g1 = explore({p, {}}, seq), g2 = explore({p, {}}, par);
    REQUIRE(g1.nodes.size() == g2.nodes.size());
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) CHECK(g1.nodes[i] == g2.nodes[i]);
    REQUIRE(g1.edges.size() == g2.edges.size());
    for (std::size_t i = 0; i < g1.edges.size(); ++i) {
        CHECK(g1.edges[i].from == g2.edges[i].from);
        CHECK(g1.edges[i].to == g2.edges[i].to);
        CHECK(g1.edges[i].rule == g2.edges[i].rule);
    }
}

TEST_CASE("edges replay and conserve the state") {
    Proc p = parse("(atomic(a?.b!.end orElse c!.end) | a! | b?.a! | c?.0) \\ c:1");
    Bounds b;
    b.canonical = false;
    ReachGraph g = explore({p, {}}, b);
    for (const auto& e : g.edges) {
        const auto& from = g.nodes[static_cast<std::size_t>(e.from)];
        const auto& to = g.nodes[static_cast<std::size_t>(e.to)];
        auto succ = stepConfig(from);
        bool found = std::any_of(succ.begin(), succ.end(),
                                 [&](const Step& s) { return s.rule == e.rule && s.next == to; });
        CHECK(found);
        bool scoped = std::find(e.derivation.begin(), e.derivation.end(), "hid") != e.derivation.end();
        const std::string& axiom = e.derivation.back();
        if (e.rule == "com") CHECK(from.state == to.state);
        if (!scoped && axiom == "out") {
            CHECK(from.state.subsetOf(to.state));
            CHECK(to.state.size() == from.state.size() + 1);
        }
        if (!scoped && (axiom == "in" || axiom == "rep")) {
            CHECK(to.state.subsetOf(from.state));
            CHECK(to.state.size() + 1 == from.state.size());
        }
        CHECK(to.state.count("c") == 0);
    }
}

TEST_CASE("scheduler is reproducible") {
    auto t = runScheduler({parse("a!"), {}}, 7, 5);
    REQUIRE(t.size() == 1);
    CHECK(t[0].rule == "out");
    CHECK(runScheduler({mkNil(), {}}, 1, 10).empty());

    Configuration c{parse("a! | a?.b! | b?.0 | atomic(a?.end orElse end)"), {}};
    auto r1 = runScheduler(c, 42, 50), r2 = runScheduler(c, 42, 50);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i].next == r2[i].next);
}
