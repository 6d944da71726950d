#include "doctest.h"

#include "atccs/parser.hpp"
#include "atccs/term.hpp"

using namespace atccs;

TEST_CASE("parse maps the grammar onto the AST") {
    Proc p = parse("a!");
    CHECK(p->kind == ProcKind::Output);
    CHECK(p->name == "a");

    Proc q = parse("atomic(a?.end)");
    REQUIRE(q->kind == ProcKind::Atomic);
    CHECK(equal(q->expr, mkRead("a", mkEnd())));

    Proc h = parse("(a?.0 | a!) \\ a:0");
    CHECK(equal(h, mkHide(mkPar(mkInput("a", mkNil()), mkOutput("a")), "a", 0)));

    CHECK(parse("(b?.0) \\ b")->count == 0);
    CHECK(parse("0 # trailing comment\n")->kind == ProcKind::Nil);
}

TEST_CASE("parse rejects malformed input with a position") {
    for (const char* bad : {"a", "a?.", "(a!", "a! | ", "m?x.0", "(a!) \\ a:-1", "atomic(a?.end", "$k!",
                            "ongoing", "((a!) \\ a) \\ a", "a!.0 + b", "atomic(end) + a!.0"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse(bad), ParseError);
    }
    try {
        parse("a! |\n  ?");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 3);
    }
}

TEST_CASE("print gives canonical text") {
    CHECK(print(mkNil()) == "0");
    CHECK(print(mkOutput("a")) == "a!");
    CHECK(print(mkAtomic(mkOrElse(mkRead("t", mkEnd()), mkEnd()))) == "atomic(t?.end orElse end)");
    CHECK(print(parse("a?.0 + b!.c!")) == "a?.0 + b!.c!");
    CHECK(print(parse("*a?.b!")) == "*a?.b!");
}

TEST_CASE("print and parse round-trip") {
    for (const char* t : {"0", "a!", "a?.b?.0", "*a?.(b! | c!)", "a! | b! | c!", "a! | (b! | c!)",
                          "(a?.0 | a!) \\ a:2", "((a! | b?.0) \\ a) \\ b:1", "atomic(a?.b!.end orElse retry)",
                          "atomic((a?.end orElse b?.end) orElse end)", "a?.0 + b!.c! + d?.(e! | f!)",
                          "x?.(a?.0 + b?.0)", "(t! | atomic(t?.k!.end orElse q!.end)) \\ k"}) {
        CAPTURE(t);
        Proc p = parse(t);
        Proc q = parse(print(p));
        CHECK(equal(p, q));
    }
}

TEST_CASE("readSet and writeSet follow the inductive definitions") {
    CHECK(readSet({}).empty());
    CHECK(writeSet({}).empty());
    Log l1{Action::rd("a"), Action::wr("a")};
    CHECK(readSet(l1) == Multiset{"a"});
    CHECK(writeSet(l1) == Multiset{"a"});
    Log l2{Action::rd("a"), Action::rd("a"), Action::wr("b")};
    CHECK(readSet(l2) == Multiset{"a", "a"});
    CHECK(writeSet(l2) == Multiset{"b"});
}

TEST_CASE("applyEffect and logEffectEq") {
    CHECK(applyEffect(Multiset{"a"}, {Action::rd("a"), Action::wr("b")}) == Multiset{"b"});
    CHECK(applyEffect(Multiset{"a", "b"}, {}) == Multiset{"a", "b"});
    CHECK(applyEffect(Multiset{"a", "a"}, {Action::rd("a")}) == Multiset{"a"});
    CHECK_THROWS_AS(applyEffect(Multiset{}, {Action::rd("a")}), PreconditionViolated);

    CHECK(logEffectEq({Action::rd("a"), Action::wr("a")}, {}, Multiset{"a"}).equal);
    CHECK_FALSE(logEffectEq({Action::wr("a")}, {}, Multiset{}).equal);
    Log d{Action::rd("b"), Action::wr("c")};
    CHECK(logEffectEq(d, d, Multiset{"b"}).equal);
    EffectVerdict v = logEffectEq({Action::rd("a")}, {}, Multiset{});
    CHECK_FALSE(v.equal);
    CHECK_FALSE(v.reason.empty());
}

namespace {

std::vector<Multiset> smallMultisets() {
    std::vector<Multiset> out;
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b)
            for (int c = 0; c <= 3; ++c) {
                Multiset m;
                m.add("a", a);
                m.add("b", b);
                m.add("c", c);
                out.push_back(m);
            }
    return out;
}

}  // namespace

TEST_CASE("multiset difference is the least covering multiset") {
    auto all = smallMultisets();
    for (const auto& s : all)
        for (const auto& t : all) {
            Multiset d = s - t;
            REQUIRE(s.subsetOf(t + d));
            // Pointwise minimality: any covering e contains d.
            for (const auto& e : all)
                if (s.subsetOf(t + e)) REQUIRE(d.subsetOf(e));
        }
}

TEST_CASE("multiset invariants") {
    Multiset m;
    m.add("a", 2);
    CHECK(m.remove("a", 2));
    CHECK(m.empty());
    CHECK(m.entries().empty());
    CHECK_FALSE(m.remove("a"));
    Multiset x{"b", "a", "b"};
    CHECK(x.str() == "{a,b,b}");
    CHECK(x.size() == 3);
}

TEST_CASE("readSet is a homomorphism and applyEffect is monotone") {
    std::vector<Log> logs{{}, {Action::rd("a")}, {Action::wr("b"), Action::rd("a")}, {Action::rd("b"), Action::rd("b")}};
    for (const auto& d1 : logs)
        for (const auto& d2 : logs) {
            Log cat = d1;
            cat.insert(cat.end(), d2.begin(), d2.end());
            CHECK(readSet(cat) == readSet(d1) + readSet(d2));
            CHECK(writeSet(cat) == writeSet(d1) + writeSet(d2));
        }
    auto all = smallMultisets();
    for (const auto& d : logs)
        for (const auto& s : all) {
            if (!readSet(d).subsetOf(s)) continue;
            for (const auto& t : all)
                if (s.subsetOf(t)) REQUIRE(applyEffect(s, d).subsetOf(applyEffect(t, d)));
        }
}
