#include "atccs/encodings.hpp"

#include <algorithm>

namespace atccs {

Name FreshSupply::next(const std::string& stem) {
    Name n = "$" + stem + std::to_string(++counters_[stem]);
    issued_.insert(n);
    return n;
}

namespace {

void requireFresh(const Name& k, const std::vector<Proc>& conts) {
    for (const auto& c : conts)
        if (freeNames(c).count(k)) throw FreshNameClash("fresh name " + k + " occurs free in " + print(c));
}

Action actionOf(Polarity pol, const Name& a) { return pol == Polarity::In ? Action::rd(a) : Action::wr(a); }

// μ1. ... .μn.rest
Expr chain(const std::vector<std::pair<Polarity, Name>>& pattern, Expr rest) {
    for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) rest = mkPrefix(actionOf(it->first, it->second), rest);
    return rest;
}

Proc hideAll(Proc body, const std::vector<Name>& names) {
    for (const auto& n : names) body = mkHide(body, n, 0);
    return body;
}

}  // namespace

Proc encodeChoices(const Proc& p, FreshSupply& fresh) {
    switch (p->kind) {
        case ProcKind::Nil:
        case ProcKind::Output:
        case ProcKind::Atomic:
        case ProcKind::Ongoing:
            return p;
        case ProcKind::Input:
            return mkInput(p->name, encodeChoices(p->left, fresh));
        case ProcKind::Repl:
            return mkRepl(p->name, encodeChoices(p->left, fresh), p->count);
        case ProcKind::Par:
            return mkPar(encodeChoices(p->left, fresh), encodeChoices(p->right, fresh));
        case ProcKind::Hide:
            return mkHide(encodeChoices(p->left, fresh), p->name, p->count);
        case ProcKind::Choice:
            return encodeChoice(p->branches, fresh);
    }
    return p;
}

Proc encodeChoice(const std::vector<Branch>& branches, FreshSupply& fresh) {
    if (branches.empty()) throw PreconditionViolated("a choice needs at least one branch");
    std::vector<Proc> conts;
    for (const auto& b : branches) conts.push_back(encodeChoices(b.cont, fresh));
    std::vector<Name> ks;
    std::vector<Expr> alts;
    std::vector<Proc> parts;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        Name k = fresh.next("k");
        requireFresh(k, conts);
        ks.push_back(k);
        alts.push_back(mkPrefix(actionOf(branches[i].pol, branches[i].chan), mkWrite(k, mkEnd())));
    }
    parts.push_back(mkAtomic(mkOrElseChain(alts)));
    for (std::size_t i = 0; i < branches.size(); ++i) parts.push_back(mkInput(ks[i], conts[i]));
    return hideAll(mkParList(parts), ks);
}

Proc encodeJoin(const JoinSpec& spec, FreshSupply& fresh) {
    if (spec.pattern.empty()) throw PreconditionViolated("a join pattern needs at least one element");
    Proc cont = encodeChoices(spec.cont, fresh);
    if (!spec.replicated) {
        Name k = fresh.next("k");
        requireFresh(k, {cont});
        Proc body = mkPar(mkAtomic(chain(spec.pattern, mkWrite(k, mkEnd()))), mkInput(k, cont));
        return mkHide(body, k, 0);
    }
    Name r = fresh.next("r");
    Name k = fresh.next("k");
    requireFresh(r, {cont});
    requireFresh(k, {cont});
    Proc fire = mkRepl(r, mkAtomic(chain(spec.pattern, mkWrite(r, mkWrite(k, mkEnd())))));
    Proc body = mkParList({mkOutput(r), fire, mkRepl(k, cont)});
    return mkHide(mkHide(body, r, 0), k, 0);
}

Proc encodeJoinDefinition(const std::vector<JoinSpec>& patterns, FreshSupply& fresh) {
    if (patterns.size() < 2) throw PreconditionViolated("a join definition needs at least two patterns");
    std::vector<Proc> conts;
    std::vector<int> slot;  // pattern -> index into conts
    for (const auto& p : patterns) {
        if (p.pattern.empty()) throw PreconditionViolated("a join pattern needs at least one element");
        Proc c = encodeChoices(p.cont, fresh);
        auto it = std::find_if(conts.begin(), conts.end(), [&](const Proc& x) { return equal(x, c); });
        if (it == conts.end()) {
            slot.push_back(static_cast<int>(conts.size()));
            conts.push_back(c);
        } else {
            slot.push_back(static_cast<int>(it - conts.begin()));
        }
    }
    std::vector<Name> ks;
    for (std::size_t i = 0; i < conts.size(); ++i) {
        ks.push_back(fresh.next("k"));
        requireFresh(ks.back(), conts);
    }
    std::vector<Expr> alts;
    for (std::size_t i = 0; i < patterns.size(); ++i)
        alts.push_back(chain(patterns[i].pattern, mkWrite(ks[static_cast<std::size_t>(slot[i])], mkEnd())));
    std::vector<Proc> parts{mkAtomic(mkOrElseChain(alts))};
    for (std::size_t i = 0; i < conts.size(); ++i) parts.push_back(mkInput(ks[i], conts[i]));
    return hideAll(mkParList(parts), ks);
}

Name winName(int i) { return "win_" + std::to_string(i); }
Name looseName(int i) { return "loose_" + std::to_string(i); }

Proc leaderElection(int n) {
    if (n < 2) throw PreconditionViolated("leader election needs at least two participants");
    FreshSupply fresh;
    std::vector<Proc> parts{mkOutput("t")};
    for (int i = 1; i <= n; ++i) {
        Name k = fresh.next("k"), kl = fresh.next("k");
        Expr grab = mkOrElse(mkRead("t", mkWrite(k, mkEnd())), mkWrite(kl, mkEnd()));
        Proc body = mkParList({mkAtomic(grab), mkInput(k, mkPar(mkOutput(winName(i)), mkOutput("t"))),
                               mkInput(kl, mkOutput(looseName(i)))});
        parts.push_back(mkHide(mkHide(body, k, 0), kl, 0));
    }
    return mkParList(parts);
}

Proc leaderElectionChoice(int n) {
    if (n < 2) throw PreconditionViolated("leader election needs at least two participants");
    std::vector<Proc> parts{mkOutput("t")};
    for (int i = 1; i <= n; ++i)
        parts.push_back(mkChoice({{Polarity::In, "t", mkPar(mkOutput(winName(i)), mkOutput("t"))},
                                  {Polarity::Out, looseName(i), mkNil()}}));
    return mkParList(parts);
}

Name chopstickName(int i) { return "c" + std::to_string(((i % 4) + 4) % 4); }
Name eatName(int i) { return "e" + std::to_string(i); }
Name thinkName(int i) { return "t" + std::to_string(i); }

// atomic(c_{i-1}?.c_i?.end).e_i?.t_i?.(c_{i-1}! | c_i!), with the sequencing
// after the block expressed through a fresh trigger g.
Proc diningPhilosophers() {
    FreshSupply fresh;
    std::vector<Proc> parts;
    for (int i = 0; i < 4; ++i) {
        Name left = chopstickName(i - 1), right = chopstickName(i), g = fresh.next("g");
        Proc block = mkAtomic(mkRead(left, mkRead(right, mkWrite(g, mkEnd()))));
        Proc after = mkInput(eatName(i), mkInput(thinkName(i), mkPar(mkOutput(left), mkOutput(right))));
        parts.push_back(mkHide(mkPar(block, mkInput(g, after)), g, 0));
    }
    for (int i = 0; i < 4; ++i) parts.push_back(mkOutput(chopstickName(i)));
    Proc d = mkParList(parts);
    for (int i = 0; i < 4; ++i) d = mkHide(d, chopstickName(i), 0);
    return d;
}

}  // namespace atccs

namespace atccs {

namespace {

bool isCommit(const GraphEdge& e) {
    return std::find(e.derivation.begin(), e.derivation.end(), "atOk") != e.derivation.end();
}

// Output nodes of p on any of `names`, found anywhere below Par and Hide.
std::set<Name> pendingOutputs(const Proc& p, const std::set<Name>& names) {
    std::set<Name> out;
    std::vector<Proc> stack{p};
    while (!stack.empty()) {
        Proc q = stack.back();
        stack.pop_back();
        if (q->kind == ProcKind::Output && names.count(q->name)) out.insert(q->name);
        if (q->kind == ProcKind::Par || q->kind == ProcKind::Hide) {
            stack.push_back(q->left);
            if (q->right) stack.push_back(q->right);
        }
    }
    return out;
}

// Some configuration of g with state `target` whose term is bisimilar to `cont`.
bool reachesBisimilar(const ReachGraph& g, const State& target, const Proc& cont, const BisimBudget& budget,
                      std::string& why) {
    bool unknown = false;
    for (const auto& c : g.nodes) {
        if (!(c.state == target)) continue;
        BisimVerdict v = weakAsyncBisim(c.proc, cont, defaultEnv({c.proc, cont}), budget);
        if (v.bisimilar()) return true;
        unknown = unknown || v.kind == BisimVerdict::Kind::Unknown;
    }
    why = "no reduct over " + target.str() + (unknown ? " is provably" : " is") + " bisimilar to " + print(cont);
    return false;
}

Bounds encodingBounds() {
    Bounds b;
    b.maxNodes = 200000;
    return b;
}

}  // namespace

std::vector<EncodingCheck> checkChoiceEncoding(const std::vector<Branch>& branches, int k, const BisimBudget& budget) {
    Proc native = mkChoice(branches);
    FreshSupply fresh;
    Proc enc = encodeChoice(branches, fresh);
    // The outer hides bind the triggers, the last branch's outermost.
    std::vector<Name> trigger;
    for (Proc p = enc; trigger.size() < branches.size(); p = p->left) trigger.insert(trigger.begin(), p->name);
    std::set<Name> chans;
    for (const auto& b : branches) chans.insert(b.chan);
    std::vector<EncodingCheck> out;
    StateUniverse starts(chans, k);
    for (const auto& sigma : starts.states()) {
        EncodingCheck chk;
        chk.start = sigma;
        std::vector<Step> ref = stepConfig({native, sigma});
        chk.rule = ref.empty() ? "stuck" : ref.front().rule;
        ReachGraph g = explore({enc, sigma}, encodingBounds());
        if (g.truncated) {
            chk.detail = "exploration of the encoding was truncated";
            out.push_back(std::move(chk));
            continue;
        }
        chk.ok = true;
        for (const auto& e : g.edges) {
            if (!isCommit(e)) continue;
            std::set<Name> ks = pendingOutputs(g.nodes[static_cast<std::size_t>(e.to)].proc, fresh.issued());
            if (ref.empty()) {
                chk.ok = false;
                chk.detail = "the encoding commits although the choice is stuck";
                break;
            }
            bool matched = false;
            for (std::size_t j = 0; j < branches.size(); ++j)
                if (ks.count(trigger[j]) && equal(branches[j].cont, ref.front().next.proc))
                    matched = true;
            if (!matched) {
                chk.ok = false;
                chk.detail = "the encoding commits to a branch the choice does not select";
                break;
            }
        }
        if (chk.ok && !ref.empty())
            chk.ok = reachesBisimilar(g, ref.front().next.state, ref.front().next.proc, budget, chk.detail);
        out.push_back(std::move(chk));
    }
    return out;
}

std::vector<EncodingCheck> checkJoinEncoding(const JoinSpec& spec, const State& sigma, const BisimBudget& budget) {
    FreshSupply fresh;
    JoinSpec once = spec;
    once.replicated = false;
    Proc enc = encodeJoin(once, fresh);
    Log delta;
    for (const auto& [pol, a] : spec.pattern) delta.push_back(actionOf(pol, a));
    Multiset reads = readSet(delta), writes = writeSet(delta);
    std::vector<EncodingCheck> out;

    EncodingCheck fire;
    fire.rule = "j-inp";
    fire.start = sigma + reads;
    ReachGraph g = explore({enc, fire.start}, encodingBounds());
    if (g.truncated) {
        fire.detail = "exploration of the encoding was truncated";
    } else {
        fire.ok = reachesBisimilar(g, sigma + writes, spec.cont, budget, fire.detail);
    }
    out.push_back(std::move(fire));

    if (!reads.empty() && !reads.subsetOf(sigma)) {
        EncodingCheck stuck;
        stuck.rule = "stuck";
        stuck.start = sigma;
        ReachGraph h = explore({enc, sigma}, encodingBounds());
        stuck.ok = !h.truncated && std::none_of(h.edges.begin(), h.edges.end(), isCommit);
        if (!stuck.ok) stuck.detail = h.truncated ? "exploration of the encoding was truncated" : "the encoding commits without its reads";
        out.push_back(std::move(stuck));
    }
    return out;
}

}  // namespace atccs
