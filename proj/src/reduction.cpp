#include "atccs/reduction.hpp"

#include <algorithm>
#include <map>

namespace atccs {

bool operator==(const Configuration& a, const Configuration& b) {
    return a.state == b.state && equal(a.proc, b.proc);
}

int compare(const Configuration& a, const Configuration& b) {
    if (int c = compare(a.proc, b.proc)) return c;
    if (a.state == b.state) return 0;
    return a.state < b.state ? -1 : 1;
}

std::size_t hashConfig(const Configuration& c) { return c.proc->hash * 31 + c.state.hash(); }

std::string print(const Configuration& c) { return print(c.proc) + " ; " + c.state.str(); }

// ------------------------------------------------------------ ongoing blocks

namespace {

OngoingStep ostep(const char* rule, Ongoing next) { return {rule, {rule}, std::move(next)}; }

Log appended(const Log& log, Action a) {
    Log out = log;
    out.push_back(std::move(a));
    return out;
}

}  // namespace

std::vector<OngoingStep> stepOngoing(const Ongoing& a) {
    std::vector<OngoingStep> out;
    if (a->kind == OngoingKind::Running) {
        const Expr& e = a->expr;
        switch (e->kind) {
            case ExprKind::End:
            case ExprKind::Retry:
                break;
            case ExprKind::Prefix:
                if (e->act.isRead()) {
                    Multiset need = readSet(a->log);
                    need.add(e->act.chan);
                    if (need.subsetOf(a->init))
                        out.push_back(ostep("ARdOk", mkRunning(e->left, a->init, appended(a->log, e->act))));
                    else
                        out.push_back(ostep("ARdF", mkRunning(mkRetry(), a->init, a->log)));
                } else {
                    out.push_back(ostep("AWr", mkRunning(e->left, a->init, appended(a->log, e->act))));
                }
                break;
            case ExprKind::OrElse:
                out.push_back(ostep("AOI", mkOngoingOrElse(mkRunning(e->left, a->init, a->log),
                                                           mkRunning(e->right, a->init, a->log))));
                break;
        }
        return out;
    }
    const Ongoing& l = a->left;
    if (l->isTerminal()) {
        if (l->expr->kind == ExprKind::Retry)
            out.push_back(ostep("AOF", a->right));
        else
            out.push_back(ostep("AOE", l));
    }
    for (auto& s : stepOngoing(l)) {
        s.derivation.insert(s.derivation.begin(), "AOL");
        out.push_back({"AOL", std::move(s.derivation), mkOngoingOrElse(s.next, a->right)});
    }
    for (auto& s : stepOngoing(a->right)) {
        s.derivation.insert(s.derivation.begin(), "AOR");
        out.push_back({"AOR", std::move(s.derivation), mkOngoingOrElse(l, s.next)});
    }
    return out;
}

// ------------------------------------------------------------ process rules

namespace {

void steps(const Proc& p, const State& s, std::vector<Step>& out);

void push(std::vector<Step>& out, const char* rule, Proc next, State st) {
    out.push_back({rule, {rule}, {std::move(next), std::move(st)}});
}

// Wraps the steps of a sub-derivation under `rule`, rebuilding the residual.
template <class Rebuild>
void wrap(std::vector<Step>& out, const char* rule, std::vector<Step>&& inner, Rebuild rebuild) {
    for (auto& st : inner) {
        st.derivation.insert(st.derivation.begin(), rule);
        out.push_back({rule, std::move(st.derivation), rebuild(st.next)});
    }
}

// The single name that `after` gained over `before`, if that is the only change.
bool singleOutput(const State& before, const State& after, Name& a) {
    if (after.size() != before.size() + 1) return false;
    Multiset gained = after - before;
    if (gained.size() != 1) return false;
    a = gained.entries()[0].first;
    return true;
}

// `sent` holds the steps of the sending side from σ.
void comSteps(const std::vector<Step>& sent, const Proc& receiver, bool senderLeft, const State& s,
              std::vector<Step>& out) {
    std::map<Name, std::vector<Step>> received;
    for (const auto& snd : sent) {
        Name a;
        if (!singleOutput(s, snd.next.state, a)) continue;
        auto it = received.find(a);
        if (it == received.end()) {
            std::vector<Step> rs;
            steps(receiver, snd.next.state, rs);
            it = received.emplace(a, std::move(rs)).first;
        }
        for (const auto& rcv : it->second) {
            if (!(rcv.next.state == s)) continue;
            std::vector<std::string> d{"com"};
            d.insert(d.end(), snd.derivation.begin(), snd.derivation.end());
            d.insert(d.end(), rcv.derivation.begin(), rcv.derivation.end());
            Proc np = senderLeft ? mkPar(snd.next.proc, rcv.next.proc) : mkPar(rcv.next.proc, snd.next.proc);
            out.push_back({"com", std::move(d), {np, s}});
        }
    }
}

void choiceSteps(const Proc& p, const State& s, std::vector<Step>& out) {
    const Branch& b = p->branches.front();
    if (b.pol == Polarity::Out) {
        State t = s;
        t.add(b.chan);
        push(out, "c-out", b.cont, std::move(t));
        return;
    }
    if (s.count(b.chan) > 0) {
        State t = s;
        t.remove(b.chan);
        push(out, "c-inp", b.cont, std::move(t));
        return;
    }
    if (p->branches.size() == 1) return;
    std::vector<Branch> rest(p->branches.begin() + 1, p->branches.end());
    std::vector<Step> inner;
    choiceSteps(mkChoice(std::move(rest)), s, inner);
    for (auto& st : inner) {
        st.derivation.insert(st.derivation.begin(), "c-pass");
        out.push_back({"c-pass", std::move(st.derivation), std::move(st.next)});
    }
}

void steps(const Proc& p, const State& s, std::vector<Step>& out) {
    switch (p->kind) {
        case ProcKind::Nil:
            return;
        case ProcKind::Output: {
            State t = s;
            t.add(p->name);
            push(out, "out", mkNil(), std::move(t));
            return;
        }
        case ProcKind::Input:
            if (s.count(p->name) > 0) {
                State t = s;
                t.remove(p->name);
                push(out, "in", p->left, std::move(t));
            }
            return;
        case ProcKind::Repl:
            if (s.count(p->name) > 0) {
                State t = s;
                t.remove(p->name);
                push(out, "rep", mkPar(p->left, mkRepl(p->name, p->left, p->count + 1)), std::move(t));
            }
            return;
        case ProcKind::Par: {
            const Proc &l = p->left, &r = p->right;
            std::vector<Step> ls, rs;
            steps(l, s, ls);
            steps(r, s, rs);
            comSteps(ls, r, true, s, out);
            comSteps(rs, l, false, s, out);
            wrap(out, "parL", std::move(ls), [&](const Configuration& c) {
                return Configuration{mkPar(c.proc, r), c.state};
            });
            wrap(out, "parR", std::move(rs), [&](const Configuration& c) {
                return Configuration{mkPar(l, c.proc), c.state};
            });
            return;
        }
        case ProcKind::Hide: {
            // The hidden name is local: an outer occurrence of the same name in
            // σ belongs to a different channel, so it is set aside while the
            // body runs against its own count.
            const Name& a = p->name;
            int outer = s.count(a);
            State inner = s;
            inner.set(a, p->count);
            std::vector<Step> bs;
            steps(p->left, inner, bs);
            for (auto& st : bs) {
                int m = st.next.state.count(a);
                State t = st.next.state;
                t.set(a, outer);
                st.derivation.insert(st.derivation.begin(), "hid");
                out.push_back({"hid", std::move(st.derivation), {mkHide(st.next.proc, a, m), std::move(t)}});
            }
            return;
        }
        case ProcKind::Atomic:
            push(out, "atSt", mkOngoing(mkRunning(p->expr, s, {}), p->expr), s);
            return;
        case ProcKind::Ongoing: {
            const Ongoing& a = p->ongoing;
            if (a->isTerminal()) {
                if (a->expr->kind == ExprKind::Retry) {
                    push(out, "atRe", mkAtomic(p->expr), s);
                } else {
                    Multiset reads = readSet(a->log);
                    if (reads.subsetOf(s))
                        push(out, "atOk", mkOutputs(writeSet(a->log)), s - reads);
                    else
                        push(out, "atFail", mkAtomic(p->expr), s);
                }
                return;
            }
            for (auto& os : stepOngoing(a)) {
                std::vector<std::string> d{"atPass"};
                d.insert(d.end(), os.derivation.begin(), os.derivation.end());
                out.push_back({"atPass", std::move(d), {mkOngoing(os.next, p->expr), s}});
            }
            return;
        }
        case ProcKind::Choice:
            choiceSteps(p, s, out);
            return;
    }
}

}  // namespace

std::vector<Step> stepConfig(const Configuration& c) {
    std::vector<Step> out;
    steps(c.proc, c.state, out);
    std::stable_sort(out.begin(), out.end(), [](const Step& x, const Step& y) {
        if (x.rule != y.rule) return x.rule < y.rule;
        return compare(x.next, y.next) < 0;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Step& x, const Step& y) { return x.rule == y.rule && x.next == y.next; }),
              out.end());
    return out;
}

// ----------------------------------------------------------- canonical forms

namespace {

Log sortedLog(const Log& log) {
    Log out = log;
    std::stable_sort(out.begin(), out.end());
    return out;
}

Ongoing compact(const Ongoing& a, const Multiset& caps) {
    if (a->kind == OngoingKind::OrElse) return mkOngoingOrElse(compact(a->left, caps), compact(a->right, caps));
    if (a->expr->kind == ExprKind::Retry) return mkRunning(a->expr, {}, {});
    if (a->expr->kind == ExprKind::End) return mkRunning(a->expr, {}, sortedLog(a->log));
    State init;
    for (const auto& [n, k] : a->init.entries()) init.add(n, std::min(k, caps.count(n)));
    return mkRunning(a->expr, std::move(init), sortedLog(a->log));
}

void collectPar(const Proc& p, const CanonOptions& o, std::vector<Proc>& out);

// Par(Par(x1, x2), x3) and so on, the shape mkParList builds.
bool isLeftNested(const Proc& p) {
    Proc cur = p;
    while (cur->kind == ProcKind::Par) {
        if (cur->right->kind == ProcKind::Par) return false;
        cur = cur->left;
    }
    return true;
}

Proc canon(const Proc& p, const CanonOptions& o) {
    switch (p->kind) {
        case ProcKind::Nil:
        case ProcKind::Output:
        case ProcKind::Atomic:
            return p;
        // Unchanged subterms are returned as they are, so canonical terms
        // keep sharing structure with their predecessors.
        case ProcKind::Input: {
            Proc b = canon(p->left, o);
            return b == p->left ? p : mkInput(p->name, b);
        }
        case ProcKind::Repl: {
            Proc b = canon(p->left, o);
            int n = o.resetReplCounters ? 0 : p->count;
            return b == p->left && n == p->count ? p : mkRepl(p->name, b, n);
        }
        case ProcKind::Hide: {
            Proc b = canon(p->left, o);
            return b == p->left ? p : mkHide(b, p->name, p->count);
        }
        case ProcKind::Par: {
            if (!o.flattenPar) {
                Proc l = canon(p->left, o), r = canon(p->right, o);
                return l == p->left && r == p->right ? p : mkPar(l, r);
            }
            std::vector<Proc> parts;
            collectPar(p, o, parts);
            std::sort(parts.begin(), parts.end(), [](const Proc& x, const Proc& y) { return compare(x, y) < 0; });
            if (parts == parComponents(p) && isLeftNested(p)) return p;
            return mkParList(parts);
        }
        case ProcKind::Ongoing: {
            if (!o.compactBlocks) return p;
            Ongoing c = compact(p->ongoing, exprReads(p->expr));
            return compare(c, p->ongoing) == 0 ? p : mkOngoing(c, p->expr);
        }
        case ProcKind::Choice: {
            std::vector<Branch> bs;
            bool same = true;
            for (const auto& b : p->branches) {
                bs.push_back({b.pol, b.chan, canon(b.cont, o)});
                same = same && bs.back().cont == b.cont;
            }
            return same ? p : mkChoice(std::move(bs));
        }
    }
    return p;
}

void collectPar(const Proc& p, const CanonOptions& o, std::vector<Proc>& out) {
    if (p->kind == ProcKind::Par) {
        collectPar(p->left, o, out);
        collectPar(p->right, o, out);
        return;
    }
    Proc c = canon(p, o);
    if (c->kind == ProcKind::Nil) return;
    if (c->kind == ProcKind::Par) {
        for (const auto& q : parComponents(c)) out.push_back(q);
        return;
    }
    out.push_back(c);
}

}  // namespace

Proc canonicalize(const Proc& p, const CanonOptions& opts) { return canon(p, opts); }

}  // namespace atccs
