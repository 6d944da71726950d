#include "atccs/testing.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_set>

#include "atccs/parser.hpp"

namespace atccs {

std::string print(const Trace& s) {
    if (s.empty()) return "eps";
    std::string out;
    for (const auto& l : s) out += (out.empty() ? "" : " ") + l.str();
    return out;
}

Trace parseTrace(std::string_view text) {
    Trace out;
    std::istringstream in{std::string(text)};
    std::string tok;
    auto name = [](const std::string& n) {
        if (!isValidName(n)) throw ParseError("invalid name '" + n + "' in trace", 1, 1);
        return n;
    };
    while (in >> tok) {
        if (tok == "eps") continue;
        if (tok.front() == '{') {
            if (tok.back() != '}') throw ParseError("unterminated block '" + tok + "' in trace", 1, 1);
            Multiset m;
            std::string body = tok.substr(1, tok.size() - 2), part;
            std::istringstream parts(body);
            while (std::getline(parts, part, ',')) m.add(name(part));
            if (m.empty()) throw ParseError("empty block in trace", 1, 1);
            out.push_back(Label::block(m));
        } else if (tok.back() == '!') {
            out.push_back(Label::out(name(tok.substr(0, tok.size() - 1))));
        } else {
            out.push_back(Label::block(Multiset{name(tok)}));
        }
    }
    return out;
}

Trace cotrace(const Trace& s) {
    Trace out;
    for (const auto& l : s) {
        if (l.isOut()) {
            out.push_back(Label::block(l.names));
        } else {
            for (const auto& n : l.names.elements()) out.push_back(Label::out(n));
        }
    }
    return out;
}

Trace expandBlocks(const Trace& s) {
    Trace out;
    for (const auto& l : s) {
        if (l.isOut()) {
            out.push_back(l);
        } else {
            for (const auto& n : l.names.elements()) out.push_back(Label::block(Multiset{n}));
        }
    }
    return out;
}

namespace {

struct TraceHash {
    std::size_t operator()(const Trace& t) const {
        std::size_t h = t.size();
        for (const auto& l : t) h = h * 1000003 + l.names.hash() * 2 + (l.isOut() ? 1 : 0);
        return h;
    }
};

}  // namespace

// Deletion, postponement by one position and annihilation, applied to the
// expanded form; blocks and their singleton sequences are identified by the
// expansion itself.
std::set<Trace> traceDownSet(const Trace& s, std::size_t cap) {
    Trace start = expandBlocks(s);
    std::unordered_set<Trace, TraceHash> seen{start};
    std::deque<Trace> queue{start};
    auto visit = [&](Trace t) {
        if (seen.insert(t).second) {
            if (seen.size() > cap) throw ResourceExhausted("trace rewriting exceeded " + std::to_string(cap) + " traces");
            queue.push_back(std::move(t));
        }
    };
    while (!queue.empty()) {
        Trace t = std::move(queue.front());
        queue.pop_front();
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i].isOut()) continue;
            Trace del = t;
            del.erase(del.begin() + static_cast<std::ptrdiff_t>(i));
            visit(std::move(del));
            if (i + 1 < t.size()) {
                Trace swap = t;
                std::swap(swap[i], swap[i + 1]);
                visit(std::move(swap));
                if (t[i + 1].isOut() && t[i + 1].names == t[i].names) {
                    Trace ann = t;
                    ann.erase(ann.begin() + static_cast<std::ptrdiff_t>(i), ann.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                    visit(std::move(ann));
                }
            }
        }
    }
    return {seen.begin(), seen.end()};
}

bool tracePreorderRewrite(const Trace& smaller, const Trace& s, std::size_t cap) {
    Trace target = expandBlocks(smaller);
    Trace start = expandBlocks(s);
    // Rewriting never creates outputs and never lengthens a trace.
    if (target.size() > start.size()) return false;
    return traceDownSet(s, cap).count(target) > 0;
}

Proc observer(const Trace& s) {
    Proc acc = mkOutput(kSuccess);
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        if (it->isOut()) {
            acc = mkInput(it->outName(), acc);
        } else {
            acc = mkPar(mkOutputs(it->names), acc);
        }
    }
    return acc;
}

bool weakTraceThenSuccess(Lts& lts, int root, const Trace& labels) {
    std::set<int> cur{root};
    for (const auto& lbl : labels) {
        std::set<int> next;
        for (int x : cur) {
            const std::vector<std::pair<Label, int>>& ws = lts.weakSuccessors(x);
            for (const auto& [l, t] : ws)
                if (l == lbl) next.insert(t);
        }
        if (next.empty()) return false;
        cur = std::move(next);
    }
    Label success = Label::out(kSuccess);
    for (int x : cur) {
        const std::vector<std::pair<Label, int>>& ws = lts.weakSuccessors(x);
        if (std::any_of(ws.begin(), ws.end(), [&](const auto& e) { return e.first == success; })) return true;
    }
    return false;
}

bool tracePreorderObserver(const Trace& smaller, const Trace& s, const Bounds& b) {
    Proc o = observer(s);
    Lts lts(defaultEnv({o}), b);
    return weakTraceThenSuccess(lts, lts.intern(o), cotrace(smaller));
}

bool successEnabled(const Configuration& c) {
    if (c.state.count(kSuccess) > 0) return true;
    std::vector<Proc> stack{c.proc};
    while (!stack.empty()) {
        Proc p = stack.back();
        stack.pop_back();
        if (p->kind == ProcKind::Output && p->name == kSuccess) return true;
        if (p->kind == ProcKind::Par) {
            stack.push_back(p->left);
            stack.push_back(p->right);
        }
        if (p->kind == ProcKind::Hide && p->name != kSuccess) stack.push_back(p->left);
    }
    return false;
}

MayVerdict mayPasses(const Proc& p, const Proc& o, const Bounds& b) {
    CanonOptions co;
    co.resetReplCounters = b.maxReplUnfold < 0;
    MayVerdict v;
    Configuration c0{canonicalize(mkPar(p, o), co), {}};
    std::unordered_set<Configuration, ConfigHash> seen{c0};
    std::deque<Configuration> queue{c0};
    while (!queue.empty()) {
        Configuration c = std::move(queue.front());
        queue.pop_front();
        if (successEnabled(c)) {
            v.passes = true;
            break;
        }
        for (auto& st : stepConfig(c)) {
            Configuration n{canonicalize(st.next.proc, co), std::move(st.next.state)};
            bool over = false;
            if (b.maxMultiplicity >= 0)
                for (const auto& [name, k] : n.state.entries()) over = over || k > b.maxMultiplicity;
            if (!over && b.maxReplUnfold >= 0) {
                std::vector<Proc> stack{n.proc};
                while (!stack.empty() && !over) {
                    Proc q = stack.back();
                    stack.pop_back();
                    over = q->kind == ProcKind::Repl && q->count > b.maxReplUnfold;
                    if (q->left) stack.push_back(q->left);
                    if (q->right) stack.push_back(q->right);
                }
            }
            if (over) {
                v.truncated = true;
                continue;
            }
            if (!seen.insert(n).second) continue;
            if (seen.size() > b.maxNodes) {
                v.truncated = true;
                queue.clear();
                break;
            }
            queue.push_back(std::move(n));
        }
    }
    v.configurations = seen.size();
    return v;
}

std::string kindName(AltVerdict::Kind k) {
    switch (k) {
        case AltVerdict::Kind::Holds:
            return "holds";
        case AltVerdict::Kind::Fails:
            return "fails";
        case AltVerdict::Kind::Unknown:
            return "unknown";
    }
    return "";
}

TraceSet weakTraces(Lts& lts, int root, int maxLength) {
    TraceSet out;
    // Sets of states reached by each trace; traces with equal state sets
    // still differ as traces, so the search is over (trace, set) nodes.
    struct Node {
        Trace trace;
        std::set<int> states;
    };
    std::vector<Node> stack{{{}, {root}}};
    while (!stack.empty()) {
        Node n = std::move(stack.back());
        stack.pop_back();
        out.traces.insert(n.trace);
        std::map<Label, std::set<int>> next;
        for (int x : n.states) {
            for (int y : lts.tauClosure(x))
                if (lts.pruned(y)) out.truncated = true;
            const std::vector<std::pair<Label, int>>& ws = lts.weakSuccessors(x);
            for (const auto& [l, t] : ws)
                if (!l.isTau()) next[l].insert(t);
        }
        if (next.empty()) continue;
        if (static_cast<int>(n.trace.size()) >= maxLength) {
            out.complete = false;
            continue;
        }
        for (auto& [l, states] : next) {
            Trace t = n.trace;
            t.push_back(l);
            stack.push_back({std::move(t), std::move(states)});
        }
    }
    return out;
}

AltVerdict altPreorder(const Proc& p, const Proc& q, const StateUniverse& env, const TraceBounds& b) {
    AltVerdict v;
    try {
        Lts lp(env, b.lts), lq(env, b.lts);
        TraceSet ps = weakTraces(lp, lp.intern(p), b.maxLength);
        std::size_t longest = 0;
        for (const auto& s : ps.traces) longest = std::max(longest, expandBlocks(s).size());
        TraceSet qs = weakTraces(lq, lq.intern(q), static_cast<int>(longest));
        std::set<Trace> below;
        for (const auto& s : qs.traces) {
            Trace e = expandBlocks(s);
            if (e.size() <= longest) below.insert(std::move(e));
        }
        for (const auto& s : ps.traces) {
            ++v.tracesChecked;
            std::set<Trace> down = traceDownSet(s);
            bool matched = std::any_of(down.begin(), down.end(), [&](const Trace& t) { return below.count(t) > 0; });
            if (matched) continue;
            if (qs.truncated) {
                v.kind = AltVerdict::Kind::Unknown;
                v.reason = "no trace below " + print(s) + " found, but the second term's transition system was truncated";
                return v;
            }
            v.kind = AltVerdict::Kind::Fails;
            v.witness = s;
            return v;
        }
        if (ps.truncated) {
            v.kind = AltVerdict::Kind::Unknown;
            v.reason = "the first term's transition system was truncated";
        } else if (!ps.complete) {
            v.kind = AltVerdict::Kind::Unknown;
            v.reason = "traces longer than " + std::to_string(b.maxLength) + " actions were not examined";
        }
    } catch (const ResourceExhausted& e) {
        v.kind = AltVerdict::Kind::Unknown;
        v.reason = e.what();
    }
    return v;
}

// The sum of the translated branches is a free choice: any summand may be
// taken, whichever names are present.  The Choice node is preemptive, so the
// sum is built as an internal choice instead: every summand waits on a hidden
// name holding a single token.
Proc ccsTranslation(const Expr& m) {
    if (!isNormalForm(m)) throw NotNormalForm("not in normal form: " + print(m));
    std::vector<Proc> summands;
    for (const auto& k : normalFormBranches(m)) {
        Log log = chainActions(k);
        std::vector<Name> reads = readSet(log).elements();
        Proc body = mkOutputs(writeSet(log));
        for (std::size_t i = reads.size(); i-- > 0;) body = mkInput(reads[i], body);
        summands.push_back(body);
    }
    if (summands.empty()) return mkNil();
    if (summands.size() == 1) return summands.front();
    const Name pick = "$t";
    Proc acc = mkInput(pick, summands.front());
    for (std::size_t i = 1; i < summands.size(); ++i) acc = mkPar(acc, mkInput(pick, summands[i]));
    return mkHide(acc, pick, 1);
}

}  // namespace atccs
