#include "atccs/term.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace atccs {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
std::size_t hashStr(const std::string& s) { return std::hash<std::string>{}(s); }

int cmpInt(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }
int cmpStr(const std::string& a, const std::string& b) {
    int c = a.compare(b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string displayName(const Name& n) { return isFreshName(n) ? n.substr(1) : n; }

}  // namespace

bool isValidName(std::string_view s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

// ------------------------------------------------------------------ Multiset

Multiset::Multiset(std::initializer_list<Name> names) {
    for (const auto& n : names) add(n);
}

Multiset Multiset::fromEntries(const std::vector<Entry>& es) {
    Multiset m;
    for (const auto& [n, k] : es) m.add(n, k);
    return m;
}

int Multiset::count(const Name& n) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, const Name& key) { return e.first < key; });
    return (it != entries_.end() && it->first == n) ? it->second : 0;
}

void Multiset::add(const Name& n, int k) {
    if (k <= 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, const Name& key) { return e.first < key; });
    if (it != entries_.end() && it->first == n)
        it->second += k;
    else
        entries_.insert(it, {n, k});
}

bool Multiset::remove(const Name& n, int k) {
    if (k <= 0) return true;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, const Name& key) { return e.first < key; });
    if (it == entries_.end() || it->first != n || it->second < k) return false;
    it->second -= k;
    if (it->second == 0) entries_.erase(it);
    return true;
}

void Multiset::set(const Name& n, int k) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, const Name& key) { return e.first < key; });
    bool present = it != entries_.end() && it->first == n;
    if (k <= 0) {
        if (present) entries_.erase(it);
    } else if (present) {
        it->second = k;
    } else {
        entries_.insert(it, {n, k});
    }
}

int Multiset::size() const {
    int s = 0;
    for (const auto& e : entries_) s += e.second;
    return s;
}

std::vector<Name> Multiset::elements() const {
    std::vector<Name> out;
    for (const auto& [n, k] : entries_)
        for (int i = 0; i < k; ++i) out.push_back(n);
    return out;
}

std::set<Name> Multiset::support() const {
    std::set<Name> s;
    for (const auto& e : entries_) s.insert(e.first);
    return s;
}

bool Multiset::subsetOf(const Multiset& o) const {
    for (const auto& [n, k] : entries_)
        if (o.count(n) < k) return false;
    return true;
}

Multiset Multiset::operator+(const Multiset& o) const {
    Multiset r = *this;
    for (const auto& [n, k] : o.entries_) r.add(n, k);
    return r;
}

Multiset Multiset::operator-(const Multiset& o) const {
    Multiset r;
    for (const auto& [n, k] : entries_) {
        int d = k - o.count(n);
        if (d > 0) r.entries_.push_back({n, d});
    }
    return r;
}

Multiset Multiset::restrictedTo(const std::set<Name>& keep) const {
    Multiset r;
    for (const auto& e : entries_)
        if (keep.count(e.first)) r.entries_.push_back(e);
    return r;
}

std::size_t Multiset::hash() const {
    std::size_t h = 0x51ed27;
    for (const auto& [n, k] : entries_) h = mix(mix(h, hashStr(n)), static_cast<std::size_t>(k));
    return h;
}

std::string Multiset::str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [n, k] : entries_)
        for (int i = 0; i < k; ++i) {
            if (!first) s += ",";
            s += displayName(n);
            first = false;
        }
    return s + "}";
}

// ----------------------------------------------------------------------- logs

Multiset readSet(const Log& log) {
    Multiset m;
    for (const auto& a : log)
        if (a.isRead()) m.add(a.chan);
    return m;
}

Multiset writeSet(const Log& log) {
    Multiset m;
    for (const auto& a : log)
        if (!a.isRead()) m.add(a.chan);
    return m;
}

State applyEffect(const State& s, const Log& log) {
    Multiset r = readSet(log);
    if (!r.subsetOf(s))
        throw PreconditionViolated("log reads " + r.str() + " which is not contained in state " + s.str());
    return (s - r) + writeSet(log);
}

EffectVerdict logEffectEq(const Log& d1, const Log& d2, const State& s) {
    Multiset r1 = readSet(d1), r2 = readSet(d2);
    if (!r1.subsetOf(s)) return {false, "first log reads " + r1.str() + " not available in " + s.str()};
    if (!r2.subsetOf(s)) return {false, "second log reads " + r2.str() + " not available in " + s.str()};
    State e1 = applyEffect(s, d1), e2 = applyEffect(s, d2);
    if (e1 == e2) return {true, ""};
    return {false, "effects differ: " + e1.str() + " vs " + e2.str()};
}

// ---------------------------------------------------------------- expressions

namespace {

Expr makeExpr(ExprKind k, Action act, Expr l, Expr r) {
    std::size_t h = mix(0xe1, static_cast<std::size_t>(k));
    if (k == ExprKind::Prefix) h = mix(mix(h, static_cast<std::size_t>(act.kind)), hashStr(act.chan));
    if (l) h = mix(h, l->hash);
    if (r) h = mix(h, r->hash);
    return std::make_shared<const ExprNode>(ExprNode{k, std::move(act), std::move(l), std::move(r), h});
}

}  // namespace

Expr mkEnd() {
    static const Expr e = makeExpr(ExprKind::End, {}, nullptr, nullptr);
    return e;
}

Expr mkRetry() {
    static const Expr e = makeExpr(ExprKind::Retry, {}, nullptr, nullptr);
    return e;
}

Expr mkPrefix(Action a, Expr rest) { return makeExpr(ExprKind::Prefix, std::move(a), std::move(rest), nullptr); }
Expr mkRead(const Name& a, Expr rest) { return mkPrefix(Action::rd(a), std::move(rest)); }
Expr mkWrite(const Name& a, Expr rest) { return mkPrefix(Action::wr(a), std::move(rest)); }
Expr mkOrElse(Expr l, Expr r) { return makeExpr(ExprKind::OrElse, {}, std::move(l), std::move(r)); }

Expr mkOrElseChain(const std::vector<Expr>& branches) {
    if (branches.empty()) throw PreconditionViolated("mkOrElseChain: empty branch list");
    Expr acc = branches.back();
    for (auto it = branches.rbegin() + 1; it != branches.rend(); ++it) acc = mkOrElse(*it, acc);
    return acc;
}

int compare(const Expr& a, const Expr& b) {
    if (a == b) return 0;
    if (int c = cmpInt(static_cast<int>(a->kind), static_cast<int>(b->kind))) return c;
    switch (a->kind) {
        case ExprKind::End:
        case ExprKind::Retry:
            return 0;
        case ExprKind::Prefix:
            if (int c = cmpInt(static_cast<int>(a->act.kind), static_cast<int>(b->act.kind))) return c;
            if (int c = cmpStr(a->act.chan, b->act.chan)) return c;
            return compare(a->left, b->left);
        case ExprKind::OrElse:
            if (int c = compare(a->left, b->left)) return c;
            return compare(a->right, b->right);
    }
    return 0;
}

bool equal(const Expr& a, const Expr& b) { return a == b || (a->hash == b->hash && compare(a, b) == 0); }

std::size_t exprSize(const Expr& e) {
    switch (e->kind) {
        case ExprKind::End:
        case ExprKind::Retry:
            return 1;
        case ExprKind::Prefix:
            return 1 + exprSize(e->left);
        case ExprKind::OrElse:
            return 1 + exprSize(e->left) + exprSize(e->right);
    }
    return 0;
}

int exprDepth(const Expr& e) {
    switch (e->kind) {
        case ExprKind::End:
        case ExprKind::Retry:
            return 0;
        case ExprKind::Prefix:
            return 1 + exprDepth(e->left);
        case ExprKind::OrElse:
            return 1 + std::max(exprDepth(e->left), exprDepth(e->right));
    }
    return 0;
}

namespace {

void collectActions(const Expr& e, bool reads, Multiset& out) {
    switch (e->kind) {
        case ExprKind::End:
        case ExprKind::Retry:
            return;
        case ExprKind::Prefix:
            if (e->act.isRead() == reads) out.add(e->act.chan);
            collectActions(e->left, reads, out);
            return;
        case ExprKind::OrElse:
            collectActions(e->left, reads, out);
            collectActions(e->right, reads, out);
            return;
    }
}

int maxReadsOnPath(const Expr& e, std::map<Name, int>& cur) {
    switch (e->kind) {
        case ExprKind::End:
        case ExprKind::Retry: {
            int m = 0;
            for (const auto& [n, k] : cur) m = std::max(m, k);
            return m;
        }
        case ExprKind::Prefix: {
            if (!e->act.isRead()) return maxReadsOnPath(e->left, cur);
            ++cur[e->act.chan];
            int r = maxReadsOnPath(e->left, cur);
            --cur[e->act.chan];
            return r;
        }
        case ExprKind::OrElse:
            return std::max(maxReadsOnPath(e->left, cur), maxReadsOnPath(e->right, cur));
    }
    return 0;
}

}  // namespace

Multiset exprReads(const Expr& e) {
    Multiset m;
    collectActions(e, true, m);
    return m;
}

Multiset exprWrites(const Expr& e) {
    Multiset m;
    collectActions(e, false, m);
    return m;
}

std::set<Name> exprNames(const Expr& e) {
    std::set<Name> s = exprReads(e).support();
    for (const auto& n : exprWrites(e).support()) s.insert(n);
    return s;
}

int maxReadMultiplicity(const Expr& e) {
    std::map<Name, int> cur;
    return maxReadsOnPath(e, cur);
}

// ------------------------------------------------------------ ongoing blocks

Ongoing mkRunning(Expr e, State init, Log log) {
    std::size_t h = mix(mix(0x0a, e->hash), init.hash());
    for (const auto& a : log) h = mix(mix(h, static_cast<std::size_t>(a.kind)), hashStr(a.chan));
    return std::make_shared<const OngoingNode>(
        OngoingNode{OngoingKind::Running, std::move(e), std::move(init), std::move(log), nullptr, nullptr, h});
}

Ongoing mkOngoingOrElse(Ongoing l, Ongoing r) {
    std::size_t h = mix(mix(0x0b, l->hash), r->hash);
    return std::make_shared<const OngoingNode>(
        OngoingNode{OngoingKind::OrElse, nullptr, {}, {}, std::move(l), std::move(r), h});
}

int compare(const Ongoing& a, const Ongoing& b) {
    if (a == b) return 0;
    if (int c = cmpInt(static_cast<int>(a->kind), static_cast<int>(b->kind))) return c;
    if (a->kind == OngoingKind::OrElse) {
        if (int c = compare(a->left, b->left)) return c;
        return compare(a->right, b->right);
    }
    if (int c = compare(a->expr, b->expr)) return c;
    if (a->init != b->init) return a->init < b->init ? -1 : 1;
    if (a->log != b->log) return a->log < b->log ? -1 : 1;
    return 0;
}

// ------------------------------------------------------------------ processes

namespace {

Proc makeProc(ProcNode n) {
    std::size_t h = mix(0x9f, static_cast<std::size_t>(n.kind));
    if (!n.name.empty()) h = mix(h, hashStr(n.name));
    h = mix(h, static_cast<std::size_t>(n.count));
    if (n.left) h = mix(h, n.left->hash);
    if (n.right) h = mix(h, n.right->hash);
    if (n.expr) h = mix(h, n.expr->hash);
    if (n.ongoing) h = mix(h, n.ongoing->hash);
    for (const auto& b : n.branches)
        h = mix(mix(mix(h, static_cast<std::size_t>(b.pol)), hashStr(b.chan)), b.cont->hash);
    n.hash = h;
    return std::make_shared<const ProcNode>(std::move(n));
}

}  // namespace

Proc mkNil() {
    static const Proc p = makeProc(ProcNode{ProcKind::Nil, {}, 0, nullptr, nullptr, nullptr, nullptr, {}, 0});
    return p;
}

Proc mkOutput(const Name& a) {
    return makeProc(ProcNode{ProcKind::Output, a, 0, nullptr, nullptr, nullptr, nullptr, {}, 0});
}

Proc mkInput(const Name& a, Proc body) {
    return makeProc(ProcNode{ProcKind::Input, a, 0, std::move(body), nullptr, nullptr, nullptr, {}, 0});
}

Proc mkRepl(const Name& a, Proc body, int fired) {
    return makeProc(ProcNode{ProcKind::Repl, a, fired, std::move(body), nullptr, nullptr, nullptr, {}, 0});
}

Proc mkPar(Proc l, Proc r) {
    return makeProc(ProcNode{ProcKind::Par, {}, 0, std::move(l), std::move(r), nullptr, nullptr, {}, 0});
}

Proc mkHide(Proc body, const Name& a, int n) {
    if (n < 0) throw PreconditionViolated("hide annotation must be nonnegative");
    return makeProc(ProcNode{ProcKind::Hide, a, n, std::move(body), nullptr, nullptr, nullptr, {}, 0});
}

Proc mkAtomic(Expr m) {
    return makeProc(ProcNode{ProcKind::Atomic, {}, 0, nullptr, nullptr, std::move(m), nullptr, {}, 0});
}

Proc mkOngoing(Ongoing a, Expr original) {
    return makeProc(
        ProcNode{ProcKind::Ongoing, {}, 0, nullptr, nullptr, std::move(original), std::move(a), {}, 0});
}

Proc mkChoice(std::vector<Branch> branches) {
    if (branches.empty()) throw PreconditionViolated("choice needs at least one branch");
    return makeProc(ProcNode{ProcKind::Choice, {}, 0, nullptr, nullptr, nullptr, nullptr, std::move(branches), 0});
}

Proc mkParList(const std::vector<Proc>& ps) {
    if (ps.empty()) return mkNil();
    Proc acc = ps.front();
    for (std::size_t i = 1; i < ps.size(); ++i) acc = mkPar(acc, ps[i]);
    return acc;
}

Proc mkOutputs(const Multiset& names) {
    std::vector<Proc> outs;
    for (const auto& n : names.elements()) outs.push_back(mkOutput(n));
    return mkParList(outs);
}

int compare(const Proc& a, const Proc& b) {
    if (a == b) return 0;
    if (int c = cmpInt(static_cast<int>(a->kind), static_cast<int>(b->kind))) return c;
    if (int c = cmpStr(a->name, b->name)) return c;
    if (int c = cmpInt(a->count, b->count)) return c;
    switch (a->kind) {
        case ProcKind::Nil:
        case ProcKind::Output:
            return 0;
        case ProcKind::Input:
        case ProcKind::Repl:
        case ProcKind::Hide:
            return compare(a->left, b->left);
        case ProcKind::Par:
            if (int c = compare(a->left, b->left)) return c;
            return compare(a->right, b->right);
        case ProcKind::Atomic:
            return compare(a->expr, b->expr);
        case ProcKind::Ongoing:
            if (int c = compare(a->expr, b->expr)) return c;
            return compare(a->ongoing, b->ongoing);
        case ProcKind::Choice: {
            if (int c = cmpInt(static_cast<long>(a->branches.size()), static_cast<long>(b->branches.size())))
                return c;
            for (std::size_t i = 0; i < a->branches.size(); ++i) {
                const auto &x = a->branches[i], &y = b->branches[i];
                if (int c = cmpInt(static_cast<int>(x.pol), static_cast<int>(y.pol))) return c;
                if (int c = cmpStr(x.chan, y.chan)) return c;
                if (int c = compare(x.cont, y.cont)) return c;
            }
            return 0;
        }
    }
    return 0;
}

bool equal(const Proc& a, const Proc& b) { return a == b || (a->hash == b->hash && compare(a, b) == 0); }

std::vector<Proc> parComponents(const Proc& p) {
    std::vector<Proc> out;
    std::vector<Proc> stack{p};
    while (!stack.empty()) {
        Proc q = stack.back();
        stack.pop_back();
        if (q->kind == ProcKind::Par) {
            stack.push_back(q->right);
            stack.push_back(q->left);
        } else {
            out.push_back(q);
        }
    }
    return out;
}

namespace {

void collectFree(const Proc& p, std::set<Name>& bound, std::set<Name>& out) {
    auto use = [&](const Name& n) {
        if (!bound.count(n)) out.insert(n);
    };
    switch (p->kind) {
        case ProcKind::Nil:
            return;
        case ProcKind::Output:
            use(p->name);
            return;
        case ProcKind::Input:
        case ProcKind::Repl:
            use(p->name);
            collectFree(p->left, bound, out);
            return;
        case ProcKind::Par:
            collectFree(p->left, bound, out);
            collectFree(p->right, bound, out);
            return;
        case ProcKind::Hide: {
            bool fresh = bound.insert(p->name).second;
            collectFree(p->left, bound, out);
            if (fresh) bound.erase(p->name);
            return;
        }
        case ProcKind::Atomic:
        case ProcKind::Ongoing:
            for (const auto& n : exprNames(p->expr)) use(n);
            return;
        case ProcKind::Choice:
            for (const auto& b : p->branches) {
                use(b.chan);
                collectFree(b.cont, bound, out);
            }
            return;
    }
}

}  // namespace

std::set<Name> freeNames(const Proc& p) {
    std::set<Name> bound, out;
    collectFree(p, bound, out);
    return out;
}

std::set<Name> hiddenNames(const Proc& p) {
    std::set<Name> out;
    std::vector<Proc> stack{p};
    while (!stack.empty()) {
        Proc q = stack.back();
        stack.pop_back();
        if (q->kind == ProcKind::Hide) out.insert(q->name);
        if (q->left) stack.push_back(q->left);
        if (q->right) stack.push_back(q->right);
        for (const auto& b : q->branches) stack.push_back(b.cont);
    }
    return out;
}

int procDepth(const Proc& p) {
    switch (p->kind) {
        case ProcKind::Nil:
        case ProcKind::Output:
        case ProcKind::Atomic:
        case ProcKind::Ongoing:
            return 1;
        case ProcKind::Input:
        case ProcKind::Repl:
        case ProcKind::Hide:
            return 1 + procDepth(p->left);
        case ProcKind::Par:
            return 1 + std::max(procDepth(p->left), procDepth(p->right));
        case ProcKind::Choice: {
            int d = 0;
            for (const auto& b : p->branches) d = std::max(d, procDepth(b.cont));
            return 1 + d;
        }
    }
    return 0;
}

namespace {

bool anyNode(const Proc& p, const std::function<bool(const Proc&)>& pred) {
    if (pred(p)) return true;
    if (p->left && anyNode(p->left, pred)) return true;
    if (p->right && anyNode(p->right, pred)) return true;
    for (const auto& b : p->branches)
        if (anyNode(b.cont, pred)) return true;
    return false;
}

}  // namespace

bool containsChoice(const Proc& p) {
    return anyNode(p, [](const Proc& q) { return q->kind == ProcKind::Choice; });
}
bool containsAtomic(const Proc& p) {
    return anyNode(p, [](const Proc& q) { return q->kind == ProcKind::Atomic || q->kind == ProcKind::Ongoing; });
}
bool containsRepl(const Proc& p) {
    return anyNode(p, [](const Proc& q) { return q->kind == ProcKind::Repl; });
}

// ------------------------------------------------------------------- printing

std::string print(const Action& a) { return (a.isRead() ? "rd " : "wr ") + displayName(a.chan); }

std::string print(const Log& log) {
    if (log.empty()) return "eps";
    std::string s;
    for (std::size_t i = 0; i < log.size(); ++i) {
        if (i) s += ".";
        s += print(log[i]);
    }
    return s;
}

std::string print(const Expr& e) {
    switch (e->kind) {
        case ExprKind::End:
            return "end";
        case ExprKind::Retry:
            return "retry";
        case ExprKind::Prefix: {
            std::string body = print(e->left);
            if (e->left->kind == ExprKind::OrElse) body = "(" + body + ")";
            return displayName(e->act.chan) + (e->act.isRead() ? "?." : "!.") + body;
        }
        case ExprKind::OrElse: {
            std::string l = print(e->left);
            if (e->left->kind == ExprKind::OrElse) l = "(" + l + ")";
            return l + " orElse " + print(e->right);
        }
    }
    return "";
}

std::string print(const Ongoing& a) {
    if (a->kind == OngoingKind::Running)
        return "[" + print(a->expr) + " | " + a->init.str() + " | " + print(a->log) + "]";
    std::string l = print(a->left);
    if (a->left->kind == OngoingKind::OrElse) l = "(" + l + ")";
    return l + " orElse " + print(a->right);
}

namespace {

// Context levels: 0 = operand of '|', 1 = operand of '+', 2 = prefix body.
bool isMultiChoice(const Proc& p) { return p->kind == ProcKind::Choice && p->branches.size() > 1; }

std::string printAt(const Proc& p, int level);

std::string printBranch(const Branch& b) {
    return displayName(b.chan) + (b.pol == Polarity::In ? "?." : "!.") + printAt(b.cont, 2);
}

std::string printAt(const Proc& p, int level) {
    switch (p->kind) {
        case ProcKind::Nil:
            return "0";
        case ProcKind::Output:
            return displayName(p->name) + "!";
        case ProcKind::Input:
            return displayName(p->name) + "?." + printAt(p->left, 2);
        case ProcKind::Repl: {
            std::string mark = p->count > 0 ? "*{" + std::to_string(p->count) + "}" : "*";
            return mark + displayName(p->name) + "?." + printAt(p->left, 2);
        }
        case ProcKind::Par: {
            std::string s = printAt(p->left, 0) + " | ";
            std::string r = printAt(p->right, 0);
            s += p->right->kind == ProcKind::Par ? "(" + r + ")" : r;
            return level > 0 ? "(" + s + ")" : s;
        }
        case ProcKind::Hide: {
            std::string body = printAt(p->left, 0);
            if (p->left->kind != ProcKind::Hide) body = "(" + body + ")";
            return body + " \\ " + displayName(p->name) + ":" + std::to_string(p->count);
        }
        case ProcKind::Atomic:
            return "atomic(" + print(p->expr) + ")";
        case ProcKind::Ongoing:
            return "atomic{" + print(p->ongoing) + "}(" + print(p->expr) + ")";
        case ProcKind::Choice: {
            std::string s;
            for (std::size_t i = 0; i < p->branches.size(); ++i) {
                if (i) s += " + ";
                s += printBranch(p->branches[i]);
            }
            return (level > 1 && isMultiChoice(p)) ? "(" + s + ")" : s;
        }
    }
    return "";
}

}  // namespace

std::string print(const Proc& p) { return printAt(p, 0); }

}  // namespace atccs
