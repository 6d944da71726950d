#include "atccs/atomic.hpp"

#include <algorithm>

#include "atccs/reduction.hpp"

namespace atccs {

namespace {

Outcome evalFrom(const Expr& e, const State& s, Log& log) {
    switch (e->kind) {
        case ExprKind::End:
            return Outcome::commit(log);
        case ExprKind::Retry:
            return Outcome::abort();
        case ExprKind::Prefix: {
            if (e->act.isRead()) {
                Multiset need = readSet(log);
                need.add(e->act.chan);
                if (!need.subsetOf(s)) return Outcome::abort();
            }
            log.push_back(e->act);
            Outcome r = evalFrom(e->left, s, log);
            log.pop_back();
            return r;
        }
        case ExprKind::OrElse: {
            Outcome l = evalFrom(e->left, s, log);
            if (l.committed) return l;
            return evalFrom(e->right, s, log);
        }
    }
    return Outcome::abort();
}

}  // namespace

Outcome evalAtomic(const Expr& m, const State& s) {
    Log log;
    return evalFrom(m, s, log);
}

std::vector<Outcome> allOutcomes(const Expr& m, const State& s) {
    auto less = [](const Ongoing& a, const Ongoing& b) { return compare(a, b) < 0; };
    std::set<Ongoing, decltype(less)> seen(less);
    std::vector<Ongoing> stack{mkRunning(m, s, {})};
    std::vector<Outcome> out;
    while (!stack.empty()) {
        Ongoing a = stack.back();
        stack.pop_back();
        if (!seen.insert(a).second) continue;
        if (a->isTerminal()) {
            out.push_back(a->expr->kind == ExprKind::End ? Outcome::commit(a->log) : Outcome::abort());
            continue;
        }
        for (auto& st : stepOngoing(a)) stack.push_back(st.next);
    }
    return out;
}

// ------------------------------------------------------------ state universe

StateUniverse::StateUniverse(std::set<Name> names, int k) : names_(names.begin(), names.end()), k_(k) {
    if (k < 0) throw PreconditionViolated("state universe multiplicity must be nonnegative");
}

std::size_t StateUniverse::size() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < names_.size(); ++i) n *= static_cast<std::size_t>(k_ + 1);
    return n;
}

const std::vector<State>& StateUniverse::states() const {
    if (!cache_.empty()) return cache_;
    std::vector<int> counts(names_.size(), 0);
    while (true) {
        State s;
        for (std::size_t i = 0; i < names_.size(); ++i) s.add(names_[i], counts[i]);
        cache_.push_back(std::move(s));
        std::size_t i = names_.size();
        while (i > 0 && counts[i - 1] == k_) counts[--i] = 0;
        if (i == 0) break;
        ++counts[i - 1];
    }
    return cache_;
}

StateUniverse autoUniverse(const Expr& m, const Expr& n) {
    std::set<Name> names = exprNames(m);
    for (const auto& x : exprNames(n)) names.insert(x);
    return StateUniverse(names, std::max(maxReadMultiplicity(m), maxReadMultiplicity(n)));
}

bool atomicPreorder(const Expr& m, const Expr& n, const StateUniverse& u) {
    for (const auto& s : u.states()) {
        if (!evalAtomic(n, s).committed) continue;
        if (!evalAtomic(m, s).committed) return false;
    }
    return true;
}

EquivVerdict atomicEquiv(const Expr& m, const Expr& n, const StateUniverse& u) {
    for (const auto& s : u.states()) {
        Outcome a = evalAtomic(m, s), b = evalAtomic(n, s);
        if (!a.committed && !b.committed) continue;
        if (a.committed != b.committed)
            return {false, s, std::string(a.committed ? "first" : "second") + " commits, the other aborts"};
        EffectVerdict e = logEffectEq(a.log, b.log, s);
        if (!e.equal) return {false, s, e.reason};
    }
    return {true, std::nullopt, ""};
}

// --------------------------------------------------------------- normal form

namespace {

std::vector<Log> eliminateRedundant(std::vector<Log> branches) {
    std::vector<Log> kept;
    std::vector<Multiset> keptReads;
    for (auto& k : branches) {
        Multiset r = readSet(k);
        bool redundant = std::any_of(keptReads.begin(), keptReads.end(),
                                     [&](const Multiset& earlier) { return earlier.subsetOf(r); });
        if (redundant) continue;
        keptReads.push_back(r);
        kept.push_back(std::move(k));
    }
    return kept;
}

std::vector<Log> branchesOf(const Expr& e) {
    switch (e->kind) {
        case ExprKind::End:
            return {Log{}};
        case ExprKind::Retry:
            return {};
        case ExprKind::Prefix: {
            std::vector<Log> inner = branchesOf(e->left);
            for (auto& k : inner) k.insert(k.begin(), e->act);
            return inner;
        }
        case ExprKind::OrElse: {
            std::vector<Log> all = branchesOf(e->left);
            for (auto& k : branchesOf(e->right)) all.push_back(std::move(k));
            return eliminateRedundant(std::move(all));
        }
    }
    return {};
}

Expr chainOf(const Log& k) {
    Expr acc = mkEnd();
    for (auto it = k.rbegin(); it != k.rend(); ++it) acc = mkPrefix(*it, acc);
    return acc;
}

bool isChain(const Expr& e) {
    Expr cur = e;
    while (cur->kind == ExprKind::Prefix) cur = cur->left;
    return cur->kind == ExprKind::End;
}

void orElseLeaves(const Expr& e, std::vector<Expr>& out) {
    if (e->kind == ExprKind::OrElse) {
        orElseLeaves(e->left, out);
        orElseLeaves(e->right, out);
    } else {
        out.push_back(e);
    }
}

}  // namespace

Expr normalize(const Expr& m) {
    std::vector<Log> branches = branchesOf(m);
    if (branches.empty()) return mkRetry();
    std::vector<Expr> chains;
    for (const auto& k : branches) chains.push_back(chainOf(k));
    return mkOrElseChain(chains);
}

Log chainActions(const Expr& k) {
    Log out;
    Expr cur = k;
    while (cur->kind == ExprKind::Prefix) {
        out.push_back(cur->act);
        cur = cur->left;
    }
    if (cur->kind != ExprKind::End) throw NotNormalForm("not an end-terminated action sequence: " + print(k));
    return out;
}

std::vector<Expr> normalFormBranches(const Expr& m) {
    if (m->kind == ExprKind::Retry) return {};
    std::vector<Expr> leaves;
    orElseLeaves(m, leaves);
    return leaves;
}

bool isNormalForm(const Expr& m) {
    if (m->kind == ExprKind::Retry) return true;
    std::vector<Expr> leaves;
    orElseLeaves(m, leaves);
    std::vector<Multiset> reads;
    for (const auto& k : leaves) {
        if (!isChain(k)) return false;
        reads.push_back(exprReads(k));
    }
    for (std::size_t i = 0; i < reads.size(); ++i)
        for (std::size_t j = i + 1; j < reads.size(); ++j)
            if (reads[i].subsetOf(reads[j])) return false;
    return true;
}

}  // namespace atccs
