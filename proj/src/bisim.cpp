#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "atccs/lts.hpp"

namespace atccs {

std::string kindName(BisimVerdict::Kind k) {
    switch (k) {
        case BisimVerdict::Kind::Bisimilar:
            return "bisimilar";
        case BisimVerdict::Kind::Distinguished:
            return "distinguished";
        case BisimVerdict::Kind::Unknown:
            return "unknown";
    }
    return "";
}

namespace {

// Labels are interned per game; pairs can hold millions of answers.
struct Answer {
    int pair;
    int label;
    int target;
};

struct Obligation {
    bool onLeft;
    int label;
    int target;
    std::vector<Answer> answers;
};

struct PairInfo {
    int left, right;
    bool capped = false;
    std::string capReason;
    std::vector<Obligation> obligations;
};

// Explores the pairs reachable through the game and computes the greatest
// relation satisfying every obligation.  Pairs cut off by a budget are
// treated once as related and once as unrelated; only verdicts on which both
// readings agree are reported as definite.
class Game {
public:
    Game(Lts& lts, GameMode mode, const BisimBudget& budget) : lts_(lts), mode_(mode), budget_(budget) {}

    BisimVerdict run(const Proc& p, const Proc& q) {
        int root = internPair(lts_.intern(p), lts_.intern(q));
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            if (pairs_[i].capped) continue;
            if (pairs_.size() > budget_.maxPairs) {
                pairs_[i].capped = true;
                pairs_[i].capReason = "pair budget of " + std::to_string(budget_.maxPairs) + " exhausted";
                continue;
            }
            expand(static_cast<int>(i));
        }

        bool anyCapped = std::any_of(pairs_.begin(), pairs_.end(), [](const PairInfo& x) { return x.capped; });
        Solution optimistic = solve(true);
        BisimVerdict v;
        v.pairsExplored = pairs_.size();
        if (!optimistic.alive[static_cast<std::size_t>(root)]) {
            v.kind = BisimVerdict::Kind::Distinguished;
            v.witness = buildAttack(root, optimistic, budget_.witnessDepth);
            return v;
        }
        Solution pessimistic = anyCapped ? solve(false) : optimistic;
        if (pessimistic.alive[static_cast<std::size_t>(root)]) {
            v.kind = BisimVerdict::Kind::Bisimilar;
            for (std::size_t i = 0; i < pairs_.size(); ++i)
                if (pessimistic.alive[i]) v.relation.emplace_back(lts_.term(pairs_[i].left), lts_.term(pairs_[i].right));
            return v;
        }
        v.kind = BisimVerdict::Kind::Unknown;
        std::set<std::string> reasons;
        for (const auto& pi : pairs_)
            if (pi.capped) reasons.insert(pi.capReason);
        for (const auto& r : reasons) v.reason += (v.reason.empty() ? "" : "; ") + r;
        return v;
    }

private:
    struct Solution {
        std::vector<char> alive;
        std::vector<int> failed;      // index of the obligation that failed
        std::vector<long> removedAt;  // removal order
    };

    Lts& lts_;
    GameMode mode_;
    const BisimBudget& budget_;
    std::vector<PairInfo> pairs_;
    std::map<std::pair<int, int>, int> index_;
    std::vector<Label> labels_;
    std::map<Label, int> labelIds_;

    int labelId(const Label& l) {
        auto [it, fresh] = labelIds_.emplace(l, static_cast<int>(labels_.size()));
        if (fresh) labels_.push_back(l);
        return it->second;
    }

    int internPair(int l, int r) {
        auto [it, fresh] = index_.emplace(std::pair{l, r}, static_cast<int>(pairs_.size()));
        if (fresh) {
            PairInfo pi;
            pi.left = l;
            pi.right = r;
            std::string why = compensationOverflow(l);
            if (why.empty()) why = compensationOverflow(r);
            if (!why.empty()) {
                pi.capped = true;
                pi.capReason = why;
            }
            pairs_.push_back(std::move(pi));
        }
        return it->second;
    }

    std::string compensationOverflow(int id) const {
        if (mode_ != GameMode::WeakAsync) return {};
        std::map<Name, int> outs;
        for (const auto& c : parComponents(lts_.term(id)))
            if (c->kind == ProcKind::Output && ++outs[c->name] > budget_.compensationCap)
                return "more than " + std::to_string(budget_.compensationCap) + " pending outputs on " + c->name;
        return {};
    }

    int withOutputs(int id, const Multiset& extra) {
        if (extra.empty()) return id;
        return lts_.intern(mkPar(lts_.term(id), mkOutputs(extra)));
    }

    // Defender answers for an attacker move (lbl, target) made on one side.
    std::vector<Answer> answers(bool onLeft, const Label& lbl, int target, int defender) {
        std::vector<Answer> out;
        auto add = [&](int att, int def, const Label& l, int defTarget) {
            int pid = onLeft ? internPair(att, def) : internPair(def, att);
            out.push_back({pid, labelId(l), defTarget});
        };
        if (mode_ == GameMode::Strong) {
            const std::vector<std::pair<Label, int>>& s = lts_.successors(defender);
            for (const auto& [l, d] : s)
                if (l == lbl) add(target, d, l, d);
            return out;
        }
        const std::vector<std::pair<Label, int>>& weak = lts_.weakSuccessors(defender);
        if (mode_ == GameMode::Weak || lbl.isOut()) {
            for (const auto& [l, d] : weak)
                if (l == lbl) add(target, d, l, d);
            return out;
        }
        const Multiset& theta = lbl.names;
        for (const auto& [gamma, d] : weak) {
            if (gamma.isOut()) continue;
            int att = withOutputs(target, gamma.names - theta);
            int def = withOutputs(d, theta - gamma.names);
            add(att, def, gamma, d);
        }
        return out;
    }

    void expand(int pid) {
        int l = pairs_[static_cast<std::size_t>(pid)].left;
        int r = pairs_[static_cast<std::size_t>(pid)].right;
        if (lts_.pruned(l) || lts_.pruned(r)) {
            pairs_[static_cast<std::size_t>(pid)].capped = true;
            pairs_[static_cast<std::size_t>(pid)].capReason = "transition system truncated by bounds";
            return;
        }
        std::vector<Obligation> obls;
        const std::vector<std::pair<Label, int>>& ls = lts_.successors(l);
        const std::vector<std::pair<Label, int>>& rs = lts_.successors(r);
        for (const auto& [lbl, t] : ls) obls.push_back({true, labelId(lbl), t, answers(true, lbl, t, r)});
        for (const auto& [lbl, t] : rs) obls.push_back({false, labelId(lbl), t, answers(false, lbl, t, l)});
        pairs_[static_cast<std::size_t>(pid)].obligations = std::move(obls);
    }

    Solution solve(bool cappedRelated) {
        std::size_t n = pairs_.size();
        Solution s{std::vector<char>(n, 1), std::vector<int>(n, -1), std::vector<long>(n, -1)};
        std::vector<std::vector<std::pair<int, int>>> users(n);  // pair -> (owner, obligation)
        std::vector<std::vector<int>> alive(n);
        std::vector<int> work;
        long clock = 0;
        auto kill = [&](int p, int obl) {
            auto i = static_cast<std::size_t>(p);
            if (!s.alive[i]) return;
            s.alive[i] = 0;
            s.failed[i] = obl;
            s.removedAt[i] = clock++;
            work.push_back(p);
        };
        for (std::size_t i = 0; i < n; ++i) {
            const auto& pi = pairs_[i];
            alive[i].resize(pi.obligations.size());
            for (std::size_t o = 0; o < pi.obligations.size(); ++o) {
                alive[i][o] = static_cast<int>(pi.obligations[o].answers.size());
                for (const auto& a : pi.obligations[o].answers)
                    users[static_cast<std::size_t>(a.pair)].push_back({static_cast<int>(i), static_cast<int>(o)});
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (pairs_[i].capped && !cappedRelated) {
                kill(static_cast<int>(i), -1);
                continue;
            }
            for (std::size_t o = 0; o < alive[i].size(); ++o)
                if (alive[i][o] == 0) {
                    kill(static_cast<int>(i), static_cast<int>(o));
                    break;
                }
        }
        while (!work.empty()) {
            int dead = work.back();
            work.pop_back();
            for (const auto& [owner, obl] : users[static_cast<std::size_t>(dead)]) {
                auto oi = static_cast<std::size_t>(owner);
                if (!s.alive[oi]) continue;
                if (--alive[oi][static_cast<std::size_t>(obl)] == 0) kill(owner, obl);
            }
        }
        return s;
    }

    std::shared_ptr<Attack> buildAttack(int pid, const Solution& s, int depth) {
        const auto& pi = pairs_[static_cast<std::size_t>(pid)];
        int o = s.failed[static_cast<std::size_t>(pid)];
        if (o < 0) return nullptr;
        const Obligation& ob = pi.obligations[static_cast<std::size_t>(o)];
        auto a = std::make_shared<Attack>();
        a->left = lts_.term(pi.left);
        a->right = lts_.term(pi.right);
        a->onLeft = ob.onLeft;
        a->label = labels_[static_cast<std::size_t>(ob.label)];
        a->target = lts_.term(ob.target);
        for (const auto& ans : ob.answers) {
            const auto& next = pairs_[static_cast<std::size_t>(ans.pair)];
            Defense d{labels_[static_cast<std::size_t>(ans.label)], lts_.term(ans.target), lts_.term(next.left), lts_.term(next.right), nullptr};
            if (depth > 1) d.refutation = buildAttack(ans.pair, s, depth - 1);
            a->defenses.push_back(std::move(d));
        }
        return a;
    }
};

Bounds gameLtsBounds(const BisimBudget& b) { return b.lts; }

BisimVerdict runGame(const Proc& p, const Proc& q, const StateUniverse& env, GameMode mode,
                     const BisimBudget& budget) {
    try {
        Lts lts(env, gameLtsBounds(budget));
        return bisimulationGame(p, q, lts, mode, budget);
    } catch (const ResourceExhausted& e) {
        BisimVerdict v;
        v.kind = BisimVerdict::Kind::Unknown;
        v.reason = e.what();
        return v;
    }
}

}  // namespace

BisimVerdict bisimulationGame(const Proc& p, const Proc& q, Lts& lts, GameMode mode, const BisimBudget& budget) {
    Game g(lts, mode, budget);
    return g.run(p, q);
}

BisimVerdict weakAsyncBisim(const Proc& p, const Proc& q, const StateUniverse& env, const BisimBudget& budget) {
    return runGame(p, q, env, GameMode::WeakAsync, budget);
}

BisimVerdict weakBisim(const Proc& p, const Proc& q, const StateUniverse& env, const BisimBudget& budget) {
    return runGame(p, q, env, GameMode::Weak, budget);
}

BisimVerdict strongBisim(const Proc& p, const Proc& q, const StateUniverse& env, const BisimBudget& budget) {
    return runGame(p, q, env, GameMode::Strong, budget);
}

bool replayWitness(const Attack& w, Lts& lts, GameMode mode) {
    int l = lts.intern(w.left), r = lts.intern(w.right);
    int att = w.onLeft ? l : r, def = w.onLeft ? r : l;
    int target = lts.intern(w.target);
    const auto& moves = lts.successors(att);
    if (std::find(moves.begin(), moves.end(), std::pair<Label, int>{w.label, target}) == moves.end()) return false;

    // Recompute the defender's answers and require each to be covered.
    std::vector<std::pair<Label, int>> answers;
    if (mode == GameMode::Strong) {
        for (const auto& [lbl, d] : lts.successors(def))
            if (lbl == w.label) answers.emplace_back(lbl, d);
    } else {
        for (const auto& [lbl, d] : lts.weakSuccessors(def)) {
            bool ok = (mode == GameMode::Weak || w.label.isOut()) ? lbl == w.label : !lbl.isOut();
            if (ok) answers.emplace_back(lbl, d);
        }
    }
    for (const auto& [lbl, d] : answers) {
        auto it = std::find_if(w.defenses.begin(), w.defenses.end(), [&](const Defense& x) {
            return x.label == lbl && lts.intern(x.target) == d;
        });
        if (it == w.defenses.end()) return false;
        if (it->refutation && !replayWitness(*it->refutation, lts, mode)) return false;
    }
    return true;
}

}  // namespace atccs
