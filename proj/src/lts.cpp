#include "atccs/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace atccs {

std::string Label::str() const {
    if (kind == Kind::Out) {
        std::string s = names.str();
        return s.substr(1, s.size() - 2) + "!";
    }
    if (names.empty()) return "tau";
    return names.str();
}

std::optional<Label> labelOf(const State& before, const State& after) {
    if (after.subsetOf(before)) return Label::block(before - after);
    if (before.subsetOf(after) && after.size() == before.size() + 1)
        return Label::out((after - before).entries().front().first);
    return std::nullopt;
}

std::vector<LabeledStep> labeledSuccessors(const Proc& p, const StateUniverse& env, const CanonOptions& canon) {
    // Names the process cannot mention are inert, so the environment can be
    // projected onto the free names without losing or adding transitions.
    std::set<Name> fn = freeNames(p), names;
    for (const auto& n : env.names())
        if (fn.count(n)) names.insert(n);
    StateUniverse sub(names, env.maxMultiplicity());

    std::vector<LabeledStep> out;
    for (const auto& s : sub.states()) {
        for (const auto& st : stepConfig({p, s})) {
            auto lbl = labelOf(s, st.next.state);
            if (!lbl) throw Error("internal: step from " + s.str() + " to " + st.next.state.str() + " has no label");
            out.push_back({std::move(*lbl), canonicalize(st.next.proc, canon)});
        }
    }
    std::sort(out.begin(), out.end(), [](const LabeledStep& a, const LabeledStep& b) {
        if (a.label != b.label) return a.label < b.label;
        return compare(a.next, b.next) < 0;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const LabeledStep& a, const LabeledStep& b) {
                              return a.label == b.label && equal(a.next, b.next);
                          }),
              out.end());
    return out;
}

// ----------------------------------------------------------------------- Lts

Lts::Lts(StateUniverse env, Bounds bounds) : env_(std::move(env)), bounds_(bounds) {
    canon_.flattenPar = bounds_.canonical;
    canon_.compactBlocks = bounds_.canonical;
    canon_.resetReplCounters = bounds_.maxReplUnfold < 0;
}

int Lts::intern(const Proc& raw) {
    Proc p = canonicalize(raw, canon_);
    auto it = index_.find(p);
    if (it != index_.end()) return it->second;
    if (terms_.size() >= bounds_.maxNodes)
        throw ResourceExhausted("transition system exceeded " + std::to_string(bounds_.maxNodes) + " states");
    int id = static_cast<int>(terms_.size());
    index_.emplace(p, id);
    terms_.push_back(p);
    succ_.emplace_back();
    pruned_.push_back(0);
    tau_.emplace_back();
    weak_.emplace_back();
    return id;
}

namespace {

// Unguarded outputs are counted like state entries: a term holding more
// pending outputs on one name than a state may hold is cut off.
std::string tooManyOutputs(const Proc& p, const Bounds& b) {
    if (b.maxMultiplicity < 0) return {};
    std::map<Name, int> outs;
    std::vector<Proc> stack{p};
    while (!stack.empty()) {
        Proc q = stack.back();
        stack.pop_back();
        if (q->kind == ProcKind::Output && ++outs[q->name] > b.maxMultiplicity)
            return "more than " + std::to_string(b.maxMultiplicity) + " pending outputs on one name";
        if (q->kind == ProcKind::Par) {
            stack.push_back(q->left);
            stack.push_back(q->right);
        }
        if (q->kind == ProcKind::Hide) stack.push_back(q->left);
    }
    return {};
}

std::string overBound(const Proc& p, const Bounds& b) {
    if (std::string why = tooManyOutputs(p, b); !why.empty()) return why;
    if (b.maxComponents >= 0 && parComponents(p).size() > static_cast<std::size_t>(b.maxComponents))
        return "more than " + std::to_string(b.maxComponents) + " parallel components";
    std::vector<Proc> stack{p};
    while (!stack.empty()) {
        Proc q = stack.back();
        stack.pop_back();
        if (q->kind == ProcKind::Hide && b.maxMultiplicity >= 0 && q->count > b.maxMultiplicity)
            return "hidden multiplicity above " + std::to_string(b.maxMultiplicity);
        if (q->kind == ProcKind::Repl && b.maxReplUnfold >= 0 && q->count > b.maxReplUnfold)
            return "replication unfolded more than " + std::to_string(b.maxReplUnfold) + " times";
        if (q->left) stack.push_back(q->left);
        if (q->right) stack.push_back(q->right);
        for (const auto& br : q->branches) stack.push_back(br.cont);
    }
    return {};
}

}  // namespace

const std::vector<std::pair<Label, int>>& Lts::successors(int id) {
    auto idx = static_cast<std::size_t>(id);
    if (!succ_[idx]) {
        std::vector<std::pair<Label, int>> out;
        for (auto& st : labeledSuccessors(terms_[idx], env_, canon_)) {
            std::string why = overBound(st.next, bounds_);
            if (!why.empty()) {
                pruned_[idx] = 1;
                truncated_ = true;
                if (std::find(reasons_.begin(), reasons_.end(), why) == reasons_.end()) reasons_.push_back(why);
                continue;
            }
            int to = intern(st.next);
            out.emplace_back(std::move(st.label), to);
        }
        succ_[idx] = std::move(out);
    }
    return *succ_[idx];
}

bool Lts::pruned(int id) {
    successors(id);
    return pruned_[static_cast<std::size_t>(id)] != 0;
}

bool Lts::expanded(int id) const { return succ_[static_cast<std::size_t>(id)].has_value(); }

void Lts::chargeSaturation(std::size_t entries) {
    saturation_ += entries;
    if (saturation_ > bounds_.maxSaturation)
        throw ResourceExhausted("weak transitions exceeded " + std::to_string(bounds_.maxSaturation) + " entries");
}

const std::vector<int>& Lts::tauClosure(int id) {
    auto idx = static_cast<std::size_t>(id);
    if (!tau_[idx]) {
        std::vector<int> seen{id};
        std::set<int> mark{id};
        for (std::size_t i = 0; i < seen.size(); ++i) {
            for (const auto& [lbl, to] : successors(seen[i]))
                if (lbl.isTau() && mark.insert(to).second) seen.push_back(to);
        }
        std::sort(seen.begin(), seen.end());
        chargeSaturation(seen.size());
        tau_[idx] = std::move(seen);
    }
    return *tau_[idx];
}

// Cached vectors live in deques, so references survive interning new states.
const std::vector<std::pair<Label, int>>& Lts::weakSuccessors(int id) {
    auto idx = static_cast<std::size_t>(id);
    if (!weak_[idx]) {
        std::vector<std::pair<Label, int>> acc;
        const std::vector<int>& pre = tauClosure(id);
        for (int x : pre) acc.emplace_back(Label::tau(), x);
        for (int x : pre) {
            for (const auto& [lbl, y] : successors(x)) {
                if (lbl.isTau()) continue;
                const std::vector<int>& post = tauClosure(y);
                chargeSaturation(post.size());
                for (int t : post) acc.emplace_back(lbl, t);
            }
        }
        std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        weak_[idx] = std::move(acc);
    }
    return *weak_[idx];
}

void Lts::expandFrom(int root) {
    std::vector<int> queue{root};
    std::set<int> seen{root};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        std::vector<std::pair<Label, int>> s = successors(queue[i]);
        for (const auto& [lbl, to] : s)
            if (seen.insert(to).second) queue.push_back(to);
    }
}

std::vector<LtsEdge> Lts::edges() const {
    std::vector<LtsEdge> out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!succ_[i]) continue;
        for (const auto& [lbl, to] : *succ_[i]) out.push_back({static_cast<int>(i), lbl, to});
    }
    return out;
}

std::unique_ptr<Lts> buildLts(const Proc& p, const StateUniverse& env, const Bounds& b) {
    auto lts = std::make_unique<Lts>(env, b);
    lts->expandFrom(lts->intern(p));
    return lts;
}

namespace {

void maxAtomicReads(const Proc& p, int& k) {
    if (p->kind == ProcKind::Atomic || p->kind == ProcKind::Ongoing) k = std::max(k, maxReadMultiplicity(p->expr));
    if (p->left) maxAtomicReads(p->left, k);
    if (p->right) maxAtomicReads(p->right, k);
    for (const auto& b : p->branches) maxAtomicReads(b.cont, k);
}

}  // namespace

StateUniverse defaultEnv(const std::vector<Proc>& terms, int k) {
    std::set<Name> names;
    int reads = 0;
    for (const auto& t : terms) {
        for (const auto& n : freeNames(t)) names.insert(n);
        maxAtomicReads(t, reads);
    }
    return StateUniverse(names, std::max(k, reads));
}

}  // namespace atccs
