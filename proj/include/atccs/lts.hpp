#pragma once

// Labelled transitions derived from the configuration semantics over a
// finite environment of states, and bisimulation games on top of them.

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "atccs/atomic.hpp"
#include "atccs/reduction.hpp"
#include "atccs/term.hpp"

namespace atccs {

struct Label {
    enum class Kind : std::uint8_t { Out, Block };
    Kind kind;
    Multiset names;  // Out: exactly one name; Block: the consumed multiset (τ = ∅)

    static Label out(const Name& a) { return {Kind::Out, Multiset{a}}; }
    static Label block(Multiset m) { return {Kind::Block, std::move(m)}; }
    static Label tau() { return {Kind::Block, {}}; }

    bool isTau() const { return kind == Kind::Block && names.empty(); }
    bool isOut() const { return kind == Kind::Out; }
    const Name& outName() const { return names.entries().front().first; }
    std::string str() const;  // tau, a!, {a,b}

    friend bool operator==(const Label&, const Label&) = default;
    friend auto operator<=>(const Label&, const Label&) = default;
};

struct LabeledStep {
    Label label;
    Proc next;
};

// Label of a configuration step taken from state `before`; nullopt if the
// state change is neither a single output nor a consumption.
std::optional<Label> labelOf(const State& before, const State& after);

// (ā, P') when some σ in env has P;σ → P';σ⊎{a}; (θ, P') when some σ⊎θ in
// env has P;σ⊎θ → P';σ.  Successors are canonicalized.
std::vector<LabeledStep> labeledSuccessors(const Proc& p, const StateUniverse& env,
                                           const CanonOptions& canon = {});

struct LtsEdge {
    int from;
    Label label;
    int to;
};

// Lazily expanded transition system over interned canonical terms.
class Lts {
public:
    Lts(StateUniverse env, Bounds bounds);

    int intern(const Proc& p);
    const Proc& term(int id) const { return terms_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return terms_.size(); }

    const std::vector<std::pair<Label, int>>& successors(int id);
    // True when some successor of `id` was dropped by a bound.
    bool pruned(int id);
    // States reachable by zero or more τ steps (includes id).
    const std::vector<int>& tauClosure(int id);
    // All (μ, t) with id ⇒μ t; μ = τ stands for ⇒ alone.
    const std::vector<std::pair<Label, int>>& weakSuccessors(int id);

    // Breadth-first expansion from `root`; throws ResourceExhausted on the node cap.
    void expandFrom(int root);

    const StateUniverse& env() const { return env_; }
    const Bounds& bounds() const { return bounds_; }
    const CanonOptions& canon() const { return canon_; }
    bool truncated() const { return truncated_; }
    const std::vector<std::string>& truncationReasons() const { return reasons_; }
    std::vector<LtsEdge> edges() const;  // edges of expanded states only
    bool expanded(int id) const;

private:
    StateUniverse env_;
    Bounds bounds_;
    CanonOptions canon_;
    // Deques keep references returned by the accessors valid while new
    // states are interned.
    std::deque<Proc> terms_;
    std::unordered_map<Proc, int, ProcHash, ProcEq> index_;
    std::deque<std::optional<std::vector<std::pair<Label, int>>>> succ_;
    std::vector<char> pruned_;
    std::deque<std::optional<std::vector<int>>> tau_;
    std::deque<std::optional<std::vector<std::pair<Label, int>>>> weak_;
    std::size_t saturation_ = 0;
    bool truncated_ = false;
    std::vector<std::string> reasons_;

    void chargeSaturation(std::size_t entries);
};

std::unique_ptr<Lts> buildLts(const Proc& p, const StateUniverse& env, const Bounds& b = {});

// Default environment: free names of the terms, multiplicity 2 (raised to the
// largest read multiplicity of any atomic block when that is bigger).
StateUniverse defaultEnv(const std::vector<Proc>& terms, int k = 2);

// ------------------------------------------------------------ bisimulation

inline Bounds defaultGameBounds() {
    Bounds b;
    b.maxReplUnfold = -1;
    b.maxSteps = -1;
    b.maxNodes = 50000;
    b.maxSaturation = 5000000;
    b.maxComponents = 16;
    return b;
}

struct BisimBudget {
    int compensationCap = 4;          // pending compensation outputs per name
    std::size_t maxPairs = 200000;
    int witnessDepth = 8;
    Bounds lts = defaultGameBounds();
};

struct Attack;

struct Defense {
    Label label;
    Proc target;
    Proc nextLeft, nextRight;
    std::shared_ptr<Attack> refutation;  // null when the depth limit cut the tree
};

// The attacker's move on a pair, and every answer of the defender.
struct Attack {
    Proc left, right;
    bool onLeft;
    Label label;
    Proc target;
    std::vector<Defense> defenses;
};

struct BisimVerdict {
    enum class Kind { Bisimilar, Distinguished, Unknown };
    Kind kind;
    std::vector<std::pair<Proc, Proc>> relation;  // Bisimilar
    std::shared_ptr<Attack> witness;              // Distinguished
    std::string reason;                           // Unknown
    std::size_t pairsExplored = 0;

    bool bisimilar() const { return kind == Kind::Bisimilar; }
    bool distinguished() const { return kind == Kind::Distinguished; }
};

std::string kindName(BisimVerdict::Kind k);

enum class GameMode { Strong, Weak, WeakAsync };

BisimVerdict bisimulationGame(const Proc& p, const Proc& q, Lts& lts, GameMode mode, const BisimBudget& budget);

BisimVerdict weakAsyncBisim(const Proc& p, const Proc& q, const StateUniverse& env, const BisimBudget& budget = {});
BisimVerdict weakBisim(const Proc& p, const Proc& q, const StateUniverse& env, const BisimBudget& budget = {});
BisimVerdict strongBisim(const Proc& p, const Proc& q, const StateUniverse& env, const BisimBudget& budget = {});

// Replays a distinguishing strategy against the LTS: the attack move exists,
// and every defender answer currently available is listed and refuted.
bool replayWitness(const Attack& w, Lts& lts, GameMode mode);

}  // namespace atccs
